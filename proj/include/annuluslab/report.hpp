#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace annuluslab {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ordered list of named checks. Verification never throws on bad input; it
/// records the failure here instead.
struct CheckReport {
  std::vector<Check> checks;

  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }

  void append(const CheckReport& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
  }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.passed) out.push_back(c.name);
    }
    return out;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace annuluslab
