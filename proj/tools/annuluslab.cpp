// annuluslab: command-line front end for the exact lift/annulus workbench.
//
//   annuluslab analyze twist.json
//   annuluslab fragment lift.json --emit | annuluslab verify
//   annuluslab probe defect --seed 7 --trials 10000
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
// parse or module errors.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annuluslab/commands.hpp"

namespace {

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_source(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw annuluslab::Error(annuluslab::ErrorCode::InvalidArgument, "cannot open " + path);
  return read_all(in);
}

bool takes_input(const std::string& command) { return command != "sample" && command != "probe"; }

}  // namespace

int main(int argc, char** argv) {
  using namespace annuluslab;

  CLI::App app{"Exact workbench for circle lifts and annulus boundary traces"};
  app.set_version_flag("--version", "annuluslab 1.0");

  std::string command;
  std::vector<std::string> inputs;
  std::string regime = "general";
  bool open_annulus = false;
  long iterations = 1L << 12;
  long q_max = 8;
  std::string width = "1/64";
  std::uint64_t seed = 0;
  long trials = 0;
  std::string qm;
  long n_max = 8;
  long count = 1;
  std::string sample_kind = "lift";
  std::string format = "human";
  bool emit = false;

  app.add_option("command", command, "analyze | tau | fragment | verify | plan | audit | bounds | sample | probe")
      ->required();
  app.add_option("inputs", inputs,
                 "Document files ('-' for stdin; stdin is read when none is given). For probe, the first "
                 "argument names the probe: defect, homogeneity, conjugation, gap, bavard, drift");
  app.add_option("--regime", regime, "Regularity: r0, general, or rN (N != 2, 3 for cl)");
  app.add_flag("--open-annulus", open_annulus, "Assume the sharper open-annulus interior count");
  app.add_option("--iterations", iterations, "Largest iterate used by the translation-number doubling");
  app.add_option("--q-max", q_max, "Largest period tried by rational detection");
  app.add_option("--width", width, "Target width p/q of translation-number enclosures");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sample and probe defect");
  auto* trials_opt = app.add_option("--trials", trials, "Trial count for probe defect");
  auto* qm_opt = app.add_option("--qm", qm, "Quasi-morphism for probe defect: tau_circle or rho_annulus");
  app.add_option("--n-max", n_max, "Largest power for probe homogeneity; window for probe drift");
  app.add_option("--count", count, "Number of elements for sample");
  app.add_option("--kind", sample_kind, "Element kind for sample: lift or annulus");
  app.add_option("--format", format, "Report format: human or json")->check(CLI::IsMember({"human", "json"}));
  app.add_flag("--emit", emit, "Print only the produced document (fragment, plan, sample --count 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const OutputFormat out_format = parse_output_format(format);
  try {
    CommandFlags flags;
    flags.regime = regime;
    flags.open_annulus = open_annulus;
    flags.iterations = iterations;
    flags.q_max = q_max;
    flags.width = parse_rational(width);
    if (*seed_opt) flags.seed = seed;
    if (*trials_opt) flags.trials = trials;
    if (*qm_opt) flags.qm = qm;
    flags.n_max = n_max;
    flags.count = count;
    flags.sample_kind = sample_kind;

    std::vector<std::string> sources = inputs;
    if (command == "probe" && !sources.empty()) {
      flags.probe = sources.front();
      sources.erase(sources.begin());
    }
    if (sources.empty() && takes_input(command)) sources.push_back("-");

    std::vector<Document> docs;
    for (const auto& s : sources) docs.push_back(parse_document(read_source(s)));

    const Report report = run_command(command, docs, flags);
    if (emit) {
      if (!report.document) throw Error(ErrorCode::InvalidArgument, "--emit: " + command + " produced no document");
      std::cout << dump_canonical(*report.document);
    } else {
      std::cout << write_report(report, out_format);
    }
    return report.exit_code();
  } catch (const Error& e) {
    if (out_format == OutputFormat::json) std::cout << dump_canonical(error_json(command, e));
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
