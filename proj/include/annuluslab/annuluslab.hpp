#pragma once

#include "annuluslab/error.hpp"
#include "annuluslab/rational.hpp"
#include "annuluslab/lift.hpp"
#include "annuluslab/rotation.hpp"
#include "annuluslab/annulus.hpp"
#include "annuluslab/report.hpp"
#include "annuluslab/fragmentation.hpp"
#include "annuluslab/bounds.hpp"
#include "annuluslab/sampler.hpp"
#include "annuluslab/qm_lab.hpp"
#include "annuluslab/document.hpp"
#include "annuluslab/commands.hpp"
