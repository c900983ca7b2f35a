#pragma once

// bell-lab: simulation and analysis toolkit for multi-party correlation
// experiments: behaviors, local-hidden-variable models and their polytope,
// quantum violations, nonlocal boxes, relativistic causal models, and a
// reproducible Monte Carlo harness.

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/harness.hpp"
#include "bell_lab/info.hpp"
#include "bell_lab/io.hpp"
#include "bell_lab/lhv.hpp"
#include "bell_lab/membership.hpp"
#include "bell_lab/nonlocal_box.hpp"
#include "bell_lab/quantum.hpp"
#include "bell_lab/relativity.hpp"
#include "bell_lab/rng.hpp"
#include "bell_lab/scenario.hpp"
#include "bell_lab/simplex.hpp"
#include "bell_lab/tally.hpp"
