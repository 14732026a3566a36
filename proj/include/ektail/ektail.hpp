// Umbrella header.
#pragma once

#include "ektail/csv.hpp"
#include "ektail/distributions.hpp"
#include "ektail/estimators.hpp"
#include "ektail/gof.hpp"
#include "ektail/limit_process.hpp"
#include "ektail/montecarlo.hpp"
#include "ektail/parallel.hpp"
#include "ektail/report.hpp"
#include "ektail/rng.hpp"
#include "ektail/selection.hpp"
#include "ektail/step_function.hpp"
#include "ektail/tail_empirical.hpp"
#include "ektail/window.hpp"
