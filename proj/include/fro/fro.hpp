#pragma once

// Umbrella header for the fractional relaxation-oscillation library.

#include "fro/analytic.hpp"
#include "fro/convergence.hpp"
#include "fro/dataio.hpp"
#include "fro/expr.hpp"
#include "fro/mittag_leffler.hpp"
#include "fro/problem.hpp"
#include "fro/solver.hpp"
#include "fro/svg.hpp"
#include "fro/version.hpp"
