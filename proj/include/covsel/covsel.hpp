#pragma once

// Sparse inverse-covariance estimation by penalized likelihood: weighted
// graphical-lasso coordinate descent, LASSO / SCAD / adaptive-LASSO drivers,
// BIC and cross-validation tuning, and a seeded simulation harness.

#include "covsel/experiment.hpp"
#include "covsel/estimators.hpp"
#include "covsel/glasso.hpp"
#include "covsel/io.hpp"
#include "covsel/matrix.hpp"
#include "covsel/metrics.hpp"
#include "covsel/penalty.hpp"
#include "covsel/seeding.hpp"
#include "covsel/simdata.hpp"
#include "covsel/tuning.hpp"
