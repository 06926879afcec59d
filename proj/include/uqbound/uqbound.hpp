#pragma once

// Umbrella header: certified bias bounds for expectations under model
// misspecification measured in relative entropy.

#include "uqbound/concentration.hpp"
#include "uqbound/cumulant.hpp"
#include "uqbound/distribution.hpp"
#include "uqbound/divergence.hpp"
#include "uqbound/empirical.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/estimator.hpp"
#include "uqbound/models/exponential.hpp"
#include "uqbound/models/ising.hpp"
#include "uqbound/models/truncated_normal.hpp"
#include "uqbound/models/weibull.hpp"
#include "uqbound/numerics.hpp"
#include "uqbound/quadrature.hpp"
#include "uqbound/version.hpp"
