#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "uqbound/concentration.hpp"
#include "uqbound/cumulant.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb::models {

struct ExponentialModel {
    double rate = 1.0;

    void validate() const {
        if (!(rate > 0.0))
            throw domain_error("exponential model: rate must be positive");
    }

    double mean() const { return 1.0 / rate; }
    double variance() const { return 1.0 / (rate * rate); }
};

// Cumulant of X - 1/rate for X ~ Exp(rate):
//   H(c) = -log(1 - c/rate) - c/rate,  finite for c < rate.
inline CumulantFunction exponential_centered_cgf(const ExponentialModel& model) {
    model.validate();
    double lam = model.rate;
    CumulantFunction h;
    h.domain_lo = -inf;
    h.domain_hi = lam;
    h.value = [lam](double c) {
        if (c >= lam) return inf;
        return -std::log1p(-c / lam) - c / lam;
    };
    h.deriv = [lam](double c) {
        if (c >= lam) return inf;
        return c / (lam * (lam - c));
    };
    h.second = [lam](double c) {
        if (c >= lam) return inf;
        return 1.0 / ((lam - c) * (lam - c));
    };
    return h;
}

// Quadratic-over-an-interval envelope for the unit-rate model, from the
// elementary series bound 1 + c + 2c^2 <= exp(c + 2c^2) on |c| < 1/2.
// Stored centered (the linear drift c * mean is stripped), so
// Phi(c) = exp(c^2 / (2 sigma_b^2)) with sigma_b = 1/2 on |c| < 1/2.
// The bound is specific to rate 1 and deliberately not generalized.
inline ConcentrationBound sub_exponential_envelope(const ExponentialModel& model) {
    model.validate();
    if (model.rate != 1.0)
        throw domain_error("sub_exponential_envelope: only the unit-rate model is supported");
    return IntervalSubGaussianBound{0.5, 0.5, 1.0};
}

// Inverse-CDF sampler, bit-reproducible for a fixed generator state.
inline std::vector<double> exponential_sample(const ExponentialModel& model,
                                              std::size_t n, std::mt19937_64& rng) {
    model.validate();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = -std::log1p(-canonical_uniform(rng)) / model.rate;
    return out;
}

} // namespace uqb::models
