#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "uqbound/distribution.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb {

// A point estimate with the variance of the estimator itself (not the
// population variance); this is what calibrates a divergence-ball radius
// around the estimate.
struct MomentEstimate {
    double value = 0.0;
    double variance_of_estimator = 0.0;
    int n = 0;
};

namespace detail {

struct SampleMoments {
    double mean = 0.0;
    double var_unbiased = 0.0; // 1/(n-1) sum (x - mean)^2
    double n = 0.0;
};

inline SampleMoments sample_moments(std::span<const double> sample,
                                    const char* who) {
    if (sample.size() < 2)
        throw domain_error(std::string(who) + ": need at least 2 samples");
    SampleMoments m;
    m.n = static_cast<double>(sample.size());
    m.mean = neumaier_sum(sample) / m.n;
    std::vector<double> sq(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        sq[i] = (sample[i] - m.mean) * (sample[i] - m.mean);
    m.var_unbiased = neumaier_sum(sq) / (m.n - 1.0);
    return m;
}

} // namespace detail

// Sample mean; estimator variance = sample variance / n.
inline MomentEstimate mean_estimate(std::span<const double> sample) {
    auto m = detail::sample_moments(sample, "mean_estimate");
    return {m.mean, m.var_unbiased / m.n, static_cast<int>(sample.size())};
}

// Sample variance, unbiased (1/(n-1)) or plug-in (1/n) per the flag; the
// estimator variance uses the Gaussian-case formula 2 V^2 / (n - 1) with
// the unbiased V in either case.
inline MomentEstimate variance_estimate(std::span<const double> sample,
                                        bool bias_adjusted = true) {
    auto m = detail::sample_moments(sample, "variance_estimate");
    double v = m.var_unbiased;
    double value = bias_adjusted ? v : (m.n - 1.0) / m.n * v;
    return {value, 2.0 * v * v / (m.n - 1.0), static_cast<int>(sample.size())};
}

// Raw moment generating function estimate (1/n) sum exp(c x_i), with the
// first-order (delta method) estimator variance c^2 exp(2 c mean) var / n
// evaluated at the sample moments.  Refuses arguments whose exponentials
// leave double range; cumulant evaluation below has no such limit.
inline MomentEstimate mgf_estimate(std::span<const double> sample, double c) {
    auto m = detail::sample_moments(sample, "mgf_estimate");
    for (double x : sample)
        if (c * x > 700.0)
            throw overflow_error("mgf_estimate: c * x = " + std::to_string(c * x) +
                                 " exceeds the exponent range; use empirical_cgf instead");
    std::vector<double> e(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) e[i] = std::exp(c * sample[i]);
    double value = neumaier_sum(e) / m.n;
    double var = c * c * std::exp(2.0 * c * m.mean) * m.var_unbiased / m.n;
    return {value, var, static_cast<int>(sample.size())};
}

// Cumulant generating function of the centered empirical measure.
// Evaluation is log-space throughout, so it is finite for every real c
// (finite sums), including the large probes the tilt solver uses to
// detect the supremum regime.
inline CumulantFunction empirical_cgf(std::span<const double> sample) {
    if (sample.size() < 2)
        throw domain_error("empirical_cgf: need at least 2 samples");
    std::vector<double> values(sample.begin(), sample.end());
    std::vector<double> weights(sample.size(),
                                1.0 / static_cast<double>(sample.size()));
    return detail::cgf_from_points(std::move(values), std::move(weights));
}

} // namespace uqb
