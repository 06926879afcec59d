#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uqbound/concentration.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb {

// Bounded-difference (oscillation) constants of a statistic of n inputs:
// changing input k moves the statistic by at most d[k].  For iid-style
// statistics iid_c records a constant C with d[k] <= C/n.
struct BoundedDifferences {
    std::vector<double> d;
    std::optional<double> iid_c;

    std::size_t n() const { return d.size(); }

    void validate() const {
        if (d.empty())
            throw domain_error("bounded differences: empty constant list");
        for (double v : d)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw domain_error("bounded differences: constants must be finite and >= 0");
        if (iid_c) {
            double per = *iid_c / static_cast<double>(d.size());
            for (double v : d)
                if (v > per * (1.0 + 1e-12))
                    throw domain_error("bounded differences: d_k exceeds iid_c / n");
        }
    }

    // sum of d_k^2, compensated so n up to 1e6 keeps full precision.
    double sum_sq() const {
        std::vector<double> sq(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) sq[i] = d[i] * d[i];
        return neumaier_sum(sq);
    }
};

// A statistic with bounded differences has a centered mgf dominated by
// exp(c^2 sum d_k^2 / 8); package that as a sub-Gaussian envelope with
// sigma_b^2 = sum d_k^2 / 4.
inline ConcentrationBound mcdiarmid_mgf_envelope(const BoundedDifferences& bd) {
    bd.validate();
    return SubGaussianBound{0.5 * std::sqrt(bd.sum_sq())};
}

enum class EstimatorBoundMode {
    conservative, // sqrt(sum d^2) * sqrt(2 total_kl): the classical constant
    optimized     // sqrt(sum d^2 * total_kl / 2): exact minimization, half as large
};

// Bias bound for an n-input statistic under per-coordinate divergence
// budgets (independent inputs, so the budgets add).
inline double estimator_bias_bound(const BoundedDifferences& bd,
                                   std::span<const double> kl_per_coordinate,
                                   EstimatorBoundMode mode = EstimatorBoundMode::conservative) {
    bd.validate();
    if (kl_per_coordinate.size() != bd.d.size())
        throw domain_error("estimator_bias_bound: need one divergence budget per coordinate");
    for (double r : kl_per_coordinate)
        if (!(r >= 0.0))
            throw domain_error("estimator_bias_bound: divergence budgets must be >= 0");
    double total_kl = neumaier_sum(kl_per_coordinate);
    double ssq = bd.sum_sq();
    if (mode == EstimatorBoundMode::conservative)
        return std::sqrt(ssq) * std::sqrt(2.0 * total_kl);
    return std::sqrt(0.5 * ssq * total_kl);
}

// Pointwise bias bound on the empirical distribution function: the CDF at
// a point is a mean of indicators with d_k = 1/n, so the bound
// sqrt(n (1/n)^2) * sqrt(2 n kl) = sqrt(2 kl) carries no n at all.
inline double cdf_bias_bound(double kl_per_sample) {
    if (!(kl_per_sample >= 0.0))
        throw domain_error("cdf_bias_bound: divergence budget must be >= 0");
    return std::sqrt(2.0 * kl_per_sample);
}

// Bias bound for the unbiased sample variance of inputs with |x| <= m_abs:
// each coordinate moves it by at most 8 m^2 / (n - 1).
inline double sample_variance_bias_bound(double m_abs, int n, double kl_per_sample) {
    if (!(m_abs > 0.0))
        throw domain_error("sample_variance_bias_bound: need a positive magnitude bound");
    if (n < 2) throw domain_error("sample_variance_bias_bound: need n >= 2");
    if (!(kl_per_sample >= 0.0))
        throw domain_error("sample_variance_bias_bound: divergence budget must be >= 0");
    return 8.0 * m_abs * m_abs * n / (n - 1.0) * std::sqrt(2.0 * kl_per_sample);
}

// Its n -> inf limit, for reporting the asymptotic constant.
inline double sample_variance_bias_limit(double m_abs, double kl_per_sample) {
    if (!(m_abs > 0.0))
        throw domain_error("sample_variance_bias_limit: need a positive magnitude bound");
    if (!(kl_per_sample >= 0.0))
        throw domain_error("sample_variance_bias_limit: divergence budget must be >= 0");
    return 8.0 * m_abs * m_abs * std::sqrt(2.0 * kl_per_sample);
}

// Total-variation route for comparison: |E_Q g - E_P g| over the n-fold
// product is at most sup|g| * sqrt(2 n kl).  Grows like sqrt(n), which is
// exactly the scaling problem the coordinate-wise route avoids.
inline double pinsker_bound(double g_sup, int n, double kl_per_sample) {
    if (!(g_sup >= 0.0))
        throw domain_error("pinsker_bound: sup|g| must be >= 0");
    if (n < 1) throw domain_error("pinsker_bound: n must be positive");
    if (!(kl_per_sample >= 0.0))
        throw domain_error("pinsker_bound: divergence budget must be >= 0");
    return g_sup * std::sqrt(2.0 * n * kl_per_sample);
}

// F_hat(x) for an ascending sample: fraction of points <= x.
inline double empirical_cdf(std::span<const double> sorted_sample, double x) {
    if (sorted_sample.empty())
        throw domain_error("empirical_cdf: empty sample");
    auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), x);
    return static_cast<double>(it - sorted_sample.begin()) /
           static_cast<double>(sorted_sample.size());
}

// Half-width of the level-(1-alpha) Dvoretzky-Kiefer-Wolfowitz band.
inline double dkw_epsilon(int n, double alpha) {
    if (n < 1) throw domain_error("dkw_epsilon: n must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw domain_error("dkw_epsilon: alpha must lie in (0, 1)");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * n));
}

// CDF envelope combining sampling error (DKW at level alpha) with model
// misspecification up to divergence eta^2 per sample (total-variation
// radius sqrt(2) * eta).  Valid at every finite n; nothing asymptotic.
struct ConfidenceBand {
    std::vector<double> xs;
    std::vector<double> lower;
    std::vector<double> upper;
    double alpha = 0.0;
    double eta = 0.0;
    int n = 0;
    double epsilon_n = 0.0;

    void validate() const {
        if (xs.size() != lower.size() || xs.size() != upper.size())
            throw domain_error("confidence band: ragged columns");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (lower[i] < 0.0 || upper[i] > 1.0 || lower[i] > upper[i])
                throw domain_error("confidence band: limits out of order at index " +
                                   std::to_string(i));
            if (i > 0 && (lower[i] < lower[i - 1] || upper[i] < upper[i - 1]))
                throw domain_error("confidence band: limits must be nondecreasing in x");
        }
    }
};

// Build the band on the given grid; an empty grid means the sorted sample
// bracketed by -inf and +inf so the 0 and 1 plateaus are explicit.
inline ConfidenceBand confidence_band(std::span<const double> sample,
                                      std::span<const double> xs,
                                      double alpha, double eta) {
    if (sample.empty())
        throw domain_error("confidence_band: empty sample");
    if (!(eta >= 0.0))
        throw domain_error("confidence_band: eta must be >= 0");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    ConfidenceBand band;
    band.alpha = alpha;
    band.eta = eta;
    band.n = static_cast<int>(sorted.size());
    band.epsilon_n = dkw_epsilon(band.n, alpha);

    if (xs.empty()) {
        band.xs.push_back(-inf);
        band.xs.insert(band.xs.end(), sorted.begin(), sorted.end());
        band.xs.push_back(inf);
    } else {
        band.xs.assign(xs.begin(), xs.end());
        if (!std::is_sorted(band.xs.begin(), band.xs.end()))
            throw domain_error("confidence_band: grid must be ascending");
    }

    double slack = std::numbers::sqrt2 * eta + band.epsilon_n;
    band.lower.resize(band.xs.size());
    band.upper.resize(band.xs.size());
    for (std::size_t i = 0; i < band.xs.size(); ++i) {
        double fhat = empirical_cdf(sorted, band.xs[i]);
        band.lower[i] = std::clamp(fhat - slack, 0.0, 1.0);
        band.upper[i] = std::clamp(fhat + slack, 0.0, 1.0);
    }
    return band;
}

} // namespace uqb
