#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "uqbound/cumulant.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"
#include "uqbound/quadrature.hpp"

namespace uqb::models {

// Normal(mu, sigma^2) conditioned on [lo, hi]; either endpoint may be
// infinite.
struct TruncatedNormalModel {
    double mu = 0.0;
    double sigma = 1.0;
    double lo = -inf;
    double hi = inf;

    void validate() const {
        if (!(sigma > 0.0))
            throw domain_error("truncated normal: sigma must be positive");
        if (!(lo < hi))
            throw domain_error("truncated normal: need lo < hi");
        if (mass() <= 0.0)
            throw domain_error("truncated normal: no mass on the truncation interval");
    }

    double alpha() const { return (lo - mu) / sigma; }
    double beta() const { return (hi - mu) / sigma; }
    double mass() const { return normal_cdf(beta()) - normal_cdf(alpha()); }
};

struct TruncatedNormalMoments {
    double mean = 0.0;
    double variance = 0.0;
};

namespace detail {

// x * pdf(x) with the convention that it vanishes at infinite x.
inline double x_phi(double x) {
    if (std::isinf(x)) return 0.0;
    return x * normal_pdf(x);
}

inline double phi_or_zero(double x) {
    return std::isinf(x) ? 0.0 : normal_pdf(x);
}

} // namespace detail

// Closed-form mean and variance of the truncated normal.
inline TruncatedNormalMoments truncated_normal_moments(const TruncatedNormalModel& m) {
    m.validate();
    double a = m.alpha(), b = m.beta(), z = m.mass();
    double pa = detail::phi_or_zero(a), pb = detail::phi_or_zero(b);
    double dphi = (pa - pb) / z;
    double mean = m.mu + m.sigma * dphi;
    double variance = m.sigma * m.sigma *
                      (1.0 + (detail::x_phi(a) - detail::x_phi(b)) / z - dphi * dphi);
    return {mean, variance};
}

inline double truncated_normal_pdf(const TruncatedNormalModel& m, double x) {
    if (x < m.lo || x > m.hi) return 0.0;
    return normal_pdf((x - m.mu) / m.sigma) / (m.sigma * m.mass());
}

// Cumulant of X - E[X] built by quadrature; every tilt has a finite mgf
// because the Gaussian tail dominates e^{cx}.
inline CumulantFunction truncated_normal_cgf(const TruncatedNormalModel& m,
                                             double tol = 1e-9) {
    m.validate();
    return cgf_quadrature([m](double x) { return truncated_normal_pdf(m, x); },
                          m.lo, m.hi, [](double x) { return x; }, tol);
}

// Rejection from the parent normal (Box-Muller from canonical uniforms).
// Fine for truncation windows with nonnegligible mass, which is all the
// examples here use.
inline std::vector<double> truncated_normal_sample(const TruncatedNormalModel& m,
                                                   std::size_t n, std::mt19937_64& rng) {
    m.validate();
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        double u1 = canonical_uniform(rng);
        double u2 = canonical_uniform(rng);
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double z1 = r * std::cos(2.0 * std::numbers::pi * u2);
        double z2 = r * std::sin(2.0 * std::numbers::pi * u2);
        for (double z : {z1, z2}) {
            double x = m.mu + m.sigma * z;
            if (x >= m.lo && x <= m.hi && out.size() < n) out.push_back(x);
        }
    }
    return out;
}

} // namespace uqb::models
