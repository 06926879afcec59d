#pragma once

#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "uqbound/cumulant.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb {

struct QuadratureOptions {
    double tol = 1e-9;  // target relative error of the adaptive rule
    int max_depth = 15;
};

// Adaptive Gauss-Kronrod integration on [lo, hi]; endpoints may be
// infinite.  Throws nonconvergence_error if the error estimate does not
// meet the tolerance (relative to max(1, |I|)).
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        const QuadratureOptions& opts = {}) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    double val = rule::integrate(f, lo, hi, opts.max_depth, opts.tol, &err);
    if (!std::isfinite(val))
        throw nonconvergence_error("integrate: non-finite result");
    if (err > opts.tol * std::max(1.0, std::abs(val)) * 100.0)
        throw nonconvergence_error("integrate: error estimate " + std::to_string(err) +
                                   " exceeds tolerance");
    return val;
}

// Cumulant generating function of f(X) - E[f(X)] for X with the given
// density on [lo, hi], all moments computed by adaptive quadrature.
// (c_lo, c_hi) declares where the raw moment generating function is known
// to be finite; evaluations outside it are rejected rather than trusted.
// The density must integrate to one on the support.
inline CumulantFunction cgf_quadrature(std::function<double(double)> density,
                                       double lo, double hi,
                                       std::function<double(double)> f,
                                       double tol = 1e-9,
                                       double c_lo = -inf, double c_hi = inf) {
    QuadratureOptions opts{tol, 15};
    double mass = integrate(density, lo, hi, opts);
    if (std::abs(mass - 1.0) > std::max(1e-8, 100.0 * tol))
        throw domain_error("cgf_quadrature: density integrates to " +
                           std::to_string(mass) + ", expected 1");
    double mu = integrate([&](double x) { return density(x) * f(x); }, lo, hi, opts);

    auto check_domain = [c_lo, c_hi](double c) {
        if (!(c > c_lo && c < c_hi))
            throw domain_error("cgf_quadrature: c=" + std::to_string(c) +
                               " outside declared finiteness interval");
    };

    // Tilted moments share one pattern: integrate density * e^{c (f - mu)}
    // times a power of (f - mu).  The product is assembled as a single
    // exponential so that a tilt factor overflowing where the density has
    // already underflowed cancels to zero instead of producing inf * 0.
    auto tilted_raw = [density, f, mu, lo, hi, opts](double c, int power) {
        return integrate([&](double x) {
            double g = density(x);
            if (!(g > 0.0)) return 0.0;
            double fc = f(x) - mu;
            double w = std::exp(c * fc + std::log(g));
            for (int k = 0; k < power; ++k) w *= fc;
            return w;
        }, lo, hi, opts);
    };

    CumulantFunction h;
    h.domain_lo = c_lo;
    h.domain_hi = c_hi;
    h.value = [tilted_raw, check_domain](double c) {
        check_domain(c);
        return std::log(tilted_raw(c, 0));
    };
    h.deriv = [tilted_raw, check_domain](double c) {
        check_domain(c);
        return tilted_raw(c, 1) / tilted_raw(c, 0);
    };
    h.second = [tilted_raw, check_domain](double c) {
        check_domain(c);
        double z = tilted_raw(c, 0);
        double m1 = tilted_raw(c, 1) / z;
        return tilted_raw(c, 2) / z - m1 * m1;
    };
    return h;
}

} // namespace uqb
