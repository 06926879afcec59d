#pragma once

#include <functional>
#include <utility>

#include "uqbound/numerics.hpp"

namespace uqb {

// Cumulant generating function of a centered quantity of interest:
// H(c) = log E[exp(c (f(X) - E f(X)))].  Always H(0) = 0, H'(0) = 0,
// H''(0) = Var f(X).  Evaluation outside (domain_lo, domain_hi) may
// return +inf or throw, depending on the backing implementation.
struct CumulantFunction {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> second;
    double domain_lo = -inf;
    double domain_hi = inf;

    double operator()(double c) const { return value(c); }
};

// H(-c) as a cumulant function.  Turns every lower-tail problem into an
// upper-tail one, so optimizers only ever search c > 0.
inline CumulantFunction reflect(const CumulantFunction& h) {
    CumulantFunction r;
    r.value = [v = h.value](double c) { return v(-c); };
    r.deriv = [d = h.deriv](double c) { return -d(-c); };
    r.second = [s = h.second](double c) { return s(-c); };
    r.domain_lo = (h.domain_hi == inf) ? -inf : -h.domain_hi;
    r.domain_hi = (h.domain_lo == -inf) ? inf : -h.domain_lo;
    return r;
}

// Cumulant of a centered Gaussian with the given variance: c^2 v / 2.
// Optionally restricted to |c| < c_max (evaluates to +inf outside).
inline CumulantFunction gaussian_cgf(double variance,
                                     double c_max = inf) {
    CumulantFunction h;
    h.value = [variance, c_max](double c) {
        if (std::abs(c) >= c_max) return inf;
        return 0.5 * c * c * variance;
    };
    h.deriv = [variance, c_max](double c) {
        if (std::abs(c) >= c_max) return inf;
        return c * variance;
    };
    h.second = [variance, c_max](double c) {
        if (std::abs(c) >= c_max) return inf;
        return variance;
    };
    h.domain_lo = -c_max;
    h.domain_hi = c_max;
    return h;
}

} // namespace uqb
