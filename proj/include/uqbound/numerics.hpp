#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "uqbound/errors.hpp"

namespace uqb {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// Compensated (Neumaier) summation.  Used wherever a bound must stay stable
// across wildly different term counts, e.g. sums of squared increments with
// n up to 1e6.
inline double neumaier_sum(std::span<const double> xs) {
    double s = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    return s + comp;
}

inline double neumaier_sum(const std::vector<double>& xs) {
    return neumaier_sum(std::span<const double>(xs));
}

// log(sum_i w_i * exp(a_i)) without overflow.  Weights must be nonnegative;
// terms with zero weight are skipped so a_i may be anything there.
inline double log_sum_exp(std::span<const double> a, std::span<const double> w) {
    double m = -inf;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (w[i] > 0.0) m = std::max(m, a[i]);
    if (m == -inf) return -inf;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (w[i] > 0.0) s += w[i] * std::exp(a[i] - m);
    return m + std::log(s);
}

// 1 / (1 + e^{-x}) evaluated without overflow in either tail.
inline double stable_logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// Standard normal density and distribution function.
inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

struct RootResult {
    double x = 0.0;
    int iterations = 0;
    double residual = 0.0; // |g(x) - target| at the returned point
};

// Bisection for g(x) = target on [lo, hi] where g is increasing and the
// bracket is valid (g(lo) <= target <= g(hi)).  Stops when the residual
// drops below rel_tol * max(1, |target|) or the bracket collapses to
// machine width; throws nonconvergence_error if neither happens.
inline RootResult bisect_increasing(const std::function<double(double)>& g,
                                    double lo, double hi, double target,
                                    double rel_tol = 1e-10, int max_iter = 200) {
    const double tol = rel_tol * std::max(1.0, std::abs(target));
    RootResult best{0.5 * (lo + hi), 0, inf};
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        double val = g(mid);
        double res = std::abs(val - target);
        if (res < best.residual) best = {mid, it + 1, res};
        if (res <= tol) {
            best.iterations = it + 1;
            return best;
        }
        if (val < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= std::abs(mid) * 4.0 * std::numeric_limits<double>::epsilon())
            break;
    }
    if (best.residual <= tol) return best;
    throw nonconvergence_error("bisection: residual " + std::to_string(best.residual) +
                               " above tolerance after bracket collapse");
}

// Golden-section minimization of a unimodal function on [lo, hi].
// Fallback optimizer for envelope objectives whose derivative is awkward.
inline double golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double tol = 1e-12,
                                 int max_iter = 400) {
    static const double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit generator word.
// Pinned to a bit pattern so sample streams are reproducible across
// platforms and standard library versions.
template <class Rng>
double canonical_uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace uqb
