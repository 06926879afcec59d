#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"
#include "uqbound/quadrature.hpp"

namespace uqb::models {

// Weibull(shape, scale) lifetime law with density
// (shape/scale) (t/scale)^{shape-1} exp(-(t/scale)^shape) on t > 0.
struct WeibullModel {
    double shape = 1.0; // dimensionless
    double scale = 1.0; // cycles

    void validate() const {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw domain_error("weibull model: shape and scale must be positive");
    }
};

struct FailureData {
    std::vector<double> times; // cycles, all positive

    void validate() const {
        if (times.size() < 2)
            throw domain_error("failure data: need at least 2 observations");
        for (double t : times)
            if (!(t > 0.0))
                throw domain_error("failure data: times must be positive");
    }
};

// The bundled lifetime test measurements the battery example fits.
inline const std::vector<double>& battery_failure_times() {
    static const std::vector<double> times = {
        1373.0, 1470.0, 1520.0, 1427.0, 892.0, 814.0,
        777.0, 637.0, 927.0, 688.0, 857.0, 866.0};
    return times;
}

inline double weibull_cdf(const WeibullModel& m, double t) {
    m.validate();
    if (t < 0.0) throw domain_error("weibull_cdf: t must be >= 0");
    if (t == 0.0) return 0.0;
    return -std::expm1(-std::pow(t / m.scale, m.shape));
}

inline double weibull_pdf(const WeibullModel& m, double t) {
    m.validate();
    if (t <= 0.0) return 0.0;
    double r = t / m.scale;
    return (m.shape / m.scale) * std::pow(r, m.shape - 1.0) *
           std::exp(-std::pow(r, m.shape));
}

inline double weibull_quantile(const WeibullModel& m, double p) {
    m.validate();
    if (!(p >= 0.0 && p < 1.0))
        throw domain_error("weibull_quantile: p must lie in [0, 1)");
    return m.scale * std::pow(-std::log1p(-p), 1.0 / m.shape);
}

inline std::vector<double> weibull_sample(const WeibullModel& m, std::size_t n,
                                          std::mt19937_64& rng) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = weibull_quantile(m, canonical_uniform(rng));
    return out;
}

namespace detail {

// Profile log-likelihood score in the shape parameter, with the scale
// profiled out:  S(b) = n/b + sum log t - n * sum(t^b log t) / sum(t^b).
// Times are rescaled by their maximum so t^b never overflows.
struct WeibullScore {
    std::vector<double> s;     // t / max(t), in (0, 1]
    std::vector<double> log_t; // log of the raw times
    double sum_log_t = 0.0;
    double n = 0.0;
    double t_max = 0.0;

    explicit WeibullScore(const std::vector<double>& times) {
        n = static_cast<double>(times.size());
        t_max = *std::max_element(times.begin(), times.end());
        s.resize(times.size());
        log_t.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            s[i] = times[i] / t_max;
            log_t[i] = std::log(times[i]);
        }
        sum_log_t = neumaier_sum(log_t);
    }

    // score and its derivative (the derivative is always negative, so the
    // score is strictly decreasing and has at most one root)
    std::pair<double, double> operator()(double b) const {
        double w0 = 0.0, w1 = 0.0, w2 = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double p = std::pow(s[i], b);
            w0 += p;
            w1 += p * log_t[i];
            w2 += p * log_t[i] * log_t[i];
        }
        double mean_log = w1 / w0;
        double score = n / b + sum_log_t - n * mean_log;
        double dscore = -n / (b * b) - n * (w2 / w0 - mean_log * mean_log);
        return {score, dscore};
    }

    double scale_at(double b) const {
        double w0 = 0.0;
        for (double v : s) w0 += std::pow(v, b);
        return t_max * std::pow(w0 / n, 1.0 / b);
    }
};

} // namespace detail

// Maximum likelihood fit by Newton iteration on the profile score for the
// shape, safeguarded by a bisection bracket on [0.1, 50]; the scale then
// follows in closed form.  The score at the solution is below 1e-10 in
// magnitude.
inline WeibullModel weibull_mle(const FailureData& data) {
    data.validate();
    double t0 = data.times.front();
    bool all_equal = std::all_of(data.times.begin(), data.times.end(),
                                 [t0](double t) { return t == t0; });
    if (all_equal)
        throw domain_error("weibull_mle: degenerate data, all failure times equal");

    detail::WeibullScore score(data.times);
    double lo = 0.1, hi = 50.0;
    if (!(score(lo).first > 0.0) || !(score(hi).first < 0.0))
        throw nonconvergence_error("weibull_mle: no shape root in [0.1, 50]");

    double b = 1.0;
    const double tol = 1e-10;
    for (int it = 0; it < 200; ++it) {
        auto [s, ds] = score(b);
        if (std::abs(s) <= tol)
            return WeibullModel{b, score.scale_at(b)};
        if (s > 0.0)
            lo = b;
        else
            hi = b;
        double step = b - s / ds;
        b = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    throw nonconvergence_error("weibull_mle: shape iteration did not converge");
}

// The two lifetime quantities of interest: the failure indicator on [0, T]
// and its smooth logistic surrogate of steepness w.  Both map into [0, 1]
// and the surrogate converges to the indicator pointwise (except at T) as
// w grows.
inline std::pair<std::function<double(double)>, std::function<double(double)>>
lifetime_qois(double T, double w) {
    if (!(T > 0.0)) throw domain_error("lifetime_qois: T must be positive");
    if (!(w >= 1.0)) throw domain_error("lifetime_qois: w must be >= 1");
    auto indicator = [T](double t) { return (t >= 0.0 && t <= T) ? 1.0 : 0.0; };
    auto logistic = [T, w](double t) { return stable_logistic(w * (T - t)); };
    return {indicator, logistic};
}

// E[logistic(T, w)] under the model, by quadrature over the lifetime axis.
// The integrand drops from ~1 to ~0 within a few 1/w of T, so the range is
// split there; with the transition at an interval endpoint the adaptive
// rule refines straight into it.
inline double logistic_failure_mean(const WeibullModel& m, double T, double w,
                                    double tol = 1e-10) {
    m.validate();
    if (!(T >= 0.0)) throw domain_error("logistic_failure_mean: T must be >= 0");
    if (!(w >= 1.0)) throw domain_error("logistic_failure_mean: w must be >= 1");
    QuadratureOptions opts{tol, 15};
    auto f = [&](double t) {
        return weibull_pdf(m, t) * stable_logistic(w * (T - t));
    };
    if (T == 0.0) return integrate(f, 0.0, inf, opts);
    return integrate(f, 0.0, T, opts) + integrate(f, T, inf, opts);
}

} // namespace uqb::models
