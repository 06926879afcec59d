#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uqbound/cumulant.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb {

// Finite probability distribution given by distinct atoms and weights on
// them.  Weights may be zero but must be nonnegative and sum to one.
struct DiscreteDistribution {
    std::vector<double> atoms;
    std::vector<double> weights;

    std::size_t size() const { return atoms.size(); }

    void validate(double tol = 1e-12) const {
        if (atoms.empty())
            throw domain_error("discrete distribution: no atoms");
        if (atoms.size() != weights.size())
            throw domain_error("discrete distribution: atom/weight length mismatch");
        double total = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!(weights[i] >= 0.0))
                throw domain_error("discrete distribution: negative weight at index " +
                                   std::to_string(i));
            if (!std::isfinite(atoms[i]))
                throw domain_error("discrete distribution: non-finite atom");
            total += weights[i];
        }
        if (std::abs(total - 1.0) > tol)
            throw domain_error("discrete distribution: weights sum to " +
                               std::to_string(total) + ", expected 1");
        std::vector<double> sorted(atoms);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw domain_error("discrete distribution: duplicate atom");
    }

    // E[g(X)] for g given by its values on the atoms.
    double expectation(std::span<const double> g_values) const {
        double s = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            s += weights[i] * g_values[i];
        return s;
    }

    double mean() const { return expectation(atoms); }

    double variance() const {
        double m = mean(), s = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            s += weights[i] * (atoms[i] - m) * (atoms[i] - m);
        return s;
    }
};

// Relative entropy KL(q || p) in nats for two distributions sharing an atom
// layout.  Zero q-weight atoms contribute zero; q > 0 on a p-null atom is
// an error (the divergence is infinite and the caller should know).
inline double kl_discrete(const DiscreteDistribution& q, const DiscreteDistribution& p) {
    q.validate();
    p.validate();
    if (q.size() != p.size())
        throw domain_error("kl_discrete: distributions have different supports");
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q.atoms[i] != p.atoms[i])
            throw domain_error("kl_discrete: atom mismatch at index " + std::to_string(i));
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q.weights[i] == 0.0) continue;
        if (p.weights[i] == 0.0)
            throw domain_error("kl_discrete: q puts mass on a p-null atom");
        s += q.weights[i] * std::log(q.weights[i] / p.weights[i]);
    }
    // Rounding can push a near-zero divergence slightly negative.
    return std::max(s, 0.0);
}

namespace detail {

// Shared cumulant builder for weighted point masses.  No distinctness
// requirement here: empirical samples may repeat values.
inline CumulantFunction cgf_from_points(std::vector<double> values,
                                        std::vector<double> weights) {
    double mu = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mu += weights[i] * values[i];
    std::vector<double> centered(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) centered[i] = values[i] - mu;

    // All three evaluations tilt in log space, so c as large as the
    // boundary-probe magnitude (1e6) stays finite.
    auto tilted = [centered, weights](double c, int moment) {
        std::vector<double> a(centered.size());
        for (std::size_t i = 0; i < centered.size(); ++i) a[i] = c * centered[i];
        double lse = log_sum_exp(a, weights);
        if (moment == 0) return lse;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < centered.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            double w = weights[i] * std::exp(a[i] - lse);
            m1 += w * centered[i];
            if (moment == 2) m2 += w * centered[i] * centered[i];
        }
        if (moment == 1) return m1;
        return m2 - m1 * m1;
    };

    CumulantFunction h;
    h.value = [tilted](double c) { return tilted(c, 0); };
    h.deriv = [tilted](double c) { return tilted(c, 1); };
    h.second = [tilted](double c) { return tilted(c, 2); };
    return h;
}

} // namespace detail

// Cumulant generating function of f(X) - E_p[f(X)] under a finite p,
// with f given by its values on the atoms.
inline CumulantFunction cgf_discrete(const DiscreteDistribution& p,
                                     std::span<const double> f_values) {
    p.validate();
    if (f_values.size() != p.size())
        throw domain_error("cgf_discrete: f value count does not match atoms");
    return detail::cgf_from_points({f_values.begin(), f_values.end()}, p.weights);
}

// Exponential tilt of p in the direction of f: weights proportional to
// p_i exp(c f_i).  This is the distribution attaining the tilted-mean gap
// returned by the divergence solver.
inline DiscreteDistribution tilt_discrete(const DiscreteDistribution& p,
                                          std::span<const double> f_values,
                                          double c) {
    p.validate();
    if (f_values.size() != p.size())
        throw domain_error("tilt_discrete: f value count does not match atoms");
    std::vector<double> a(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) a[i] = c * f_values[i];
    double lse = log_sum_exp(a, p.weights);
    DiscreteDistribution out;
    out.atoms = p.atoms;
    out.weights.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out.weights[i] = (p.weights[i] > 0.0) ? p.weights[i] * std::exp(a[i] - lse) : 0.0;
    return out;
}

} // namespace uqb
