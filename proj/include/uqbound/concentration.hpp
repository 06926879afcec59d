#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "uqbound/cumulant.hpp"
#include "uqbound/distribution.hpp"
#include "uqbound/divergence.hpp"
#include "uqbound/errors.hpp"

namespace uqb {

// Moment generating function envelopes: certified pointwise bounds
// M(c) <= Phi(c) on the centered quantity of interest, each valid on a
// stated c-range.  These are the inputs a user actually has when the true
// law is out of reach: a variance proxy, a support interval, or both.

// Phi(c) = exp(c^2 sigma_b^2 / 2) for all real c.
struct SubGaussianBound {
    double sigma_b = 0.0;
};

// Phi(c) = exp(c^2 / (2 sigma_b^2)) on |c| < c_max only.  The drift field
// records a known bound on |E f| for models whose envelope was derived
// around an uncentered moment expansion; it is carried through to report
// totals but does not enter Phi.
struct IntervalSubGaussianBound {
    double sigma_b = 0.0;
    double c_max = 0.0;
    double drift = 0.0;
};

// One-sided envelope from a variance bound sigma_b^2 and an upper bound b
// on f: Phi matches the moment generating function of the two-point law
// on {-sigma_b^2/(b-mu), b-mu} with mean zero and variance sigma_b^2.
// Valid for c >= 0 only.
struct BennettBound {
    double b = 0.0;
    double mu = 0.0;
    double sigma_b = 0.0;
};

// Two-sided envelope from a support interval [a, b]: Phi is the moment
// generating function of the two-point law on the centered endpoints
// {a-mu, b-mu} with mean zero.
struct BennettABBound {
    double a = 0.0;
    double b = 0.0;
    double mu = 0.0;
};

// Phi(c) = exp(c^2 (b-a)^2 / 8) for all real c.
struct HoeffdingBound {
    double a = 0.0;
    double b = 0.0;
};

// Escape hatch: a cumulant known explicitly (log Phi = given function).
struct ExplicitMgfBound {
    CumulantFunction cgf;
};

using ConcentrationBound = std::variant<SubGaussianBound, IntervalSubGaussianBound,
                                        BennettBound, BennettABBound,
                                        HoeffdingBound, ExplicitMgfBound>;

// An envelope together with a human-readable statement of the function
// class it certifies (every g whose centered mgf the envelope dominates).
struct AdmissibleFamilyDescriptor {
    ConcentrationBound bound;
    std::string description;
};

inline void validate(const SubGaussianBound& b) {
    if (!(b.sigma_b > 0.0))
        throw domain_error("sub-Gaussian bound: sigma_b must be positive");
}

inline void validate(const IntervalSubGaussianBound& b) {
    if (!(b.sigma_b > 0.0))
        throw domain_error("interval sub-Gaussian bound: sigma_b must be positive");
    if (!(b.c_max > 0.0))
        throw domain_error("interval sub-Gaussian bound: c_max must be positive");
}

inline void validate(const BennettBound& b) {
    if (!(b.sigma_b > 0.0))
        throw domain_error("Bennett bound: sigma_b must be positive");
    if (!(b.mu < b.b))
        throw domain_error("Bennett bound: requires mu < b");
}

inline void validate(const BennettABBound& b) {
    if (!(b.a < b.b))
        throw domain_error("two-point bound: requires a < b");
    if (b.mu < b.a || b.mu > b.b)
        throw domain_error("two-point bound: mu must lie in [a, b]");
}

inline void validate(const HoeffdingBound& b) {
    if (!(b.a < b.b))
        throw domain_error("Hoeffding bound: requires a < b");
}

inline void validate(const ExplicitMgfBound&) {}

inline void validate(const ConcentrationBound& bound) {
    std::visit([](const auto& b) { validate(b); }, bound);
}

// Envelope value Phi(c).  Outside a variant's validity range the envelope
// conveys no information, which we encode as +inf.
inline double phi_eval(const ConcentrationBound& bound, double c) {
    validate(bound);
    struct Visitor {
        double c;
        double operator()(const SubGaussianBound& b) const {
            return std::exp(0.5 * c * c * b.sigma_b * b.sigma_b);
        }
        double operator()(const IntervalSubGaussianBound& b) const {
            if (std::abs(c) >= b.c_max) return inf;
            return std::exp(0.5 * c * c / (b.sigma_b * b.sigma_b));
        }
        double operator()(const BennettBound& b) const {
            if (c < 0.0)
                throw domain_error("Bennett envelope is stated for c >= 0 only; "
                                   "mirror the data around -f for the lower side");
            double bt = b.b - b.mu;
            double s2 = b.sigma_b * b.sigma_b;
            double denom = bt * bt + s2;
            return (bt * bt / denom) * std::exp(-c * s2 / bt) +
                   (s2 / denom) * std::exp(c * bt);
        }
        double operator()(const BennettABBound& b) const {
            double at = b.a - b.mu;
            double bt = b.b - b.mu;
            double w = b.b - b.a;
            return (bt / w) * std::exp(c * at) + (-at / w) * std::exp(c * bt);
        }
        double operator()(const HoeffdingBound& b) const {
            double w = b.b - b.a;
            return std::exp(c * c * w * w / 8.0);
        }
        double operator()(const ExplicitMgfBound& b) const {
            if (c <= b.cgf.domain_lo || c >= b.cgf.domain_hi) return inf;
            return std::exp(b.cgf.value(c));
        }
    };
    return std::visit(Visitor{c}, bound);
}

// Curvature of log Phi at zero.  This is the variance proxy driving the
// small-budget behavior of the optimized bound.
inline double phi_curvature(const ConcentrationBound& bound) {
    validate(bound);
    struct Visitor {
        double operator()(const SubGaussianBound& b) const { return b.sigma_b * b.sigma_b; }
        double operator()(const IntervalSubGaussianBound& b) const {
            return 1.0 / (b.sigma_b * b.sigma_b);
        }
        double operator()(const BennettBound& b) const { return b.sigma_b * b.sigma_b; }
        double operator()(const BennettABBound& b) const {
            return (b.mu - b.a) * (b.b - b.mu);
        }
        double operator()(const HoeffdingBound& b) const {
            double w = b.b - b.a;
            return w * w / 4.0;
        }
        double operator()(const ExplicitMgfBound& b) const { return b.cgf.second(0.0); }
    };
    return std::visit(Visitor{}, bound);
}

namespace detail {

// log Phi(sign * c) as a cumulant function of an explicit law, so the
// tilt solver's monotone root-find applies verbatim.  The two-point
// variants are exact cumulants of two-atom distributions; the quadratic
// variants are Gaussian cumulants.
inline CumulantFunction envelope_cgf(const ConcentrationBound& bound, Sign sign) {
    struct Visitor {
        Sign sign;
        CumulantFunction operator()(const SubGaussianBound& b) const {
            return gaussian_cgf(b.sigma_b * b.sigma_b);
        }
        CumulantFunction operator()(const IntervalSubGaussianBound& b) const {
            return gaussian_cgf(1.0 / (b.sigma_b * b.sigma_b), b.c_max);
        }
        CumulantFunction operator()(const BennettBound& b) const {
            if (sign == Sign::minus)
                throw domain_error("Bennett bound is one-sided; rebuild it around -f "
                                   "(negate and swap the support data) for the lower side");
            double bt = b.b - b.mu;
            double s2 = b.sigma_b * b.sigma_b;
            DiscreteDistribution two;
            two.atoms = {-s2 / bt, bt};
            two.weights = {bt * bt / (bt * bt + s2), s2 / (bt * bt + s2)};
            return cgf_discrete(two, two.atoms);
        }
        CumulantFunction operator()(const BennettABBound& b) const {
            double at = b.a - b.mu;
            double bt = b.b - b.mu;
            if (at == 0.0 || bt == 0.0) {
                // Mean pinned at an endpoint forces a point mass: Phi = 1.
                return gaussian_cgf(0.0);
            }
            DiscreteDistribution two;
            two.atoms = {at, bt};
            two.weights = {bt / (b.b - b.a), -at / (b.b - b.a)};
            CumulantFunction h = cgf_discrete(two, two.atoms);
            return sign == Sign::plus ? h : reflect(h);
        }
        CumulantFunction operator()(const HoeffdingBound& b) const {
            double w = b.b - b.a;
            return gaussian_cgf(w * w / 4.0);
        }
        CumulantFunction operator()(const ExplicitMgfBound& b) const {
            return sign == Sign::plus ? b.cgf : reflect(b.cgf);
        }
    };
    CumulantFunction h = std::visit(Visitor{sign}, bound);
    return h;
}

} // namespace detail

// Optimized one-sided bias bound from an envelope:
//   inf_{c>0} [ log Phi(sign * c) + eta_sq ] / c.
// Computed by the same tilt equation as the exact divergence, since each
// envelope's log is itself a cumulant.  A golden-section pass backs up the
// root-find if it cannot meet tolerance.
inline double u_divergence(const ConcentrationBound& bound, double eta_sq, Sign sign,
                           OptimizerDiagnostics* diag = nullptr) {
    validate(bound);
    if (eta_sq < 0.0)
        throw domain_error("u_divergence: negative divergence budget");
    if (diag) *diag = OptimizerDiagnostics{};
    if (eta_sq == 0.0) return 0.0;

    // Closed form for the plain sub-Gaussian envelope.
    if (const auto* sg = std::get_if<SubGaussianBound>(&bound))
        return sg->sigma_b * std::sqrt(2.0 * eta_sq);

    CumulantFunction h = detail::envelope_cgf(bound, sign);
    try {
        TiltedSolution sol;
        double v = go_divergence(h, eta_sq, Sign::plus, &sol);
        if (diag) *diag = {sol.iterations, sol.residual};
        return v;
    } catch (const nonconvergence_error&) {
        // Direct search on the Lagrangian objective over a bracket found
        // by doubling; the objective is unimodal for valid envelopes.
        double cap = detail::tilt_cap(h);
        auto objective = [&](double c) { return (h.value(c) + eta_sq) / c; };
        double hi = std::min(1.0, cap);
        while (hi < cap && objective(hi * 2.0 < cap ? hi * 2.0 : cap) < objective(hi))
            hi = std::min(hi * 2.0, cap);
        double c_best = golden_section_min(objective, 1e-12, std::min(hi * 2.0, cap));
        if (diag) *diag = {0, inf};
        return objective(c_best);
    }
}

// Two-sided certificate from one envelope.
inline BiasCertificate bias_band(const ConcentrationBound& bound, double eta_sq) {
    OptimizerDiagnostics up, dn;
    BiasCertificate cert;
    cert.eta_sq = eta_sq;
    cert.upper = u_divergence(bound, eta_sq, Sign::plus, &up);
    cert.lower = -u_divergence(bound, eta_sq, Sign::minus, &dn);
    cert.method = BoundMethod::concentration_family;
    cert.diagnostics.iterations = up.iterations + dn.iterations;
    cert.diagnostics.residual = std::max(up.residual, dn.residual);
    return cert;
}

// Two-sided Bennett certificate for f supported in [a, b] with variance
// bound sigma_b^2: the lower side applies the one-sided envelope to -f,
// whose upper endpoint is -a.
inline BiasCertificate bennett_two_sided_band(double a, double b, double mu,
                                              double sigma_b, double eta_sq) {
    BennettBound up{b, mu, sigma_b};
    BennettBound down{-a, -mu, sigma_b};
    BiasCertificate cert;
    cert.eta_sq = eta_sq;
    OptimizerDiagnostics d1, d2;
    cert.upper = u_divergence(ConcentrationBound{up}, eta_sq, Sign::plus, &d1);
    cert.lower = -u_divergence(ConcentrationBound{down}, eta_sq, Sign::plus, &d2);
    cert.method = BoundMethod::concentration_family;
    cert.diagnostics.iterations = d1.iterations + d2.iterations;
    cert.diagnostics.residual = std::max(d1.residual, d2.residual);
    return cert;
}

struct HierarchyViolation {
    double c = 0.0;
    std::string weaker;   // the envelope that should dominate
    std::string stronger; // the envelope that should sit below it
    double excess = 0.0;  // log Phi_stronger - log Phi_weaker, positive = broken
};

// Check the domination chain  M <= Bennett <= two-point <= Hoeffding on a
// grid of c >= 0, in log scale so large values compare meaningfully.
// Passing the true cumulant prepends it to the chain.  Requires moment
// consistency: a <= mu <= b and sigma_sq <= (mu - a)(b - mu).
inline std::vector<HierarchyViolation> hierarchy_check(
    double mu, double a, double b, double sigma_sq,
    std::span<const double> c_grid,
    const CumulantFunction* true_cgf = nullptr,
    double log_tol = 1e-12) {
    if (!(a < b) || mu < a || mu > b)
        throw domain_error("hierarchy_check: need a < b and mu in [a, b]");
    if (!(sigma_sq > 0.0))
        throw domain_error("hierarchy_check: sigma_sq must be positive");
    if (sigma_sq > (mu - a) * (b - mu) * (1.0 + 1e-12))
        throw domain_error("hierarchy_check: sigma_sq exceeds (mu-a)(b-mu); "
                           "no distribution on [a, b] with this mean has that variance");

    ConcentrationBound bennett{BennettBound{b, mu, std::sqrt(sigma_sq)}};
    ConcentrationBound two_point{BennettABBound{a, b, mu}};
    ConcentrationBound hoeffding{HoeffdingBound{a, b}};

    std::vector<HierarchyViolation> out;
    auto compare = [&](double c, double log_lo, double log_hi,
                       const char* strong, const char* weak) {
        if (log_lo > log_hi + log_tol)
            out.push_back({c, weak, strong, log_lo - log_hi});
    };
    for (double c : c_grid) {
        if (c < 0.0)
            throw domain_error("hierarchy_check: grid values must be nonnegative");
        double lb = std::log(phi_eval(bennett, c));
        double l2 = std::log(phi_eval(two_point, c));
        double lh = std::log(phi_eval(hoeffding, c));
        if (true_cgf != nullptr)
            compare(c, true_cgf->value(c), lb, "true mgf", "bennett");
        compare(c, lb, l2, "bennett", "two_point");
        compare(c, l2, lh, "two_point", "hoeffding");
    }
    return out;
}

} // namespace uqb
