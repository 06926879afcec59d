#pragma once

#include <cmath>
#include <string>

#include "uqbound/cumulant.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb {

enum class Sign { plus, minus };

enum class TiltRegime {
    interior,  // the divergence constraint binds at a finite tilt
    boundary   // the constraint never binds: essential-sup regime
};

// Solution of c H'(c) - H(c) = eta_sq over c > 0.
struct TiltedSolution {
    double c_star = 0.0;          // +inf when the boundary regime is hit
    TiltRegime regime = TiltRegime::interior;
    double kl_attained = 0.0;     // divergence of the tilted law from the base
    double tilted_mean_gap = 0.0; // E_tilted[f] - E_base[f] = H'(c_star)
    int iterations = 0;
    double residual = 0.0;
};

enum class BoundMethod { goal_oriented, concentration_family };

struct OptimizerDiagnostics {
    int iterations = 0;
    double residual = 0.0;
};

// Two-sided certified bias interval: for every Q with KL(Q||P) <= eta_sq,
// lower <= E_Q[f] - E_P[f] <= upper.
struct BiasCertificate {
    double eta_sq = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    BoundMethod method = BoundMethod::goal_oriented;
    OptimizerDiagnostics diagnostics;
};

namespace detail {

// Largest c at which a cumulant is probed.  A finite right endpoint is
// approached from inside; an infinite one is capped at 1e6, far past any
// tilt a float-representable divergence budget can demand for bounded f.
inline double tilt_cap(const CumulantFunction& h) {
    if (h.domain_hi < inf) return h.domain_hi * (1.0 - 1e-9);
    return 1e6;
}

} // namespace detail

// Find the tilt whose attained divergence equals eta_sq.  The map
// g(c) = c H'(c) - H(c) is increasing (g' = c H''), so the root is
// bracketed by doubling and then bisected to 1e-10 relative residual.
// If g stays below eta_sq up to the cap, f is (effectively) bounded above
// and the supremum regime applies.
inline TiltedSolution solve_tilt(const CumulantFunction& h, double eta_sq,
                                 double rel_tol = 1e-10) {
    if (!(eta_sq > 0.0))
        throw domain_error("solve_tilt: divergence budget must be positive");
    if (h.domain_hi <= 0.0)
        throw domain_error("solve_tilt: cumulant domain does not contain c > 0");
    if (!(h.second(0.0) > 0.0))
        throw domain_error("solve_tilt: quantity is degenerate (zero variance), "
                           "no tilt can spend the budget");

    auto g = [&h](double c) { return c * h.deriv(c) - h.value(c); };
    const double cap = detail::tilt_cap(h);

    double lo = 0.0;
    double c = std::min(1e-8, cap * 0.5);
    bool bracketed = false;
    while (true) {
        double gc = g(c);
        if (std::isnan(gc))
            throw nonconvergence_error("solve_tilt: cumulant evaluation returned NaN at c=" +
                                       std::to_string(c));
        if (gc >= eta_sq) {
            bracketed = true;
            break;
        }
        lo = c;
        if (c >= cap) break;
        c = std::min(c * 2.0, cap);
    }

    TiltedSolution sol;
    if (!bracketed) {
        // The tilt never spends the whole budget: f is bounded on this
        // side and the optimal gap is its essential supremum, which
        // H(c)/c approaches as c climbs to the cap.
        sol.regime = TiltRegime::boundary;
        sol.c_star = inf;
        sol.kl_attained = g(cap);
        sol.tilted_mean_gap = h.value(cap) / cap;
        sol.iterations = 0;
        sol.residual = eta_sq - sol.kl_attained;
        return sol;
    }

    RootResult r = bisect_increasing(g, lo, c, eta_sq, rel_tol);
    sol.regime = TiltRegime::interior;
    sol.c_star = r.x;
    sol.kl_attained = g(r.x);
    sol.tilted_mean_gap = h.deriv(r.x);
    sol.iterations = r.iterations;
    sol.residual = r.residual;
    return sol;
}

namespace detail {

// One-sided optimum inf_{c>0} (H(c) + eta_sq) / c.  The objective is
// evaluated at the solver's c (interior root or cap), so the returned
// value is a valid upper bound for any c, exact to second order in the
// root-finding error.  At the exact interior root it equals H'(c*).
inline double one_sided_value(const CumulantFunction& h, double eta_sq,
                              TiltedSolution& sol_out) {
    sol_out = solve_tilt(h, eta_sq);
    double c = (sol_out.regime == TiltRegime::interior) ? sol_out.c_star : tilt_cap(h);
    return (h.value(c) + eta_sq) / c;
}

} // namespace detail

// Optimal one-sided bias bound over the divergence ball of radius eta_sq:
//   plus:  sup of E_Q[f] - E_P[f]
//   minus: sup of E_P[f] - E_Q[f]  (so the lower bias bound is its negation)
// Degenerate f (zero variance) gives 0 on both sides.
inline double go_divergence(const CumulantFunction& h, double eta_sq,
                            Sign sign, TiltedSolution* diag = nullptr) {
    if (eta_sq < 0.0)
        throw domain_error("go_divergence: negative divergence budget");
    TiltedSolution local;
    TiltedSolution& sol = diag ? *diag : local;
    if (eta_sq == 0.0 || h.second(0.0) <= 0.0) {
        sol = TiltedSolution{};
        return 0.0;
    }
    if (sign == Sign::plus) return detail::one_sided_value(h, eta_sq, sol);
    return detail::one_sided_value(reflect(h), eta_sq, sol);
}

// Both sides at once, packaged as a certificate.
inline BiasCertificate go_certificate(const CumulantFunction& h, double eta_sq) {
    TiltedSolution up, dn;
    BiasCertificate cert;
    cert.eta_sq = eta_sq;
    cert.upper = go_divergence(h, eta_sq, Sign::plus, &up);
    cert.lower = -go_divergence(h, eta_sq, Sign::minus, &dn);
    cert.method = BoundMethod::goal_oriented;
    cert.diagnostics.iterations = up.iterations + dn.iterations;
    cert.diagnostics.residual = std::max(up.residual, dn.residual);
    return cert;
}

// Small-budget expansion of the optimal bound: sqrt(2 variance) * eta.
inline double linearized_go(double variance, double eta_sq) {
    if (variance < 0.0)
        throw domain_error("linearized_go: negative variance");
    if (eta_sq < 0.0)
        throw domain_error("linearized_go: negative divergence budget");
    return std::sqrt(2.0 * variance * eta_sq);
}

// KL(Exp(rate_q) || Exp(rate_p)) in nats.
inline double kl_exponential_pair(double rate_q, double rate_p) {
    if (!(rate_q > 0.0) || !(rate_p > 0.0))
        throw domain_error("kl_exponential_pair: rates must be positive");
    double r = rate_p / rate_q;
    return std::log(rate_q / rate_p) + r - 1.0;
}

// KL(N(mu_q, sigma_q^2) || N(mu_p, sigma_p^2)) in nats.
inline double kl_normal_pair(double mu_q, double sigma_q, double mu_p, double sigma_p) {
    if (!(sigma_q > 0.0) || !(sigma_p > 0.0))
        throw domain_error("kl_normal_pair: standard deviations must be positive");
    double vr = (sigma_q * sigma_q) / (sigma_p * sigma_p);
    double dm = mu_q - mu_p;
    return 0.5 * (vr - 1.0 - std::log(vr) + dm * dm / (sigma_p * sigma_p));
}

} // namespace uqb
