#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uqbound/empirical.hpp"
#include "uqbound/errors.hpp"
#include "uqbound/numerics.hpp"

namespace uqb::models {

// Nearest-neighbor spin chain with free boundaries.  The Gibbs weight of
// a configuration sigma in {-1,+1}^N is exp(-energy(sigma)) with
//   energy = -beta * sum_b J[b] s_b s_{b+1} - beta * sum_x h[x] s_x,
// normalized over the 2^N configurations (counting measure base).
struct IsingChain {
    int n_sites = 0;
    std::vector<double> coupling; // J, one per bond, length n_sites - 1
    std::vector<double> field;    // h, one per site
    double beta = 1.0;

    void validate() const {
        if (n_sites < 2)
            throw domain_error("ising chain: need at least 2 sites");
        if (static_cast<int>(coupling.size()) != n_sites - 1)
            throw domain_error("ising chain: need one coupling per bond (n_sites - 1)");
        if (static_cast<int>(field.size()) != n_sites)
            throw domain_error("ising chain: need one field value per site");
        if (!(beta > 0.0))
            throw domain_error("ising chain: inverse temperature must be positive");
    }

    static IsingChain uniform(int n, double j, double h, double beta) {
        IsingChain c;
        c.n_sites = n;
        c.coupling.assign(n > 0 ? n - 1 : 0, j);
        c.field.assign(n, h);
        c.beta = beta;
        c.validate();
        return c;
    }
};

// Averaging window for the local magnetization: mean spin over the sites
// within `radius` of `center` (0-based).  The window must fit inside the
// chain.
struct SiteWindow {
    int center = 0;
    int radius = 1;

    void check_against(const IsingChain& chain) const {
        if (radius < 0) throw domain_error("site window: radius must be >= 0");
        if (center - radius < 0 || center + radius > chain.n_sites - 1)
            throw domain_error("site window: window [" + std::to_string(center - radius) +
                               ", " + std::to_string(center + radius) +
                               "] does not fit in the chain");
    }
};

namespace detail {

inline double ising_energy(const IsingChain& c, const std::vector<int>& s) {
    double e = 0.0;
    for (int b = 0; b + 1 < c.n_sites; ++b)
        e -= c.coupling[b] * s[b] * s[b + 1];
    for (int x = 0; x < c.n_sites; ++x)
        e -= c.field[x] * s[x];
    return c.beta * e;
}

inline double window_mean(const SiteWindow& w, const std::vector<int>& s) {
    double sum = 0.0;
    for (int x = w.center - w.radius; x <= w.center + w.radius; ++x) sum += s[x];
    return sum / (2.0 * w.radius + 1.0);
}

inline std::vector<int> spins_from_mask(std::uint32_t mask, int n) {
    std::vector<int> s(n);
    for (int x = 0; x < n; ++x) s[x] = (mask >> x) & 1u ? 1 : -1;
    return s;
}

} // namespace detail

inline constexpr int ising_enumeration_limit = 22;

struct IsingExact {
    double mean = 0.0;
    double variance = 0.0;
    double log_partition = 0.0;
};

// Exact Gibbs moments of the window magnetization by summing all 2^N
// configurations; energies are shifted by their minimum so the partition
// sum stays in range at any beta.
inline IsingExact ising_enumerate(const IsingChain& chain, const SiteWindow& window) {
    chain.validate();
    window.check_against(chain);
    if (chain.n_sites > ising_enumeration_limit)
        throw size_error("ising_enumerate: " + std::to_string(chain.n_sites) +
                         " sites exceeds the 2^" +
                         std::to_string(ising_enumeration_limit) + " enumeration budget");

    const std::uint32_t n_states = 1u << chain.n_sites;
    std::vector<double> neg_energy(n_states);
    double max_ne = -inf;
    for (std::uint32_t m = 0; m < n_states; ++m) {
        auto s = detail::spins_from_mask(m, chain.n_sites);
        neg_energy[m] = -detail::ising_energy(chain, s);
        max_ne = std::max(max_ne, neg_energy[m]);
    }
    double z = 0.0, sum_f = 0.0, sum_f2 = 0.0;
    for (std::uint32_t m = 0; m < n_states; ++m) {
        double w = std::exp(neg_energy[m] - max_ne);
        double f = detail::window_mean(window, detail::spins_from_mask(m, chain.n_sites));
        z += w;
        sum_f += w * f;
        sum_f2 += w * f * f;
    }
    IsingExact out;
    out.mean = sum_f / z;
    out.variance = std::max(sum_f2 / z - out.mean * out.mean, 0.0);
    out.log_partition = max_ne + std::log(z);
    return out;
}

struct McmcParams {
    long sweeps = 60000;   // total sweeps, including burn-in
    long burn_in = 10000;
    int thin = 10;         // record every thin-th sweep after burn-in
    std::uint64_t seed = 1;

    void validate() const {
        if (sweeps <= burn_in)
            throw domain_error("mcmc params: sweeps must exceed burn_in");
        if (burn_in < 0) throw domain_error("mcmc params: burn_in must be >= 0");
        if (thin < 1) throw domain_error("mcmc params: thin must be >= 1");
    }
};

struct IsingMcmc {
    MomentEstimate mean;     // window magnetization mean, batch-means error
    MomentEstimate variance; // plug-in variance of the magnetization
};

namespace detail {

// Heat-bath sweep: each site is redrawn in index order from its
// conditional law given the neighbors, P(s_x = +1) = logistic(2 l) with
// l = beta (J_left s_left + J_right s_right + h_x).
inline void heat_bath_sweep(const IsingChain& c, std::vector<int>& s,
                            std::mt19937_64& rng) {
    for (int x = 0; x < c.n_sites; ++x) {
        double l = c.field[x];
        if (x > 0) l += c.coupling[x - 1] * s[x - 1];
        if (x + 1 < c.n_sites) l += c.coupling[x] * s[x + 1];
        l *= c.beta;
        s[x] = canonical_uniform(rng) < stable_logistic(2.0 * l) ? 1 : -1;
    }
}

// Batch-means mean and standard error of a recorded series: B = floor
// sqrt(K) batches of equal length, the tail dropped.  The returned
// variance_of_estimator is the squared standard error.
inline MomentEstimate batch_means(const std::vector<double>& series) {
    std::size_t k = series.size();
    std::size_t n_batches = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(double(k))));
    std::size_t batch_len = k / n_batches;
    if (batch_len == 0)
        throw domain_error("batch_means: series too short");
    std::vector<double> means(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * batch_len; i < (b + 1) * batch_len; ++i) s += series[i];
        means[b] = s / static_cast<double>(batch_len);
    }
    double grand = neumaier_sum(means) / static_cast<double>(n_batches);
    double var_b = 0.0;
    for (double m : means) var_b += (m - grand) * (m - grand);
    var_b /= static_cast<double>(n_batches - 1);
    MomentEstimate est;
    est.value = grand;
    est.variance_of_estimator = var_b / static_cast<double>(n_batches);
    est.n = static_cast<int>(n_batches * batch_len);
    return est;
}

// One deterministic chain run; reports the recorded QoI series for each
// window so several observables can share the same trajectory.
template <class Record>
void run_chain(const IsingChain& chain, const McmcParams& params, Record&& record) {
    std::mt19937_64 rng(params.seed);
    std::vector<int> s(chain.n_sites);
    for (int x = 0; x < chain.n_sites; ++x)
        s[x] = canonical_uniform(rng) < 0.5 ? 1 : -1;
    for (long sweep = 0; sweep < params.sweeps; ++sweep) {
        heat_bath_sweep(chain, s, rng);
        if (sweep >= params.burn_in && (sweep - params.burn_in) % params.thin == 0)
            record(s);
    }
}

inline IsingMcmc moments_from_series(const std::vector<double>& series) {
    IsingMcmc out;
    out.mean = batch_means(series);
    double m = out.mean.value;
    std::vector<double> dev2(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        dev2[i] = (series[i] - m) * (series[i] - m);
    out.variance = batch_means(dev2);
    return out;
}

} // namespace detail

// Seeded heat-bath estimates of the window magnetization's mean and
// (plug-in) variance, with batch-means standard errors.
inline IsingMcmc ising_gibbs_sample(const IsingChain& chain, const SiteWindow& window,
                                    const McmcParams& params) {
    chain.validate();
    window.check_against(chain);
    params.validate();
    std::vector<double> series;
    detail::run_chain(chain, params, [&](const std::vector<int>& s) {
        series.push_back(detail::window_mean(window, s));
    });
    return detail::moments_from_series(series);
}

// Same, for every center the window radius allows, sharing one chain.
inline std::vector<IsingMcmc> ising_gibbs_profile(const IsingChain& chain, int radius,
                                                  const McmcParams& params) {
    chain.validate();
    params.validate();
    if (radius < 0 || 2 * radius + 1 > chain.n_sites)
        throw domain_error("ising_gibbs_profile: window radius does not fit the chain");
    int n_centers = chain.n_sites - 2 * radius;
    std::vector<std::vector<double>> series(n_centers);
    detail::run_chain(chain, params, [&](const std::vector<int>& s) {
        for (int i = 0; i < n_centers; ++i)
            series[i].push_back(detail::window_mean({radius + i, radius}, s));
    });
    std::vector<IsingMcmc> out(n_centers);
    for (int i = 0; i < n_centers; ++i) out[i] = detail::moments_from_series(series[i]);
    return out;
}

namespace detail {

inline void check_comparable(const IsingChain& base, const IsingChain& perturbed) {
    base.validate();
    perturbed.validate();
    if (base.n_sites != perturbed.n_sites)
        throw domain_error("ising divergence: chains must have the same number of sites");
}

} // namespace detail

// Exact relative entropy KL(perturbed || base) of the two Gibbs laws, via
// the energy-difference mean and the log-partition gap.
inline double ising_kl_defect_exact(const IsingChain& base, const IsingChain& perturbed) {
    detail::check_comparable(base, perturbed);
    if (base.n_sites > ising_enumeration_limit)
        throw size_error("ising_kl_defect_exact: chain too large to enumerate");

    const std::uint32_t n_states = 1u << base.n_sites;
    std::vector<double> ne_base(n_states), ne_pert(n_states);
    double max_b = -inf, max_p = -inf;
    for (std::uint32_t m = 0; m < n_states; ++m) {
        auto s = detail::spins_from_mask(m, base.n_sites);
        ne_base[m] = -detail::ising_energy(base, s);
        ne_pert[m] = -detail::ising_energy(perturbed, s);
        max_b = std::max(max_b, ne_base[m]);
        max_p = std::max(max_p, ne_pert[m]);
    }
    double zb = 0.0, zp = 0.0, mean_neg_dh = 0.0;
    for (std::uint32_t m = 0; m < n_states; ++m) {
        zb += std::exp(ne_base[m] - max_b);
        double wp = std::exp(ne_pert[m] - max_p);
        zp += wp;
        // -(H_pert - H_base) weighted under the perturbed law
        mean_neg_dh += wp * (ne_pert[m] - ne_base[m]);
    }
    mean_neg_dh /= zp;
    double log_zb = max_b + std::log(zb);
    double log_zp = max_p + std::log(zp);
    return std::max(mean_neg_dh + log_zb - log_zp, 0.0);
}

struct SampledDivergence {
    double value = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of the same divergence from perturbed-chain
// samples: log E[e^{dH}] + E[-dH] with dH the energy difference, standard
// error by batch means of per-batch divergence estimates.
inline SampledDivergence ising_kl_defect_sampled(const IsingChain& base,
                                                 const IsingChain& perturbed,
                                                 const McmcParams& params) {
    detail::check_comparable(base, perturbed);
    params.validate();
    std::vector<double> dh;
    detail::run_chain(perturbed, params, [&](const std::vector<int>& s) {
        dh.push_back(detail::ising_energy(perturbed, s) - detail::ising_energy(base, s));
    });

    std::size_t k = dh.size();
    std::size_t n_batches = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(double(k))));
    std::size_t batch_len = k / n_batches;
    if (batch_len == 0)
        throw domain_error("ising_kl_defect_sampled: too few recorded sweeps");
    auto kl_of_range = [&](std::size_t lo, std::size_t hi) {
        double me = 0.0, md = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            me += std::exp(dh[i]);
            md += dh[i];
        }
        double len = static_cast<double>(hi - lo);
        return std::log(me / len) - md / len;
    };
    std::vector<double> batch_kl(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b)
        batch_kl[b] = kl_of_range(b * batch_len, (b + 1) * batch_len);
    double var_b = 0.0;
    double grand = neumaier_sum(batch_kl) / static_cast<double>(n_batches);
    for (double v : batch_kl) var_b += (v - grand) * (v - grand);
    var_b /= static_cast<double>(n_batches - 1);

    SampledDivergence out;
    out.value = kl_of_range(0, n_batches * batch_len);
    out.std_error = std::sqrt(var_b / static_cast<double>(n_batches));
    return out;
}

enum class IsingKlMethod { exact, sampled };

// Single-value front end matching the two routes above.
inline double ising_kl_defect(const IsingChain& base, const IsingChain& perturbed,
                              IsingKlMethod method, const McmcParams& params = {}) {
    if (method == IsingKlMethod::exact) return ising_kl_defect_exact(base, perturbed);
    return ising_kl_defect_sampled(base, perturbed, params).value;
}

} // namespace uqb::models
