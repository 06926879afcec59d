#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "uqbound/divergence.hpp"
#include "uqbound/io.hpp"
#include "uqbound/models/exponential.hpp"
#include "uqbound/models/ising.hpp"
#include "uqbound/models/truncated_normal.hpp"
#include "uqbound/models/weibull.hpp"
#include "uqbound/quadrature.hpp"

#include "oracles.hpp"

using namespace uqb;
using namespace uqb::models;
using Catch::Approx;

TEST_CASE("exponential lifetime model") {
    SECTION("parameter checks") {
        CHECK_THROWS_AS(ExponentialModel{0.0}.validate(), domain_error);
        CHECK_THROWS_AS(ExponentialModel{-2.0}.validate(), domain_error);
        CHECK(ExponentialModel{2.0}.mean() == Approx(0.5));
        CHECK(ExponentialModel{2.0}.variance() == Approx(0.25));
    }

    SECTION("centered cumulant in closed form") {
        auto h = exponential_centered_cgf(ExponentialModel{1.0});
        CHECK(h.domain_hi == 1.0);
        CHECK(h.value(0.5) == Approx(std::log(2.0) - 0.5).epsilon(1e-14));
        CHECK(h.value(-1.0) == Approx(1.0 - std::log(2.0)).epsilon(1e-14));
        CHECK(h.second(0.0) == Approx(1.0).epsilon(1e-12));
        for (double c : {-2.0, -0.5, 0.3, 0.8}) {
            CHECK(h.deriv(c) == Approx(oracle::central_diff(h.value, c)).epsilon(1e-6));
            CHECK(h.second(c) ==
                  Approx(oracle::central_diff2(h.value, c)).margin(1e-4).epsilon(1e-4));
        }
    }

    SECTION("closed form matches the quadrature route") {
        auto h = exponential_centered_cgf(ExponentialModel{1.0});
        auto hq = cgf_quadrature([](double x) { return std::exp(-x); }, 0.0, inf,
                                 [](double x) { return x; }, 1e-10, -inf, 1.0);
        for (double c = -1.5; c < 0.95; c += 0.25)
            CHECK(h.value(c) == Approx(hq.value(c)).margin(1e-8));
    }

    SECTION("restricted quadratic envelope dominates the unit-rate cumulant") {
        auto env = sub_exponential_envelope(ExponentialModel{1.0});
        auto* isg = std::get_if<IntervalSubGaussianBound>(&env);
        REQUIRE(isg != nullptr);
        CHECK(isg->sigma_b == Approx(0.5));
        CHECK(isg->c_max == Approx(0.5));
        CHECK(isg->drift == Approx(1.0));
        auto h = exponential_centered_cgf(ExponentialModel{1.0});
        for (double c = -0.499; c < 0.5; c += 0.001) {
            double phi = phi_eval(env, c);
            CHECK(std::exp(h.value(c)) <= phi * (1.0 + 1e-12));
        }
        CHECK_THROWS_AS(sub_exponential_envelope(ExponentialModel{2.0}), domain_error);
    }

    SECTION("sampler hits the mean and is seed-deterministic") {
        std::mt19937_64 rng(41);
        auto xs = exponential_sample(ExponentialModel{2.0}, 100000, rng);
        double mean = neumaier_sum(xs) / static_cast<double>(xs.size());
        CHECK(mean == Approx(0.5).margin(4.0 * 0.5 / std::sqrt(100000.0)));
        for (double x : xs) CHECK(x >= 0.0);
        std::mt19937_64 r1(7), r2(7);
        auto a = exponential_sample(ExponentialModel{1.0}, 10, r1);
        auto b = exponential_sample(ExponentialModel{1.0}, 10, r2);
        CHECK(a == b);
    }
}

TEST_CASE("truncated normal model") {
    SECTION("no truncation reduces to the plain normal") {
        auto m = truncated_normal_moments(TruncatedNormalModel{0.7, 1.3, -inf, inf});
        CHECK(m.mean == Approx(0.7).margin(1e-12));
        CHECK(m.variance == Approx(1.69).epsilon(1e-12));
    }

    SECTION("half line and symmetric interval anchors") {
        auto half = truncated_normal_moments(TruncatedNormalModel{0.0, 1.0, 0.0, inf});
        CHECK(half.mean == Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
        auto sym = truncated_normal_moments(TruncatedNormalModel{0.0, 1.0, -1.0, 1.0});
        CHECK(sym.mean == Approx(0.0).margin(1e-14));
        CHECK(sym.variance == Approx(0.2911).margin(1e-4));
    }

    SECTION("closed-form moments against quadrature") {
        std::vector<TruncatedNormalModel> cases{
            {0.0, 1.0, -1.0, 1.0},
            {2.0, 0.5, 1.0, 2.5},
            {-1.0, 2.0, -2.0, inf},
            {0.5, 1.5, -inf, 1.0},
        };
        for (const auto& m : cases) {
            double mass = oracle::quad([&](double x) { return truncated_normal_pdf(m, x); },
                                       std::max(m.lo, -60.0), std::min(m.hi, 60.0));
            CHECK(mass == Approx(1.0).epsilon(1e-10));
            double mean = oracle::quad([&](double x) { return x * truncated_normal_pdf(m, x); },
                                       std::max(m.lo, -60.0), std::min(m.hi, 60.0));
            double m2 = oracle::quad([&](double x) { return x * x * truncated_normal_pdf(m, x); },
                                     std::max(m.lo, -60.0), std::min(m.hi, 60.0));
            auto cf = truncated_normal_moments(m);
            CHECK(cf.mean == Approx(mean).margin(1e-9));
            CHECK(cf.variance == Approx(m2 - mean * mean).margin(1e-9));
        }
    }

    SECTION("quadrature cumulant touches the closed-form moments") {
        TruncatedNormalModel m{0.0, 1.0, -1.0, 1.0};
        auto h = truncated_normal_cgf(m);
        auto mom = truncated_normal_moments(m);
        CHECK(h.value(0.0) == Approx(0.0).margin(1e-9));
        CHECK(h.deriv(0.0) == Approx(0.0).margin(1e-9));
        CHECK(h.second(0.0) == Approx(mom.variance).margin(1e-7));
        // direct check at a nonzero argument
        double raw = oracle::quad([&](double x) {
            return truncated_normal_pdf(m, x) * std::exp(0.7 * x);
        }, -1.0, 1.0);
        CHECK(h.value(0.7) == Approx(std::log(raw) - 0.7 * mom.mean).margin(1e-7));
    }

    SECTION("parameter checks") {
        CHECK_THROWS_AS((TruncatedNormalModel{0.0, 0.0, -1.0, 1.0}).validate(),
                        domain_error);
        CHECK_THROWS_AS((TruncatedNormalModel{0.0, 1.0, 1.0, -1.0}).validate(),
                        domain_error);
    }

    SECTION("sampler stays in range and matches the mean") {
        TruncatedNormalModel m{1.0, 2.0, 0.0, 3.0};
        std::mt19937_64 rng(43);
        auto xs = truncated_normal_sample(m, 200000, rng);
        auto mom = truncated_normal_moments(m);
        for (double x : xs) {
            CHECK(x >= m.lo);
            CHECK(x <= m.hi);
        }
        double mean = neumaier_sum(xs) / static_cast<double>(xs.size());
        CHECK(mean ==
              Approx(mom.mean).margin(4.0 * std::sqrt(mom.variance / 200000.0)));
        std::mt19937_64 r1(9), r2(9);
        CHECK(truncated_normal_sample(m, 20, r1) == truncated_normal_sample(m, 20, r2));
    }
}

TEST_CASE("weibull lifetime model") {
    SECTION("bundled measurements match the shipped data file") {
        const auto& embedded = battery_failure_times();
        REQUIRE(embedded.size() == 12);
        CHECK(neumaier_sum(embedded) == Approx(12248.0));
        auto from_file = io::read_samples_file(
            std::string(UQBOUND_DATA_DIR) + "/battery_failure_times.csv", 1);
        REQUIRE(from_file.size() == embedded.size());
        for (std::size_t i = 0; i < embedded.size(); ++i)
            CHECK(from_file[i] == embedded[i]);
    }

    SECTION("distribution function basics") {
        WeibullModel m{2.0, 3.0};
        CHECK(weibull_cdf(m, 0.0) == 0.0);
        CHECK(weibull_cdf(m, 3.0) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
        CHECK(weibull_cdf(m, 3.0) == Approx(0.632121).margin(1e-6));
        CHECK_THROWS_AS(weibull_cdf(m, -1.0), domain_error);
        // pdf integrates to the cdf
        double p = oracle::quad([&](double t) { return weibull_pdf(m, t); }, 0.0, 4.0);
        CHECK(p == Approx(weibull_cdf(m, 4.0)).margin(1e-10));
        // quantile inverts the cdf
        for (double q : {0.01, 0.4, 0.9, 0.999})
            CHECK(weibull_cdf(m, weibull_quantile(m, q)) == Approx(q).epsilon(1e-12));
        CHECK(weibull_quantile(m, 0.0) == 0.0);
        CHECK_THROWS_AS(weibull_quantile(m, 1.0), domain_error);
    }

    SECTION("maximum likelihood on the bundled data") {
        auto fit = weibull_mle(FailureData{battery_failure_times()});
        CHECK(fit.shape == Approx(3.55).margin(0.02));
        CHECK(fit.scale == Approx(1138.0).margin(6.0));

        // independent optimality: the log-likelihood at the fit beats a
        // ring of nearby parameter values
        auto loglik = [](const WeibullModel& w, const std::vector<double>& ts) {
            double l = 0.0;
            for (double t : ts) l += std::log(weibull_pdf(w, t));
            return l;
        };
        const auto& ts = battery_failure_times();
        double at_fit = loglik(fit, ts);
        for (double db : {-1e-3, 1e-3})
            for (double ds : {-1e-3, 1e-3}) {
                WeibullModel nearby{fit.shape * (1.0 + db), fit.scale * (1.0 + ds)};
                CHECK(at_fit >= loglik(nearby, ts));
            }
    }

    SECTION("recovers known parameters from a large synthetic sample") {
        std::mt19937_64 rng(47);
        WeibullModel truth{2.0, 1.0};
        auto ts = weibull_sample(truth, 100000, rng);
        auto fit = weibull_mle(FailureData{ts});
        CHECK(fit.shape == Approx(2.0).epsilon(0.02));
        CHECK(fit.scale == Approx(1.0).epsilon(0.02));
    }

    SECTION("degenerate and invalid data") {
        CHECK_THROWS_AS(weibull_mle(FailureData{{5.0, 5.0, 5.0}}), domain_error);
        CHECK_THROWS_AS(weibull_mle(FailureData{{5.0}}), domain_error);
        CHECK_THROWS_AS(weibull_mle(FailureData{{5.0, -1.0}}), domain_error);
    }

    SECTION("failure quantities of interest") {
        auto [hard, soft] = lifetime_qois(1000.0, 5.0);
        CHECK(hard(999.0) == 1.0);
        CHECK(hard(1001.0) == 0.0);
        CHECK(soft(1000.0) == Approx(0.5).epsilon(1e-12));
        CHECK(soft(999.0) > 0.99);
        CHECK(soft(1001.0) < 0.01);
        // steepness collapses the surrogate onto the indicator
        auto [h2, sharp] = lifetime_qois(1000.0, 50.0);
        CHECK(sharp(999.9) > soft(999.9));
        CHECK_THROWS_AS(lifetime_qois(-1.0, 5.0), domain_error);
        CHECK_THROWS_AS(lifetime_qois(1000.0, 0.5), domain_error);
    }

    SECTION("smooth failure mean by quadrature") {
        WeibullModel m{3.5, 1100.0};
        double T = 900.0, w = 5.0;
        double direct = oracle::quad([&](double t) {
            return weibull_pdf(m, t) * stable_logistic(w * (T - t));
        }, 0.0, 4000.0);
        CHECK(logistic_failure_mean(m, T, w) == Approx(direct).margin(1e-8));
        // at this steepness the surrogate is already the indicator to ~1e-3
        CHECK(logistic_failure_mean(m, T, w) ==
              Approx(weibull_cdf(m, T)).margin(2e-3));
    }
}

TEST_CASE("spin chain model") {
    SECTION("construction checks") {
        CHECK_THROWS_AS(IsingChain::uniform(1, 1.0, 0.0, 1.0), domain_error);
        CHECK_THROWS_AS(IsingChain::uniform(4, 1.0, 0.0, 0.0), domain_error);
        IsingChain bad = IsingChain::uniform(4, 1.0, 0.0, 1.0);
        bad.coupling.pop_back();
        CHECK_THROWS_AS(bad.validate(), domain_error);
        SiteWindow w{0, 1};
        CHECK_THROWS_AS(w.check_against(IsingChain::uniform(2, 1.0, 0.0, 1.0)),
                        domain_error);
    }

    SECTION("two-site enumeration anchors") {
        auto chain = IsingChain::uniform(2, 1.0, 0.0, 1.0);
        auto ex = ising_enumerate(chain, {0, 0});
        CHECK(ex.mean == Approx(0.0).margin(1e-14));
        CHECK(ex.variance == Approx(1.0).epsilon(1e-12));
        CHECK(ex.log_partition == Approx(std::log(4.0 * std::cosh(1.0))).epsilon(1e-12));
    }

    SECTION("three-site window variance against the transfer-matrix identity") {
        // free chain, h = 0: <s_i s_j> = tanh(beta J)^|i-j|, so the
        // radius-1 window mean at the center has variance
        // (3 + 4 t + 2 t^2) / 9 with t = tanh(beta J)
        auto chain = IsingChain::uniform(3, 1.0, 0.0, 1.0);
        auto ex = ising_enumerate(chain, {1, 1});
        double t = std::tanh(1.0);
        CHECK(ex.mean == Approx(0.0).margin(1e-14));
        CHECK(ex.variance == Approx((3.0 + 4.0 * t + 2.0 * t * t) / 9.0).epsilon(1e-12));
    }

    SECTION("strong field saturates the magnetization") {
        auto chain = IsingChain::uniform(6, 1.0, 5.0, 2.0);
        auto ex = ising_enumerate(chain, {2, 1});
        CHECK(ex.mean > 0.9999);
    }

    SECTION("enumeration budget is enforced") {
        auto big = IsingChain::uniform(23, 1.0, 0.0, 1.0);
        CHECK_THROWS_AS(ising_enumerate(big, {11, 1}), size_error);
        CHECK_THROWS_AS(ising_kl_defect_exact(big, big), size_error);
    }

    SECTION("sampler agrees with enumeration within its own error bars") {
        auto chain = IsingChain::uniform(10, 1.0, 0.3, 0.7);
        SiteWindow w{4, 2};
        auto ex = ising_enumerate(chain, w);
        auto mc = ising_gibbs_sample(chain, w, {60000, 10000, 10, 2026});
        double se = std::sqrt(mc.mean.variance_of_estimator);
        REQUIRE(se > 0.0);
        CHECK(std::abs(mc.mean.value - ex.mean) <= 3.5 * se);
        double se_var = std::sqrt(mc.variance.variance_of_estimator);
        CHECK(std::abs(mc.variance.value - ex.variance) <= 3.5 * se_var);
    }

    SECTION("sampling is seed-deterministic") {
        auto chain = IsingChain::uniform(8, 1.0, 0.1, 1.0);
        SiteWindow w{3, 1};
        McmcParams p{6000, 1000, 5, 77};
        auto a = ising_gibbs_sample(chain, w, p);
        auto b = ising_gibbs_sample(chain, w, p);
        CHECK(a.mean.value == b.mean.value);
        CHECK(a.variance.value == b.variance.value);
        McmcParams q = p;
        q.seed = 78;
        auto c = ising_gibbs_sample(chain, w, q);
        CHECK(a.mean.value != c.mean.value);
    }

    SECTION("profile shares one trajectory across centers") {
        auto chain = IsingChain::uniform(8, 1.0, 0.1, 1.0);
        McmcParams p{6000, 1000, 5, 31};
        auto profile = ising_gibbs_profile(chain, 1, p);
        REQUIRE(profile.size() == 6);
        auto single = ising_gibbs_sample(chain, {3, 1}, p);
        CHECK(profile[2].mean.value == single.mean.value);
        CHECK_THROWS_AS(ising_gibbs_profile(chain, 5, p), domain_error);
    }

    SECTION("exact defect divergence against a direct probability sum") {
        auto base = IsingChain::uniform(6, 1.0, 0.0, 1.0);
        auto pert = base;
        pert.coupling[2] = 1.5;
        CHECK(ising_kl_defect_exact(base, base) == 0.0);
        double kl = ising_kl_defect_exact(base, pert);
        CHECK(kl > 0.0);

        // direct route: build both probability vectors and sum q log(q/p)
        auto probs = [](const IsingChain& c) {
            std::vector<double> w(1u << c.n_sites);
            double z = 0.0;
            for (std::uint32_t m = 0; m < w.size(); ++m) {
                auto s = models::detail::spins_from_mask(m, c.n_sites);
                w[m] = std::exp(-models::detail::ising_energy(c, s));
                z += w[m];
            }
            for (auto& v : w) v /= z;
            return w;
        };
        auto p = probs(base), q = probs(pert);
        double direct = 0.0;
        for (std::size_t m = 0; m < p.size(); ++m) direct += q[m] * std::log(q[m] / p[m]);
        CHECK(kl == Approx(direct).margin(1e-12));
    }

    SECTION("defect divergence is local: nearly free of the chain length") {
        auto defect_kl = [](int n) {
            auto base = IsingChain::uniform(n, 1.0, 0.0, 1.0);
            auto pert = base;
            pert.coupling[n / 2] = 1.5;
            return ising_kl_defect_exact(base, pert);
        };
        double k8 = defect_kl(8), k16 = defect_kl(16);
        CHECK(std::abs(k16 - k8) / k8 < 0.1);
    }

    SECTION("sampled defect divergence brackets the exact value") {
        auto base = IsingChain::uniform(8, 1.0, 0.0, 1.0);
        auto pert = base;
        pert.coupling[3] = 1.5;
        double exact = ising_kl_defect_exact(base, pert);
        auto sampled = ising_kl_defect_sampled(base, pert, {60000, 10000, 10, 5});
        REQUIRE(sampled.std_error > 0.0);
        CHECK(std::abs(sampled.value - exact) <= 3.5 * sampled.std_error);
        // the single-value front end matches both routes
        CHECK(ising_kl_defect(base, pert, IsingKlMethod::exact) == exact);
        CHECK(ising_kl_defect(base, pert, IsingKlMethod::sampled,
                              {60000, 10000, 10, 5}) == sampled.value);
    }

    SECTION("chains of different sizes cannot be compared") {
        auto a = IsingChain::uniform(6, 1.0, 0.0, 1.0);
        auto b = IsingChain::uniform(8, 1.0, 0.0, 1.0);
        CHECK_THROWS_AS(ising_kl_defect_exact(a, b), domain_error);
    }

    SECTION("mcmc parameter checks") {
        CHECK_THROWS_AS((McmcParams{100, 100, 1, 1}).validate(), domain_error);
        CHECK_THROWS_AS((McmcParams{100, -1, 1, 1}).validate(), domain_error);
        CHECK_THROWS_AS((McmcParams{100, 10, 0, 1}).validate(), domain_error);
    }
}
