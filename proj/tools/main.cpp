// Command-line front end: certified bias bounds for expectations under
// model misspecification measured in relative entropy, plus ready-made
// example studies that emit plot data as CSV with JSON manifests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqbound/io.hpp"
#include "uqbound/uqbound.hpp"
#include "uqbound/version.hpp"

namespace {

using nlohmann::json;
using uqb::io::format_number;

void emit(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw uqb::domain_error("cannot open output file: " + path);
    out << content;
}

std::vector<double> read_samples_any(const std::string& path, std::optional<int> col) {
    if (path == "-") return uqb::io::read_samples(std::cin, col);
    return uqb::io::read_samples_file(path, col);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- shared flag groups ---------------------------------------------

struct ToleranceFlags {
    double eta2 = -1.0;
    double eta = -1.0;

    void attach(CLI::App* cmd) {
        auto* o2 = cmd->add_option("--eta2", eta2,
                                   "divergence budget eta^2 (relative entropy, nats)");
        auto* o1 = cmd->add_option("--eta", eta, "divergence radius eta (eta^2 = eta*eta)");
        o2->excludes(o1);
        o1->excludes(o2);
    }

    double value() const {
        if (eta2 >= 0.0 && eta >= 0.0)
            throw uqb::domain_error("give either --eta or --eta2, not both");
        if (eta2 >= 0.0) return eta2;
        if (eta >= 0.0) return eta * eta;
        throw uqb::domain_error("a divergence budget is required (--eta2 or --eta)");
    }
};

struct SourceFlags {
    std::string data_path;
    int column = -1;
    std::string model;
    double rate = 1.0;
    double mu = 0.0;
    double sigma = 1.0;
    double lo = -uqb::inf;
    double hi = uqb::inf;

    void attach(CLI::App* cmd) {
        auto* d = cmd->add_option("--data", data_path,
                                  "sample file (whitespace-separated values)");
        cmd->add_option("--column", column, "0-based CSV column of --data")->needs(d);
        auto* m = cmd->add_option("--model", model,
                                  "analytic model: exponential | truncated-normal")
                      ->check(CLI::IsMember({"exponential", "truncated-normal"}));
        cmd->add_option("--rate", rate, "exponential rate")->needs(m);
        cmd->add_option("--mu", mu, "normal location")->needs(m);
        cmd->add_option("--sigma", sigma, "normal scale")->needs(m);
        cmd->add_option("--lo", lo, "truncation lower endpoint")->needs(m);
        cmd->add_option("--hi", hi, "truncation upper endpoint")->needs(m);
        d->excludes(m);
        m->excludes(d);
    }

    // Builds the centered cumulant and a provenance record.
    std::pair<uqb::CumulantFunction, json> resolve() const {
        if (!data_path.empty()) {
            std::optional<int> col;
            if (column >= 0) col = column;
            auto sample = read_samples_any(data_path, col);
            json src{{"data", data_path}, {"n", sample.size()}};
            if (col) src["column"] = *col;
            return {uqb::empirical_cgf(sample), src};
        }
        if (model == "exponential") {
            uqb::models::ExponentialModel m{rate};
            return {uqb::models::exponential_centered_cgf(m),
                    json{{"model", "exponential"}, {"rate", rate}}};
        }
        if (model == "truncated-normal") {
            uqb::models::TruncatedNormalModel m{mu, sigma, lo, hi};
            json src{{"model", "truncated-normal"}, {"mu", mu}, {"sigma", sigma}};
            src["lo"] = std::isinf(lo) ? json("-inf") : json(lo);
            src["hi"] = std::isinf(hi) ? json("inf") : json(hi);
            return {uqb::models::truncated_normal_cgf(m), src};
        }
        throw uqb::domain_error("need --data FILE or --model NAME");
    }
};

struct FamilyFlags {
    std::string family;
    std::string input_json;
    double sigma = -1.0;
    double sigma2 = -1.0;
    double c_max = -1.0;
    double drift = 0.0;
    double a = 0.0, b = 0.0, mu = 0.0;
    bool a_set = false, b_set = false, mu_set = false;

    void attach(CLI::App* cmd) {
        auto* f = cmd->add_option("--family", family,
                                  "bound family: subgaussian | interval-subgaussian | "
                                  "bennett | bennett-ab | hoeffding")
                      ->check(CLI::IsMember({"subgaussian", "interval-subgaussian",
                                             "bennett", "bennett-ab", "hoeffding"}));
        auto* in = cmd->add_option("--input", input_json, "bound as tagged JSON file");
        f->excludes(in);
        in->excludes(f);
        cmd->add_option("--sigma", sigma, "sigma_b parameter")->needs(f);
        cmd->add_option("--sigma2", sigma2, "sigma_b^2 parameter")->needs(f);
        cmd->add_option("--cmax", c_max, "interval endpoint for interval-subgaussian")->needs(f);
        cmd->add_option("--drift", drift, "recorded mean offset (reporting only)")->needs(f);
        cmd->add_option("--a", a, "support lower endpoint")->needs(f)
            ->each([this](const std::string&) { a_set = true; });
        cmd->add_option("--b", b, "support upper endpoint")->needs(f)
            ->each([this](const std::string&) { b_set = true; });
        cmd->add_option("--mu", mu, "mean")->needs(f)
            ->each([this](const std::string&) { mu_set = true; });
    }

    double sigma_b() const {
        if (sigma >= 0.0 && sigma2 >= 0.0)
            throw uqb::domain_error("give either --sigma or --sigma2, not both");
        if (sigma >= 0.0) return sigma;
        if (sigma2 >= 0.0) return std::sqrt(sigma2);
        throw uqb::domain_error("family '" + family + "' needs --sigma or --sigma2");
    }

    void need(bool have, const char* flag) const {
        if (!have)
            throw uqb::domain_error("family '" + family + "' needs " + flag);
    }

    uqb::ConcentrationBound resolve() const {
        if (!input_json.empty()) {
            std::ifstream in(input_json);
            if (!in) throw uqb::domain_error("cannot open bound file: " + input_json);
            json j = json::parse(in, nullptr, true, true);
            return uqb::io::bound_from_json(j);
        }
        if (family == "subgaussian") return uqb::SubGaussianBound{sigma_b()};
        if (family == "interval-subgaussian") {
            if (c_max <= 0.0)
                throw uqb::domain_error("interval-subgaussian needs --cmax > 0");
            return uqb::IntervalSubGaussianBound{sigma_b(), c_max, drift};
        }
        if (family == "bennett") {
            need(b_set, "--b");
            need(mu_set, "--mu");
            return uqb::BennettBound{b, mu, sigma_b()};
        }
        if (family == "bennett-ab") {
            need(a_set, "--a");
            need(b_set, "--b");
            need(mu_set, "--mu");
            return uqb::BennettABBound{a, b, mu};
        }
        if (family == "hoeffding") {
            need(a_set, "--a");
            need(b_set, "--b");
            return uqb::HoeffdingBound{a, b};
        }
        throw uqb::domain_error("need --family NAME or --input FILE");
    }
};

json manifest_header(const std::string& example, std::uint64_t seed) {
    return json{{"example", example},
                {"version", uqb::version_string},
                {"seed", seed}};
}

// ---- subcommand bodies ----------------------------------------------

void run_bound(const FamilyFlags& fam, const ToleranceFlags& tol,
               const std::string& output) {
    auto bound = fam.resolve();
    double eta_sq = tol.value();
    json out;
    if (std::holds_alternative<uqb::BennettBound>(bound)) {
        // one-sided envelope: only the upper side carries information
        uqb::OptimizerDiagnostics diag;
        uqb::BiasCertificate cert;
        cert.eta_sq = eta_sq;
        cert.upper = uqb::u_divergence(bound, eta_sq, uqb::Sign::plus, &diag);
        cert.lower = 0.0;
        cert.method = uqb::BoundMethod::concentration_family;
        cert.diagnostics = diag;
        out = uqb::io::to_json(cert);
        out["lower"] = "-inf";
        out["sides"] = "upper_only";
    } else {
        out = uqb::io::to_json(uqb::bias_band(bound, eta_sq));
    }
    out["bound"] = uqb::io::to_json(bound);
    emit(output, dump(out));
}

void run_go(const SourceFlags& src, const ToleranceFlags& tol,
            const std::string& output) {
    auto [h, provenance] = src.resolve();
    double eta_sq = tol.value();
    uqb::TiltedSolution up{}, dn{};
    uqb::BiasCertificate cert;
    cert.eta_sq = eta_sq;
    cert.upper = uqb::go_divergence(h, eta_sq, uqb::Sign::plus, &up);
    cert.lower = -uqb::go_divergence(h, eta_sq, uqb::Sign::minus, &dn);
    cert.method = uqb::BoundMethod::goal_oriented;
    cert.diagnostics.iterations = up.iterations + dn.iterations;
    cert.diagnostics.residual = std::max(up.residual, dn.residual);
    json out = uqb::io::to_json(cert);
    out["source"] = provenance;
    if (eta_sq > 0.0) {
        out["tilt"] = {{"plus", uqb::io::to_json(up)}, {"minus", uqb::io::to_json(dn)}};
    }
    emit(output, dump(out));
}

void run_tilt(const SourceFlags& src, const ToleranceFlags& tol,
              const std::string& output) {
    auto [h, provenance] = src.resolve();
    double eta_sq = tol.value();
    auto up = uqb::solve_tilt(h, eta_sq);
    auto dn = uqb::solve_tilt(uqb::reflect(h), eta_sq);
    json out{{"eta_sq", eta_sq},
             {"plus", uqb::io::to_json(up)},
             {"minus", uqb::io::to_json(dn)},
             {"source", provenance}};
    emit(output, dump(out));
}

void run_band(const std::string& data_path, int column, double alpha, double eta,
              const std::string& output) {
    std::optional<int> col;
    if (column >= 0) col = column;
    auto sample = read_samples_any(data_path, col);
    auto band = uqb::confidence_band(sample, {}, alpha, eta);
    std::ostringstream csv;
    uqb::io::write_band_csv(csv, band);
    emit(output, csv.str());
    json sidecar = uqb::io::band_sidecar(band);
    if (output == "-") {
        std::cerr << dump(sidecar);
    } else {
        emit(output + ".json", dump(sidecar));
    }
}

void run_fit_weibull(const std::string& data_path, int column,
                     const std::string& output) {
    uqb::models::FailureData data;
    json source;
    if (data_path.empty()) {
        data.times = uqb::models::battery_failure_times();
        source = "bundled";
    } else {
        std::optional<int> col;
        if (column >= 0) col = column;
        data.times = read_samples_any(data_path, col);
        source = data_path;
    }
    auto model = uqb::models::weibull_mle(data);
    json out{{"shape", model.shape},
             {"scale", model.scale},
             {"n", data.times.size()},
             {"source", source}};
    emit(output, dump(out));
}

// Exponential study: exact mean gap against the certified bounds as the
// alternative rate (hence the divergence budget) grows.
void run_example_exponential(const std::string& dir, int points) {
    if (points < 2) throw uqb::domain_error("example exponential: need >= 2 points");
    uqb::models::ExponentialModel base{1.0};
    auto h = uqb::models::exponential_centered_cgf(base);
    auto envelope = uqb::models::sub_exponential_envelope(base);

    std::ostringstream csv;
    csv << "lambda_q,eta_sq,exact_gap,go_lower,go_upper,env_lower,env_upper\n";
    for (int i = 0; i < points; ++i) {
        double lam_q = 1.01 + (10.0 - 1.01) * i / (points - 1);
        double eta_sq = uqb::kl_exponential_pair(lam_q, 1.0);
        auto go = uqb::go_certificate(h, eta_sq);
        auto env = uqb::bias_band(envelope, eta_sq);
        csv << format_number(lam_q) << ',' << format_number(eta_sq) << ','
            << format_number(1.0 / lam_q - 1.0) << ',' << format_number(go.lower) << ','
            << format_number(go.upper) << ',' << format_number(env.lower) << ','
            << format_number(env.upper) << '\n';
    }
    emit(dir + "/exponential_bias_bounds.csv", csv.str());

    json manifest = manifest_header("exponential", 0);
    manifest["parameters"] = {{"rate_base", 1.0},
                              {"lambda_q_range", {1.01, 10.0}},
                              {"points", points}};
    manifest["outputs"] = {"exponential_bias_bounds.csv"};
    emit(dir + "/exponential_manifest.json", dump(manifest));
}

// Truncated-normal study: the exact goal-oriented bound against the
// envelope family, ordered loosest to tightest, over a budget sweep.
void run_example_truncated_normal(const std::string& dir, double eta2_max, double step) {
    if (!(eta2_max > 0.0) || !(step > 0.0))
        throw uqb::domain_error("example truncated-normal: need positive sweep bounds");
    uqb::models::TruncatedNormalModel model{0.0, 1.0, -1.0, 1.0};
    auto moments = uqb::models::truncated_normal_moments(model);
    auto h = uqb::models::truncated_normal_cgf(model);
    uqb::ConcentrationBound bennett =
        uqb::BennettBound{1.0, moments.mean, std::sqrt(moments.variance)};
    uqb::ConcentrationBound two_point = uqb::BennettABBound{-1.0, 1.0, moments.mean};
    uqb::ConcentrationBound hoeffding = uqb::HoeffdingBound{-1.0, 1.0};

    std::ostringstream csv;
    csv << "eta_sq,go_upper,bennett_upper,bennett_ab_upper,hoeffding_upper\n";
    for (double eta_sq = step; eta_sq <= eta2_max + 1e-12; eta_sq += step) {
        csv << format_number(eta_sq) << ','
            << format_number(uqb::go_divergence(h, eta_sq, uqb::Sign::plus)) << ','
            << format_number(uqb::u_divergence(bennett, eta_sq, uqb::Sign::plus)) << ','
            << format_number(uqb::u_divergence(two_point, eta_sq, uqb::Sign::plus)) << ','
            << format_number(uqb::u_divergence(hoeffding, eta_sq, uqb::Sign::plus)) << '\n';
    }
    emit(dir + "/truncated_normal_bounds.csv", csv.str());

    json manifest = manifest_header("truncated-normal", 0);
    manifest["parameters"] = {{"mu", 0.0}, {"sigma", 1.0}, {"lo", -1.0}, {"hi", 1.0},
                              {"mean", moments.mean}, {"variance", moments.variance},
                              {"eta_sq_max", eta2_max}, {"eta_sq_step", step}};
    manifest["outputs"] = {"truncated_normal_bounds.csv"};
    emit(dir + "/truncated_normal_manifest.json", dump(manifest));
}

// Battery study: fit the lifetime law to the bundled failure data, then
// certify the smoothed failure probability over a cycle grid at two
// divergence budgets.
void run_example_battery(const std::string& dir, const std::string& data_path,
                         int points, double t_max, double w,
                         std::vector<double> eta2s) {
    if (points < 2) throw uqb::domain_error("example battery: need >= 2 grid points");
    if (!(t_max > 0.0)) throw uqb::domain_error("example battery: t_max must be positive");
    if (eta2s.empty()) eta2s = {0.1, 0.01};

    uqb::models::FailureData data;
    data.times = data_path.empty() ? uqb::models::battery_failure_times()
                                   : read_samples_any(data_path, std::nullopt);
    auto model = uqb::models::weibull_mle(data);

    std::ostringstream csv;
    csv << "t,indicator_mean,logistic_mean";
    for (double e2 : eta2s) {
        std::string tag = format_number(e2);
        csv << ",lower_eta2_" << tag << ",upper_eta2_" << tag;
    }
    csv << '\n';
    for (int i = 0; i < points; ++i) {
        double t = t_max * i / (points - 1);
        double f_ind = uqb::models::weibull_cdf(model, t);
        double f_log = uqb::models::logistic_failure_mean(model, t, w);
        csv << format_number(t) << ',' << format_number(f_ind) << ','
            << format_number(f_log);
        for (double e2 : eta2s) {
            auto cert = uqb::bias_band(uqb::BennettABBound{0.0, 1.0, f_log}, e2);
            csv << ',' << format_number(f_log + cert.lower) << ','
                << format_number(f_log + cert.upper);
        }
        csv << '\n';
    }
    emit(dir + "/battery_failure_bands.csv", csv.str());

    json manifest = manifest_header("battery", 0);
    manifest["parameters"] = {{"shape", model.shape}, {"scale", model.scale},
                              {"n_failures", data.times.size()},
                              {"logistic_steepness", w},
                              {"t_max", t_max}, {"points", points},
                              {"eta_sq", eta2s}};
    manifest["data_source"] = data_path.empty() ? "bundled" : data_path;
    manifest["outputs"] = {"battery_failure_bands.csv"};
    emit(dir + "/battery_manifest.json", dump(manifest));
}

// Spin-chain study: certified bands for the local magnetization at every
// admissible window center, from sampled moments (exactly enumerated
// moments too, when requested and small enough).
void run_example_ising(const std::string& dir, const uqb::models::IsingChain& chain,
                       int radius, std::vector<double> eta2s,
                       const uqb::models::McmcParams& params, bool exact,
                       std::optional<int> defect_bond, double defect_coupling) {
    if (eta2s.empty()) eta2s = {0.05, 0.5};
    auto profile = uqb::models::ising_gibbs_profile(chain, radius, params);
    int n_centers = static_cast<int>(profile.size());

    std::vector<uqb::models::IsingExact> exact_rows;
    if (exact) {
        exact_rows.reserve(n_centers);
        for (int i = 0; i < n_centers; ++i)
            exact_rows.push_back(uqb::models::ising_enumerate(chain, {radius + i, radius}));
    }

    std::ostringstream csv;
    csv << "site,mean,se_mean,variance";
    if (exact) csv << ",exact_mean,exact_variance";
    for (double e2 : eta2s) {
        std::string tag = format_number(e2);
        csv << ",bennett_lower_" << tag << ",bennett_upper_" << tag
            << ",bennett_ab_lower_" << tag << ",bennett_ab_upper_" << tag;
    }
    csv << '\n';

    double max_dev_in_se = 0.0;
    for (int i = 0; i < n_centers; ++i) {
        double mean = exact ? exact_rows[i].mean : profile[i].mean.value;
        double var = exact ? exact_rows[i].variance : profile[i].variance.value;
        // A window mean of spins lives in [-1, 1]; its plug-in variance
        // never exceeds (1 - mean)(1 + mean), so the one-sided envelope
        // parameters below are always admissible.
        var = std::clamp(var, 1e-12, (1.0 - mean) * (1.0 + mean));
        csv << (radius + i + 1) << ',' << format_number(profile[i].mean.value) << ','
            << format_number(std::sqrt(profile[i].mean.variance_of_estimator)) << ','
            << format_number(profile[i].variance.value);
        if (exact) {
            csv << ',' << format_number(exact_rows[i].mean) << ','
                << format_number(exact_rows[i].variance);
            double se = std::sqrt(profile[i].mean.variance_of_estimator);
            if (se > 0.0)
                max_dev_in_se = std::max(max_dev_in_se,
                                         std::abs(profile[i].mean.value - exact_rows[i].mean) / se);
        }
        for (double e2 : eta2s) {
            auto bennett = uqb::bennett_two_sided_band(-1.0, 1.0, mean, std::sqrt(var), e2);
            auto two_pt = uqb::bias_band(uqb::BennettABBound{-1.0, 1.0, mean}, e2);
            csv << ',' << format_number(mean + bennett.lower) << ','
                << format_number(mean + bennett.upper) << ','
                << format_number(mean + two_pt.lower) << ','
                << format_number(mean + two_pt.upper);
        }
        csv << '\n';
    }
    emit(dir + "/ising_magnetization_bands.csv", csv.str());

    json manifest = manifest_header("ising", params.seed);
    manifest["parameters"] = {{"chain", uqb::io::to_json(chain)},
                              {"window_radius", radius},
                              {"eta_sq", eta2s},
                              {"sweeps", params.sweeps},
                              {"burn_in", params.burn_in},
                              {"thin", params.thin},
                              {"exact_cross_check", exact}};
    if (exact) manifest["max_mean_deviation_in_se"] = max_dev_in_se;
    if (defect_bond) {
        uqb::models::IsingChain perturbed = chain;
        int b = *defect_bond;
        if (b < 0 || b >= static_cast<int>(perturbed.coupling.size()))
            throw uqb::domain_error("defect bond index out of range");
        perturbed.coupling[b] = defect_coupling;
        json defect{{"bond", b}, {"coupling", defect_coupling}};
        auto sampled = uqb::models::ising_kl_defect_sampled(chain, perturbed, params);
        defect["kl_sampled"] = sampled.value;
        defect["kl_sampled_se"] = sampled.std_error;
        if (chain.n_sites <= uqb::models::ising_enumeration_limit)
            defect["kl_exact"] = uqb::models::ising_kl_defect_exact(chain, perturbed);
        manifest["defect"] = defect;
    }
    manifest["outputs"] = {"ising_magnetization_bands.csv"};
    emit(dir + "/ising_manifest.json", dump(manifest));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified bias bounds for expectations over relative-entropy "
                 "neighborhoods of a baseline model"};
    app.set_version_flag("--version", uqb::version_string);
    app.require_subcommand(1);

    std::uint64_t seed = 12345;
    app.add_option("--seed", seed, "random seed (overrides UQBOUND_SEED)")
        ->envname("UQBOUND_SEED");

    // bound: certificate from an explicit envelope family
    auto* bound_cmd = app.add_subcommand(
        "bound", "two-sided bias certificate from a concentration envelope");
    FamilyFlags fam;
    fam.attach(bound_cmd);
    ToleranceFlags bound_tol;
    bound_tol.attach(bound_cmd);
    std::string bound_out = "-";
    bound_cmd->add_option("--output", bound_out, "output file or - for stdout");
    bound_cmd->callback([&] { run_bound(fam, bound_tol, bound_out); });

    // go: certificate from the exact cumulant of a model or a sample
    auto* go_cmd = app.add_subcommand(
        "go", "tight bias certificate from an exact or empirical cumulant");
    SourceFlags go_src;
    go_src.attach(go_cmd);
    ToleranceFlags go_tol;
    go_tol.attach(go_cmd);
    std::string go_out = "-";
    go_cmd->add_option("--output", go_out, "output file or - for stdout");
    go_cmd->callback([&] { run_go(go_src, go_tol, go_out); });

    // tilt: the extremal reweighting behind the certificate
    auto* tilt_cmd = app.add_subcommand(
        "tilt", "solve for the extremal exponential tilt at a given budget");
    SourceFlags tilt_src;
    tilt_src.attach(tilt_cmd);
    ToleranceFlags tilt_tol;
    tilt_tol.attach(tilt_cmd);
    std::string tilt_out = "-";
    tilt_cmd->add_option("--output", tilt_out, "output file or - for stdout");
    tilt_cmd->callback([&] { run_tilt(tilt_src, tilt_tol, tilt_out); });

    // band: distribution-function envelope from a sample
    auto* band_cmd = app.add_subcommand(
        "band", "empirical CDF confidence band widened for model misspecification");
    std::string band_data;
    int band_column = -1;
    double band_alpha = 0.05;
    double band_eta = 0.0;
    std::string band_out = "-";
    band_cmd->add_option("--data", band_data, "sample file")->required();
    band_cmd->add_option("--column", band_column, "0-based CSV column");
    band_cmd->add_option("--alpha", band_alpha, "coverage failure probability");
    band_cmd->add_option("--eta", band_eta, "divergence radius eta (not squared)");
    band_cmd->add_option("--output", band_out,
                         "CSV output path (JSON sidecar written alongside)");
    band_cmd->callback([&] {
        run_band(band_data, band_column, band_alpha, band_eta, band_out);
    });

    // fit-weibull: lifetime model fit
    auto* fit_cmd = app.add_subcommand("fit-weibull",
                                       "maximum likelihood Weibull fit of failure times");
    std::string fit_data;
    int fit_column = -1;
    std::string fit_out = "-";
    fit_cmd->add_option("--data", fit_data, "failure times file (default: bundled data)");
    fit_cmd->add_option("--column", fit_column, "0-based CSV column");
    fit_cmd->add_option("--output", fit_out, "output file or - for stdout");
    fit_cmd->callback([&] { run_fit_weibull(fit_data, fit_column, fit_out); });

    // example: canned studies emitting plot data
    auto* ex_cmd = app.add_subcommand("example", "run a canned study, emitting CSV + manifest");
    std::string ex_name;
    ex_cmd->add_option("name", ex_name, "exponential | truncated-normal | battery | ising")
        ->required()
        ->check(CLI::IsMember({"exponential", "truncated-normal", "battery", "ising"}));
    std::string ex_dir = ".";
    ex_cmd->add_option("--output-dir", ex_dir, "directory for output files");
    int ex_points = 50;
    ex_cmd->add_option("--points", ex_points, "grid points (exponential: rates; battery: times)");
    double ex_eta2_max = 4.0, ex_step = 0.05;
    ex_cmd->add_option("--eta2-max", ex_eta2_max, "budget sweep end (truncated-normal)");
    ex_cmd->add_option("--eta2-step", ex_step, "budget sweep step (truncated-normal)");
    std::string ex_data;
    ex_cmd->add_option("--data", ex_data, "failure-time file override (battery)");
    double ex_tmax = 2500.0;
    ex_cmd->add_option("--tmax", ex_tmax, "cycle-grid end (battery)");
    double ex_w = 5.0;
    ex_cmd->add_option("--w", ex_w, "logistic steepness (battery)");
    std::vector<double> ex_eta2s;
    ex_cmd->add_option("--eta2", ex_eta2s, "divergence budgets (battery, ising)");
    int ex_n = 100;
    ex_cmd->add_option("--n", ex_n, "chain length (ising)");
    double ex_beta = 1.0, ex_j = 1.0, ex_h = 0.0;
    ex_cmd->add_option("--beta", ex_beta, "inverse temperature (ising)");
    ex_cmd->add_option("--j", ex_j, "uniform coupling (ising)");
    ex_cmd->add_option("--field", ex_h, "uniform external field (ising)");
    std::string ex_chain_file;
    ex_cmd->add_option("--chain", ex_chain_file, "chain spec JSON (overrides --n/--beta/--j/--field)");
    int ex_radius = 1;
    ex_cmd->add_option("--m", ex_radius, "window radius (ising)");
    long ex_sweeps = 60000, ex_burn = 10000;
    int ex_thin = 10;
    ex_cmd->add_option("--sweeps", ex_sweeps, "total sweeps (ising)");
    ex_cmd->add_option("--burn-in", ex_burn, "burn-in sweeps (ising)");
    ex_cmd->add_option("--thin", ex_thin, "record every thin-th sweep (ising)");
    bool ex_exact = false;
    ex_cmd->add_flag("--exact", ex_exact, "cross-check sampling against enumeration (ising)");
    int ex_defect_bond = -1;
    ex_cmd->add_option("--defect-bond", ex_defect_bond, "0-based bond to perturb (ising)");
    double ex_defect_j = 1.5;
    ex_cmd->add_option("--defect-coupling", ex_defect_j, "perturbed coupling value (ising)");
    ex_cmd->callback([&] {
        std::filesystem::create_directories(ex_dir);
        if (ex_name == "exponential") {
            run_example_exponential(ex_dir, ex_points);
        } else if (ex_name == "truncated-normal") {
            run_example_truncated_normal(ex_dir, ex_eta2_max, ex_step);
        } else if (ex_name == "battery") {
            int pts = (ex_points == 50) ? 500 : ex_points;
            run_example_battery(ex_dir, ex_data, pts, ex_tmax, ex_w, ex_eta2s);
        } else {
            uqb::models::IsingChain chain;
            if (!ex_chain_file.empty()) {
                std::ifstream in(ex_chain_file);
                if (!in) throw uqb::domain_error("cannot open chain file: " + ex_chain_file);
                chain = uqb::io::ising_from_json(json::parse(in, nullptr, true, true));
            } else {
                chain = uqb::models::IsingChain::uniform(ex_n, ex_j, ex_h, ex_beta);
            }
            uqb::models::McmcParams params{ex_sweeps, ex_burn, ex_thin, seed};
            std::optional<int> defect;
            if (ex_defect_bond >= 0) defect = ex_defect_bond;
            run_example_ising(ex_dir, chain, ex_radius, ex_eta2s, params, ex_exact,
                              defect, ex_defect_j);
        }
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const uqb::nonconvergence_error& e) {
        std::cerr << json{{"error", e.what()}, {"type", "nonconvergence"}}.dump() << "\n";
        return 3;
    } catch (const uqb::error& e) {
        std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
        return 2;
    }
}
