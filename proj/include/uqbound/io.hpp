#pragma once

#include <cmath>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqbound/concentration.hpp"
#include "uqbound/distribution.hpp"
#include "uqbound/divergence.hpp"
#include "uqbound/estimator.hpp"
#include "uqbound/models/ising.hpp"

namespace uqb::io {

using nlohmann::json;

// ---- samples ---------------------------------------------------------

// Plain text samples: one value per whitespace-separated token, or a
// 0-based CSV column.  Lines starting with '#' and blank lines are
// skipped; a non-numeric first CSV line is treated as a header.
inline std::vector<double> read_samples(std::istream& in,
                                        std::optional<int> csv_column = {}) {
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!csv_column) {
            std::istringstream row(line);
            double v;
            while (row >> v) out.push_back(v);
            if (!row.eof() && row.fail() && !out.empty())
                throw domain_error("read_samples: non-numeric token in '" + line + "'");
            if (out.empty() && !(std::istringstream(line) >> v))
                throw domain_error("read_samples: non-numeric token in '" + line + "'");
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (*csv_column < 0 || *csv_column >= static_cast<int>(fields.size()))
            throw domain_error("read_samples: column " + std::to_string(*csv_column) +
                               " missing in '" + line + "'");
        const std::string& tok = fields[*csv_column];
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            if (first) {
                first = false; // header row
                continue;
            }
            throw domain_error("read_samples: non-numeric value '" + tok + "'");
        }
        first = false;
    }
    if (out.empty()) throw domain_error("read_samples: no samples found");
    return out;
}

inline std::vector<double> read_samples_file(const std::string& path,
                                             std::optional<int> csv_column = {}) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open sample file: " + path);
    return read_samples(in, csv_column);
}

// ---- discrete distributions -----------------------------------------

inline json to_json(const DiscreteDistribution& p) {
    return json{{"atoms", p.atoms}, {"weights", p.weights}};
}

inline DiscreteDistribution distribution_from_json(const json& j) {
    DiscreteDistribution p;
    try {
        p.atoms = j.at("atoms").get<std::vector<double>>();
        p.weights = j.at("weights").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw domain_error(std::string("distribution JSON: ") + e.what());
    }
    p.validate();
    return p;
}

// ---- concentration bounds (tagged by variant) ------------------------

inline json to_json(const ConcentrationBound& bound) {
    struct Visitor {
        json operator()(const SubGaussianBound& b) const {
            return {{"variant", "subgaussian"}, {"sigma_b", b.sigma_b}};
        }
        json operator()(const IntervalSubGaussianBound& b) const {
            return {{"variant", "interval_subgaussian"},
                    {"sigma_b", b.sigma_b},
                    {"c_max", b.c_max},
                    {"drift", b.drift}};
        }
        json operator()(const BennettBound& b) const {
            return {{"variant", "bennett"}, {"b", b.b}, {"mu", b.mu},
                    {"sigma_b", b.sigma_b}};
        }
        json operator()(const BennettABBound& b) const {
            return {{"variant", "bennett_ab"}, {"a", b.a}, {"b", b.b}, {"mu", b.mu}};
        }
        json operator()(const HoeffdingBound& b) const {
            return {{"variant", "hoeffding"}, {"a", b.a}, {"b", b.b}};
        }
        json operator()(const ExplicitMgfBound&) const {
            throw domain_error("an explicit-cumulant bound has no JSON form");
        }
    };
    return std::visit(Visitor{}, bound);
}

inline ConcentrationBound bound_from_json(const json& j) {
    std::string variant;
    try {
        variant = j.at("variant").get<std::string>();
        auto num = [&j](const char* key) { return j.at(key).get<double>(); };
        ConcentrationBound out;
        if (variant == "subgaussian")
            out = SubGaussianBound{num("sigma_b")};
        else if (variant == "interval_subgaussian")
            out = IntervalSubGaussianBound{num("sigma_b"), num("c_max"),
                                           j.value("drift", 0.0)};
        else if (variant == "bennett")
            out = BennettBound{num("b"), num("mu"), num("sigma_b")};
        else if (variant == "bennett_ab")
            out = BennettABBound{num("a"), num("b"), num("mu")};
        else if (variant == "hoeffding")
            out = HoeffdingBound{num("a"), num("b")};
        else
            throw domain_error("unknown bound variant: " + variant);
        validate(out);
        return out;
    } catch (const json::exception& e) {
        throw domain_error(std::string("bound JSON (variant '") + variant + "'): " + e.what());
    }
}

// ---- certificates ----------------------------------------------------

inline json to_json(const BiasCertificate& cert) {
    return json{
        {"eta_sq", cert.eta_sq},
        {"lower", cert.lower},
        {"upper", cert.upper},
        {"method", cert.method == BoundMethod::goal_oriented ? "goal_oriented"
                                                             : "concentration_family"},
        {"diagnostics", {{"iterations", cert.diagnostics.iterations},
                         {"residual", cert.diagnostics.residual}}}};
}

inline json to_json(const TiltedSolution& sol) {
    json j{{"regime", sol.regime == TiltRegime::interior ? "interior" : "boundary"},
           {"kl_attained", sol.kl_attained},
           {"tilted_mean_gap", sol.tilted_mean_gap},
           {"iterations", sol.iterations},
           {"residual", sol.residual}};
    if (std::isinf(sol.c_star))
        j["c_star"] = "inf";
    else
        j["c_star"] = sol.c_star;
    return j;
}

// ---- numbers and bands -----------------------------------------------

// Shortest round-trip decimal text; keeps CSV output byte-stable across
// runs and platforms.
inline std::string format_number(double v) {
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_band_csv(std::ostream& out, const ConfidenceBand& band) {
    band.validate();
    out << "x,lower,upper\n";
    for (std::size_t i = 0; i < band.xs.size(); ++i)
        out << format_number(band.xs[i]) << ',' << format_number(band.lower[i]) << ','
            << format_number(band.upper[i]) << '\n';
}

inline json band_sidecar(const ConfidenceBand& band) {
    return json{{"alpha", band.alpha},
                {"eta", band.eta},
                {"n", band.n},
                {"epsilon_n", band.epsilon_n}};
}

// ---- ising chains ----------------------------------------------------

inline json to_json(const models::IsingChain& chain) {
    return json{{"n", chain.n_sites},
                {"beta", chain.beta},
                {"j", chain.coupling},
                {"h", chain.field}};
}

inline models::IsingChain ising_from_json(const json& j) {
    models::IsingChain chain;
    try {
        chain.n_sites = j.at("n").get<int>();
        chain.beta = j.at("beta").get<double>();
        chain.coupling = j.at("j").get<std::vector<double>>();
        chain.field = j.at("h").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw domain_error(std::string("ising chain JSON: ") + e.what());
    }
    chain.validate();
    return chain;
}

} // namespace uqb::io
