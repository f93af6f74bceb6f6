#include "ratchet/scenario.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

namespace ratchet {

using nlohmann::json;

int ScenarioConfig::derived_M() const {
    return static_cast<int>(std::llround(2.0 * p_max / hbar_eff_pf));
}

void ScenarioConfig::validate() const {
    if (name.empty()) throw ConfigError("config: name required");
    map_params().validate();
    if (!(hbar_eff_pf > 0.0)) throw ConfigError("config: hbar_eff_pf must be > 0");
    if (!(p_max > 0.0)) throw ConfigError("config: p_max must be > 0");
    if (M != 0 && M != derived_M())
        throw ConfigError("config: M=" + std::to_string(M) + " inconsistent with hbar_eff_pf (M=round(2*p_max/hbar_eff_pf)=" +
                          std::to_string(derived_M()) + ")");
    if (n_tr < 1) throw ConfigError("config: n_tr must be >= 1");
    if (eigen.count < 1 || eigen.subspace <= eigen.count)
        throw ConfigError("config: need 1 <= count < subspace");
    if (!(eigen.tol > 0.0)) throw ConfigError("config: tol must be > 0");
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    if (name == "B1") {
        cfg.k = 8.2;
        cfg.gamma = 0.2;
    } else if (name == "Cm1") {
        cfg.k = 5.6;
        cfg.gamma = 0.64;
    } else if (name == "Dm1") {
        cfg.k = 11.9;
        cfg.gamma = 0.29;
    } else if (name == "attractor") {
        cfg.k = 11.9;
        cfg.gamma = 0.26;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected B1, Cm1, Dm1 or attractor)");
    }
    return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ScenarioConfig cfg;
    if (doc.contains("preset")) cfg = preset(doc.at("preset").get<std::string>());
    try {
        if (doc.contains("name")) cfg.name = doc.at("name").get<std::string>();
        if (doc.contains("k")) cfg.k = doc.at("k").get<double>();
        if (doc.contains("gamma")) cfg.gamma = doc.at("gamma").get<double>();
        if (doc.contains("a")) cfg.a = doc.at("a").get<double>();
        if (doc.contains("phi")) cfg.phi = doc.at("phi").get<double>();
        if (doc.contains("hbar_eff")) cfg.hbar_eff = doc.at("hbar_eff").get<double>();
        if (doc.contains("hbar_eff_pf")) cfg.hbar_eff_pf = doc.at("hbar_eff_pf").get<double>();
        if (doc.contains("p_max")) cfg.p_max = doc.at("p_max").get<double>();
        if (doc.contains("M")) cfg.M = doc.at("M").get<int>();
        if (doc.contains("n_tr")) cfg.n_tr = doc.at("n_tr").get<std::int64_t>();
        if (doc.contains("noise_variance")) cfg.noise_variance = doc.at("noise_variance").get<double>();
        if (doc.contains("eigen_count")) cfg.eigen.count = doc.at("eigen_count").get<int>();
        if (doc.contains("eigen_subspace")) cfg.eigen.subspace = doc.at("eigen_subspace").get<int>();
        if (doc.contains("eigen_tol")) cfg.eigen.tol = doc.at("eigen_tol").get<double>();
        if (doc.contains("max_restarts")) cfg.eigen.max_restarts = doc.at("max_restarts").get<int>();
        if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError("bad config value in " + path.string() + ": " + e.what());
    }

    cfg.validate();
    return cfg;
}

}  // namespace ratchet
