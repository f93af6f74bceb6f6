#ifndef RATCHET_SCENARIO_HPP
#define RATCHET_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "ratchet/map.hpp"

namespace ratchet {

struct EigenOptions {
    int count = 100;
    int subspace = 300;
    double tol = 1e-8;
    int max_restarts = 300;
};

/// Full run configuration. The built-in presets reproduce the four study
/// scenarios: B1 (k=8.2, gamma=0.2), Cm1 (k=5.6, gamma=0.64),
/// Dm1 (k=11.9, gamma=0.29) and attractor (k=11.9, gamma=0.26), all with
/// a=0.5, phi=pi/2.
///
/// k is the kick strength in rescaled-momentum units (the tau-invariant
/// parameter of the classical map); the map and the quantum kick use the
/// momentum-quantum coefficient k / hbar_eff, so MapParams::K() == k.
struct ScenarioConfig {
    std::string name;
    double k = 0.0;
    double gamma = 0.0;
    double a = 0.5;
    double phi = 1.5707963267948966;
    double hbar_eff = 0.15;
    double hbar_eff_pf = 0.15;
    double p_max = 30.0;
    int M = 0;  ///< 0 = derive from 2*p_max/hbar_eff_pf
    std::int64_t n_tr = 1000;
    double noise_variance = -1.0;  ///< <xi^2> in rescaled p units; <0 = default to hbar_eff
    EigenOptions eigen;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    MapParams map_params() const { return MapParams{k / hbar_eff, gamma, a, phi, hbar_eff}; }

    /// Thermal noise in the map's momentum-quantum units: <xi^2> is imposed
    /// in rescaled p units (default hbar_eff), variance_n = variance_p /
    /// hbar_eff^2. The truncation is capped (below the default 8 sigma) so
    /// that one map step keeps the [-p_max, p_max] window closed.
    NoiseSpec thermal_noise() const {
        const double variance_p = noise_variance < 0.0 ? hbar_eff : noise_variance;
        const double margin = p_max * (1.0 - gamma) - k * (1.0 + a);
        double truncation = 8.0;
        if (variance_p > 0.0 && margin < 8.0 * std::sqrt(variance_p))
            truncation = 0.999 * margin / std::sqrt(variance_p);
        if (truncation < 3.0)
            throw ConfigError("config: momentum window too small for the thermal noise");
        return NoiseSpec{variance_p / (hbar_eff * hbar_eff), truncation};
    }
    int derived_M() const;

    /// Validates ranges and the M = round(2*p_max/hbar_eff_pf) consistency.
    void validate() const;
};

/// Built-in paper scenarios: B1, Cm1, Dm1, attractor.
ScenarioConfig preset(const std::string& name);

/// Load a JSON config file; unspecified keys keep preset/default values.
ScenarioConfig parse_config(const std::filesystem::path& path);

}  // namespace ratchet

#endif
