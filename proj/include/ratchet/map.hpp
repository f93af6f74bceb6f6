#ifndef RATCHET_MAP_HPP
#define RATCHET_MAP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ratchet/phase_space.hpp"
#include "ratchet/rng.hpp"

namespace ratchet {

/// Parameter set of the dissipative kicked ratchet, shared by the classical
/// map and the quantum channel.
struct MapParams {
    double k = 0.0;         ///< kick strength
    double gamma = 0.0;     ///< dissipation, in [0, 1]
    double a = 0.5;         ///< second-harmonic amplitude
    double phi = 1.5707963267948966;  ///< spatial phase
    double hbar_eff = 0.0;  ///< effective Planck constant = kicking period

    /// Classical kick parameter K = k * hbar_eff.
    double K() const { return k * hbar_eff; }

    void validate() const {
        if (gamma < 0.0 || gamma > 1.0) throw ConfigError("MapParams: gamma must be in [0,1]");
        if (k < 0.0) throw ConfigError("MapParams: k must be >= 0");
        if (!(hbar_eff > 0.0)) throw ConfigError("MapParams: hbar_eff must be > 0");
    }
};

/// Point on the cylinder: position x in [0, 2pi) and conjugate momentum n.
struct PhasePoint {
    double x = 0.0;
    double n = 0.0;

    /// Rescaled momentum p = hbar_eff * n.
    double p(double hbar_eff) const { return hbar_eff * n; }
};

/// Thermal noise on the momentum update. variance is <xi^2> in n units;
/// samples are truncated at +-truncation standard deviations.
struct NoiseSpec {
    double variance = 0.0;
    double truncation = 8.0;

    void validate() const {
        if (variance < 0.0) throw ConfigError("NoiseSpec: variance must be >= 0");
        if (!(truncation > 0.0)) throw ConfigError("NoiseSpec: truncation must be > 0");
    }
    bool enabled() const { return variance > 0.0; }
};

/// Reduce x to [0, 2pi).
double wrap_angle(double x);

/// One deterministic map step: kick + damp the momentum, then drift.
PhasePoint step(const PhasePoint& s, const MapParams& params);

/// One map step with thermal noise added to the updated momentum; the noisy
/// momentum enters the drift.
PhasePoint step_thermal(const PhasePoint& s, const MapParams& params,
                        const NoiseSpec& noise, Rng& rng);

/// Advance every point `steps` iterations. Each point consumes its own
/// substream of `seed`, so the result is independent of evaluation order.
std::vector<PhasePoint> evolve_ensemble(std::span<const PhasePoint> points,
                                        const MapParams& params, const NoiseSpec& noise,
                                        std::int64_t steps, std::uint64_t seed);

/// Ensemble mean of the rescaled momentum p. Throws on an empty ensemble.
double ratchet_current(std::span<const PhasePoint> points, double hbar_eff);

/// Occupation histogram of an ensemble binned on `grid` after discarding
/// `transient` steps; normalized to unit mass over in-window cells.
PhaseField attractor_histogram(const MapParams& params, const NoiseSpec& noise,
                               const UlamGrid& grid, std::int64_t transient,
                               std::int64_t samples, std::uint64_t seed);

/// Left side of the window-invariance bound
/// gamma*p_max + K(1+a) + truncation*sqrt(variance)*hbar_eff <= p_max.
double window_invariance_reach(const MapParams& params, const NoiseSpec& noise, double p_max);

}  // namespace ratchet

#endif
