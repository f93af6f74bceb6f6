#include "ratchet/map.hpp"

#include <cmath>
#include <omp.h>

namespace ratchet {

double wrap_angle(double x) {
    double w = std::fmod(x, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w -= kTwoPi;  // fmod(-eps) + 2pi can round up to 2pi
    return w;
}

PhasePoint step(const PhasePoint& s, const MapParams& params) {
    const double kick = params.k * (std::sin(s.x) + params.a * std::sin(2.0 * s.x + params.phi));
    const double n_new = params.gamma * s.n + kick;
    return {wrap_angle(s.x + params.hbar_eff * n_new), n_new};
}

PhasePoint step_thermal(const PhasePoint& s, const MapParams& params,
                        const NoiseSpec& noise, Rng& rng) {
    const double kick = params.k * (std::sin(s.x) + params.a * std::sin(2.0 * s.x + params.phi));
    const double n_new = params.gamma * s.n + kick +
                         rng.truncated_gaussian(noise.variance, noise.truncation);
    return {wrap_angle(s.x + params.hbar_eff * n_new), n_new};
}

std::vector<PhasePoint> evolve_ensemble(std::span<const PhasePoint> points,
                                        const MapParams& params, const NoiseSpec& noise,
                                        std::int64_t steps, std::uint64_t seed) {
    params.validate();
    noise.validate();
    if (steps < 0) throw ConfigError("evolve_ensemble: steps must be >= 0");

    std::vector<PhasePoint> out(points.begin(), points.end());
    const std::int64_t count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < count; ++idx) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(idx));
        PhasePoint s = out[idx];
        for (std::int64_t t = 0; t < steps; ++t) {
            s = noise.enabled() ? step_thermal(s, params, noise, rng) : step(s, params);
        }
        out[idx] = s;
    }
    return out;
}

double ratchet_current(std::span<const PhasePoint> points, double hbar_eff) {
    if (points.empty()) throw std::invalid_argument("ratchet_current: empty ensemble");
    double sum = 0.0;
    for (const auto& s : points) sum += s.p(hbar_eff);
    return sum / static_cast<double>(points.size());
}

PhaseField attractor_histogram(const MapParams& params, const NoiseSpec& noise,
                               const UlamGrid& grid, std::int64_t transient,
                               std::int64_t samples, std::uint64_t seed) {
    params.validate();
    noise.validate();
    if (transient <= 0) throw ConfigError("attractor_histogram: transient must be > 0");
    if (samples <= 0) throw ConfigError("attractor_histogram: samples must be > 0");

    const int M = grid.M();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(grid.size()), 0);
    std::int64_t inside = 0;

#pragma omp parallel
    {
        std::vector<std::int64_t> local(counts.size(), 0);
        std::int64_t local_inside = 0;
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < samples; ++idx) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(idx));
            PhasePoint s{rng.uniform(0.0, kTwoPi),
                         rng.uniform(-grid.p_max(), grid.p_max()) / params.hbar_eff};
            for (std::int64_t t = 0; t < transient; ++t) {
                s = noise.enabled() ? step_thermal(s, params, noise, rng) : step(s, params);
            }
            const int i = grid.x_index(s.x);
            const int j = grid.p_index(s.p(params.hbar_eff));
            if (i >= 0 && j >= 0) {
                ++local[static_cast<std::size_t>(grid.flat(i, j))];
                ++local_inside;
            }
        }
#pragma omp critical
        {
            for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += local[c];
            inside += local_inside;
        }
    }

    if (inside == 0) throw NumericsError("attractor_histogram: window too small");

    PhaseField field(M, M, grid.window(), PhaseField::Provenance::Histogram);
    field.expect_real = true;
    const double norm = 1.0 / static_cast<double>(inside);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < M; ++i)
            field.at(j, i) = norm * static_cast<double>(counts[static_cast<std::size_t>(grid.flat(i, j))]);
    return field;
}

double window_invariance_reach(const MapParams& params, const NoiseSpec& noise, double p_max) {
    return params.gamma * p_max + params.K() * (1.0 + params.a) +
           noise.truncation * std::sqrt(noise.variance) * params.hbar_eff;
}

}  // namespace ratchet
