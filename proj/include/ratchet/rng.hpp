#ifndef RATCHET_RNG_HPP
#define RATCHET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ratchet {

/// Counter-based pseudo-random stream (SplitMix64). Substreams are derived
/// from a master seed and a stream index, so ensembles and matrix columns
/// can be processed in any order or in parallel and still produce bitwise
/// identical results.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream `stream` of the generator seeded with `master`.
    static Rng substream(std::uint64_t master, std::uint64_t stream) {
        return Rng(mix64(mix64(master) + stream * 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal deviate (Box-Muller, cosine branch).
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Normal deviate with the given variance, resampled until it falls
    /// inside +-truncation standard deviations.
    double truncated_gaussian(double variance, double truncation) {
        if (variance == 0.0) return 0.0;
        double z = gaussian();
        while (std::abs(z) > truncation) z = gaussian();
        return z * std::sqrt(variance);
    }

  private:
    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace ratchet

#endif
