#ifndef RATCHET_PHASE_SPACE_HPP
#define RATCHET_PHASE_SPACE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ratchet/errors.hpp"

namespace ratchet {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Rectangular phase-space window: x in [x_min, x_max), p in [p_min, p_max].
struct Window {
    double x_min = 0.0;
    double x_max = kTwoPi;
    double p_min = 0.0;
    double p_max = 0.0;

    bool approx_equal(const Window& o, double rtol = 1e-9) const {
        const double s = std::max({std::abs(p_min), std::abs(p_max), 1.0});
        return std::abs(x_min - o.x_min) <= rtol * kTwoPi &&
               std::abs(x_max - o.x_max) <= rtol * kTwoPi &&
               std::abs(p_min - o.p_min) <= rtol * s &&
               std::abs(p_max - o.p_max) <= rtol * s;
    }
};

/// Uniform M x M partition of the cylinder window x in [0, 2pi),
/// p in [-p_max, p_max]. Cells are addressed by (i, j) with i the position
/// index and j the momentum index; flat index = j*M + i (momentum slowest).
class UlamGrid {
  public:
    UlamGrid() = default;
    UlamGrid(int cells_per_axis, double p_halfwidth)
        : M_(cells_per_axis), p_max_(p_halfwidth) {
        if (M_ < 2) throw ConfigError("UlamGrid: M must be >= 2");
        if (!(p_max_ > 0.0)) throw ConfigError("UlamGrid: p_max must be > 0");
    }

    int M() const { return M_; }
    std::int64_t size() const { return static_cast<std::int64_t>(M_) * M_; }
    double p_max() const { return p_max_; }
    double dx() const { return kTwoPi / M_; }
    double dp() const { return 2.0 * p_max_ / M_; }

    /// Momentum cell width, the effective grid Planck constant.
    double heff_pf() const { return dp(); }

    Window window() const { return Window{0.0, kTwoPi, -p_max_, p_max_}; }

    /// Position cell index, or -1 outside [0, 2pi).
    int x_index(double x) const {
        if (x < 0.0 || x >= kTwoPi) return -1;
        int i = static_cast<int>(x / dx());
        return i >= M_ ? M_ - 1 : i;
    }

    /// Momentum cell index, or -1 outside [-p_max, p_max]. The closed upper
    /// boundary belongs to the last cell.
    int p_index(double p) const {
        if (p < -p_max_ || p > p_max_) return -1;
        int j = static_cast<int>((p + p_max_) / dp());
        return j >= M_ ? M_ - 1 : j;
    }

    std::int64_t flat(int i, int j) const { return static_cast<std::int64_t>(j) * M_ + i; }

    double x_lo(int i) const { return i * dx(); }
    double p_lo(int j) const { return -p_max_ + j * dp(); }
    double x_center(int i) const { return (i + 0.5) * dx(); }
    double p_center(int j) const { return -p_max_ + (j + 0.5) * dp(); }

  private:
    int M_ = 0;
    double p_max_ = 0.0;
};

inline UlamGrid build_grid(int M, double p_max) { return UlamGrid(M, p_max); }

/// A complex field over a phase-space window. Rows index momentum
/// (ascending), columns index position; storage is row-major.
struct PhaseField {
    enum class Provenance { ClassicalEigenvector, WignerSymbol, Histogram };

    int rows = 0;
    int cols = 0;
    Window window;
    Provenance provenance = Provenance::Histogram;
    bool expect_real = false;
    std::vector<std::complex<double>> values;

    PhaseField() = default;
    PhaseField(int r, int c, Window w, Provenance prov)
        : rows(r), cols(c), window(w), provenance(prov),
          values(static_cast<std::size_t>(r) * c) {}

    std::complex<double>& at(int r, int c) {
        return values[static_cast<std::size_t>(r) * cols + c];
    }
    const std::complex<double>& at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * cols + c];
    }

    bool same_grid(const PhaseField& o) const {
        return rows == o.rows && cols == o.cols && window.approx_equal(o.window);
    }

    /// Largest |Im| relative to the largest |Re|; fields tagged real must
    /// keep this below 1e-8.
    double imag_defect() const {
        double max_re = 0.0, max_im = 0.0;
        for (const auto& v : values) {
            max_re = std::max(max_re, std::abs(v.real()));
            max_im = std::max(max_im, std::abs(v.imag()));
        }
        return max_re > 0.0 ? max_im / max_re : max_im;
    }
};

inline const char* provenance_name(PhaseField::Provenance p) {
    switch (p) {
        case PhaseField::Provenance::ClassicalEigenvector: return "classical_eigenvector";
        case PhaseField::Provenance::WignerSymbol: return "wigner_symbol";
        case PhaseField::Provenance::Histogram: return "histogram";
    }
    return "unknown";
}

}  // namespace ratchet

#endif
