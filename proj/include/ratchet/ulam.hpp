#ifndef RATCHET_ULAM_HPP
#define RATCHET_ULAM_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ratchet/map.hpp"
#include "ratchet/phase_space.hpp"

namespace ratchet {

/// Sparse column-stochastic Ulam approximation of the Perron-Frobenius
/// operator. Column j holds the transition probabilities out of cell j;
/// entries are counts / n_tr. Compressed-column storage plus a row-major
/// mirror used for fast matrix-vector products.
struct TransferMatrix {
    UlamGrid grid;
    MapParams params;
    NoiseSpec noise;
    std::int64_t n_tr = 0;
    std::uint64_t seed = 0;

    std::vector<std::int64_t> col_ptr;  ///< size M^2 + 1
    std::vector<std::int32_t> row_idx;  ///< size nnz
    std::vector<double> values;         ///< size nnz

    // row-major mirror (built lazily, not serialized)
    std::vector<std::int64_t> csr_row_ptr;
    std::vector<std::int32_t> csr_col_idx;
    std::vector<double> csr_values;

    std::int64_t dimension() const { return grid.size(); }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

    double column_sum(std::int64_t j) const {
        double s = 0.0;
        for (std::int64_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) s += values[t];
        return s;
    }

    void build_row_mirror();
};

/// Monte Carlo Ulam construction: n_tr uniform samples per cell, one
/// (possibly thermal) map step each, destination counts binned per column.
/// Refuses parameters that break the window-invariance bound and errors if
/// any sample actually leaves the window. Deterministic for a fixed seed,
/// independent of thread count (per-cell substreams).
TransferMatrix build_transfer_matrix(const UlamGrid& grid, const MapParams& params,
                                     const NoiseSpec& noise, std::int64_t n_tr,
                                     std::uint64_t seed);

/// w = S v on real densities. Conserves the total mass of nonnegative input.
std::vector<double> apply(const TransferMatrix& S, std::span<const double> v);

/// w = S v on complex vectors (eigensolver path).
void apply(const TransferMatrix& S, const std::complex<double>* v, std::complex<double>* w);

/// Reshape a length-M^2 vector over grid cells into an M x M PhaseField
/// (rows = momentum, columns = position).
PhaseField cell_vector_to_field(const UlamGrid& grid, std::span<const std::complex<double>> v,
                                PhaseField::Provenance provenance);

}  // namespace ratchet

#endif
