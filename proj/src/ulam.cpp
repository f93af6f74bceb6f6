#include "ratchet/ulam.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <omp.h>

namespace ratchet {

void TransferMatrix::build_row_mirror() {
    const std::int64_t dim = dimension();
    const std::int64_t count = nnz();
    csr_row_ptr.assign(static_cast<std::size_t>(dim) + 1, 0);
    csr_col_idx.resize(static_cast<std::size_t>(count));
    csr_values.resize(static_cast<std::size_t>(count));

    for (std::int64_t t = 0; t < count; ++t) ++csr_row_ptr[static_cast<std::size_t>(row_idx[t]) + 1];
    for (std::int64_t r = 0; r < dim; ++r) csr_row_ptr[r + 1] += csr_row_ptr[r];

    std::vector<std::int64_t> cursor(csr_row_ptr.begin(), csr_row_ptr.end() - 1);
    for (std::int64_t j = 0; j < dim; ++j) {
        for (std::int64_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
            const std::int64_t pos = cursor[row_idx[t]]++;
            csr_col_idx[pos] = static_cast<std::int32_t>(j);
            csr_values[pos] = values[t];
        }
    }
}

TransferMatrix build_transfer_matrix(const UlamGrid& grid, const MapParams& params,
                                     const NoiseSpec& noise, std::int64_t n_tr,
                                     std::uint64_t seed) {
    params.validate();
    noise.validate();
    if (n_tr < 1) throw ConfigError("build_transfer_matrix: n_tr must be >= 1");
    if (window_invariance_reach(params, noise, grid.p_max()) > grid.p_max()) {
        throw ConfigError(
            "build_transfer_matrix: window invariance bound violated; increase p_max");
    }

    const int M = grid.M();
    const std::int64_t dim = grid.size();
    const double inv_ntr = 1.0 / static_cast<double>(n_tr);

    // per-column destination lists, filled independently
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> columns(
        static_cast<std::size_t>(dim));
    std::atomic<bool> escaped{false};

#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t cell = 0; cell < dim; ++cell) {
        if (escaped.load(std::memory_order_relaxed)) continue;
        const int i = static_cast<int>(cell % M);
        const int j = static_cast<int>(cell / M);
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(cell));

        std::vector<std::int32_t> dests;
        dests.reserve(static_cast<std::size_t>(n_tr));
        for (std::int64_t s = 0; s < n_tr; ++s) {
            PhasePoint pt{rng.uniform(grid.x_lo(i), grid.x_lo(i) + grid.dx()),
                          rng.uniform(grid.p_lo(j), grid.p_lo(j) + grid.dp()) / params.hbar_eff};
            pt = noise.enabled() ? step_thermal(pt, params, noise, rng) : step(pt, params);
            const int di = grid.x_index(pt.x);
            const int dj = grid.p_index(pt.p(params.hbar_eff));
            if (di < 0 || dj < 0) {
                escaped.store(true, std::memory_order_relaxed);
                break;
            }
            dests.push_back(static_cast<std::int32_t>(grid.flat(di, dj)));
        }
        std::sort(dests.begin(), dests.end());
        std::vector<std::pair<std::int32_t, std::int32_t>> hits;
        for (std::size_t s = 0; s < dests.size();) {
            std::size_t e = s;
            while (e < dests.size() && dests[e] == dests[s]) ++e;
            hits.emplace_back(dests[s], static_cast<std::int32_t>(e - s));
            s = e;
        }
        columns[static_cast<std::size_t>(cell)] = std::move(hits);
    }

    if (escaped.load())
        throw NumericsError("build_transfer_matrix: domain not closed; increase p_max");

    TransferMatrix S;
    S.grid = grid;
    S.params = params;
    S.noise = noise;
    S.n_tr = n_tr;
    S.seed = seed;
    S.col_ptr.resize(static_cast<std::size_t>(dim) + 1);
    S.col_ptr[0] = 0;
    for (std::int64_t c = 0; c < dim; ++c)
        S.col_ptr[c + 1] = S.col_ptr[c] + static_cast<std::int64_t>(columns[c].size());
    S.row_idx.resize(static_cast<std::size_t>(S.col_ptr[dim]));
    S.values.resize(static_cast<std::size_t>(S.col_ptr[dim]));

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < dim; ++c) {
        std::int64_t pos = S.col_ptr[c];
        for (const auto& [dest, count] : columns[c]) {
            S.row_idx[pos] = dest;
            S.values[pos] = static_cast<double>(count) * inv_ntr;
            ++pos;
        }
    }

    S.build_row_mirror();
    return S;
}

std::vector<double> apply(const TransferMatrix& S, std::span<const double> v) {
    const std::int64_t dim = S.dimension();
    if (static_cast<std::int64_t>(v.size()) != dim)
        throw std::invalid_argument("TransferMatrix apply: dimension mismatch");
    std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (std::int64_t t = S.csr_row_ptr[r]; t < S.csr_row_ptr[r + 1]; ++t)
            acc += S.csr_values[t] * v[S.csr_col_idx[t]];
        w[r] = acc;
    }
    return w;
}

void apply(const TransferMatrix& S, const std::complex<double>* v, std::complex<double>* w) {
    const std::int64_t dim = S.dimension();
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < dim; ++r) {
        std::complex<double> acc{0.0, 0.0};
        for (std::int64_t t = S.csr_row_ptr[r]; t < S.csr_row_ptr[r + 1]; ++t)
            acc += S.csr_values[t] * v[S.csr_col_idx[t]];
        w[r] = acc;
    }
}

PhaseField cell_vector_to_field(const UlamGrid& grid, std::span<const std::complex<double>> v,
                                PhaseField::Provenance provenance) {
    if (static_cast<std::int64_t>(v.size()) != grid.size())
        throw std::invalid_argument("cell_vector_to_field: length mismatch");
    PhaseField field(grid.M(), grid.M(), grid.window(), provenance);
    std::copy(v.begin(), v.end(), field.values.begin());
    return field;
}

}  // namespace ratchet
