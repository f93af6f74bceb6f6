#include "ratchet/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ratchet/wigner.hpp"

namespace ratchet {

double equilibration_time(Complex lambda1, double threshold) {
    const double mod = std::abs(lambda1);
    if (!(mod > 0.0 && mod < 1.0)) throw std::invalid_argument("equilibration_time: no decay");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("equilibration_time: threshold must lie in (0,1)");
    return std::log(threshold) / std::log(mod);
}

namespace {

/// Permutation bringing set.pairs into canonical spectral order.
std::vector<int> canonical_order(const SpectralSet& set) {
    std::vector<int> idx(set.pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return spectral_less(set.pairs[static_cast<std::size_t>(a)].lambda,
                             set.pairs[static_cast<std::size_t>(b)].lambda);
    });
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const Complex la = set.pairs[static_cast<std::size_t>(idx[i])].lambda;
        const Complex lb = set.pairs[static_cast<std::size_t>(idx[i + 1])].lambda;
        const double tol = 1e-6 * std::max(1.0, std::abs(la));
        if (std::abs(la - std::conj(lb)) <= tol && la.imag() < lb.imag())
            std::swap(idx[i], idx[i + 1]);
    }
    return idx;
}

}  // namespace

std::vector<Complex> canonical_eigenvalues(const SpectralSet& set) {
    const auto idx = canonical_order(set);
    std::vector<Complex> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(set.pairs[static_cast<std::size_t>(i)].lambda);
    return out;
}

Complex leading_decay_mode(const SpectralSet& set, double unimodular_tol) {
    for (const Complex lambda : canonical_eigenvalues(set))
        if (std::abs(lambda) < 1.0 - unimodular_tol) return lambda;
    throw std::invalid_argument("leading_decay_mode: no decaying eigenvalue found");
}

SpectrumPairing compare_spectra(const SpectralSet& classical, const SpectralSet& quantum,
                                int count) {
    if (static_cast<int>(classical.pairs.size()) < count ||
        static_cast<int>(quantum.pairs.size()) < count)
        throw std::invalid_argument("compare_spectra: insufficient entries");

    const auto lc = canonical_eigenvalues(classical);
    const auto lq = canonical_eigenvalues(quantum);

    SpectrumPairing pairing;
    double sum = 0.0;
    for (int i = 0; i < count; ++i) {
        SpectrumPairing::Entry e;
        e.classical = lc[static_cast<std::size_t>(i)];
        e.quantum = lq[static_cast<std::size_t>(i)];
        e.distance = std::abs(e.classical - e.quantum);
        pairing.max_distance = std::max(pairing.max_distance, e.distance);
        sum += e.distance;
        pairing.entries.push_back(e);
    }
    pairing.mean_distance = count > 0 ? sum / count : 0.0;
    return pairing;
}

OverlapTable overlap_table(const SpectralSet& classical, std::span<const PhaseField> classical_fields,
                           const SpectralSet& quantum, std::span<const PhaseField> quantum_fields,
                           int depth) {
    if (static_cast<int>(classical_fields.size()) < depth ||
        static_cast<int>(quantum_fields.size()) < depth)
        throw std::invalid_argument("overlap_table: depth exceeds available eigenvectors");

    const auto idx_c = canonical_order(classical);
    const auto idx_q = canonical_order(quantum);

    OverlapTable table;
    for (int i = 0; i < depth; ++i) {
        const int ic = idx_c[static_cast<std::size_t>(i)];
        const int iq = idx_q[static_cast<std::size_t>(i)];
        OverlapTable::Row row;
        row.index = i;
        row.lambda_classical = classical.pairs[static_cast<std::size_t>(ic)].lambda;
        row.lambda_quantum = quantum.pairs[static_cast<std::size_t>(iq)].lambda;
        row.overlap_modulus = std::abs(overlap(classical_fields[static_cast<std::size_t>(ic)],
                                               quantum_fields[static_cast<std::size_t>(iq)]));
        table.rows.push_back(row);
    }
    return table;
}

ScenarioResult summarize_spectrum(const std::string& scenario, const std::string& operator_kind,
                                  const SpectralSet& set) {
    if (set.pairs.size() < 2)
        throw std::invalid_argument("summarize_spectrum: need at least two eigenvalues");
    const auto lambdas = canonical_eigenvalues(set);

    ScenarioResult result;
    result.scenario = scenario;
    result.operator_kind = operator_kind;
    result.lambda0 = lambdas[0];
    result.lambda1 = lambdas[1];
    result.gap = 1.0 - std::abs(result.lambda1);
    if (std::abs(result.lambda1) < 1.0 && std::abs(result.lambda1) > 0.0)
        result.t_lambda1 = equilibration_time(result.lambda1);
    return result;
}

}  // namespace ratchet
