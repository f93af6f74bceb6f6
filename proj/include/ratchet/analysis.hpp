#ifndef RATCHET_ANALYSIS_HPP
#define RATCHET_ANALYSIS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratchet/arnoldi.hpp"
#include "ratchet/phase_space.hpp"

namespace ratchet {

/// Steps until the slowest non-invariant mode has decayed to `threshold`,
/// ln(threshold) / ln|lambda1|. Requires 0 < |lambda1| < 1.
double equilibration_time(Complex lambda1, double threshold = 0.01);

struct SpectrumPairing {
    struct Entry {
        Complex classical;
        Complex quantum;
        double distance = 0.0;
    };
    std::vector<Entry> entries;
    double max_distance = 0.0;
    double mean_distance = 0.0;
};

/// Pair the leading `count` eigenvalues of both spectra after canonical
/// reordering (|lambda| descending, conjugate partners +Im first) and report
/// per-pair distances.
SpectrumPairing compare_spectra(const SpectralSet& classical, const SpectralSet& quantum,
                                int count);

struct OverlapTable {
    struct Row {
        int index = 0;
        Complex lambda_classical;
        Complex lambda_quantum;
        double overlap_modulus = 0.0;
    };
    std::vector<Row> rows;
};

/// |O| between phase-fixed classical eigenvector fields and quantum Wigner
/// fields for eigenvector pairs 0..depth-1, paired as in compare_spectra.
OverlapTable overlap_table(const SpectralSet& classical, std::span<const PhaseField> classical_fields,
                           const SpectralSet& quantum, std::span<const PhaseField> quantum_fields,
                           int depth = 5);

/// Summary derived from one operator's spectrum.
struct ScenarioResult {
    std::string scenario;
    std::string operator_kind;  // PF | PF_thermal | QM
    Complex lambda0;
    Complex lambda1;
    double gap = 0.0;
    std::optional<double> t_lambda1;
};

ScenarioResult summarize_spectrum(const std::string& scenario, const std::string& operator_kind,
                                  const SpectralSet& set);

/// Eigenvalues re-sorted by the canonical spectral order.
std::vector<Complex> canonical_eigenvalues(const SpectralSet& set);

/// Largest-modulus eigenvalue outside the permanent band |lambda| >= 1 - tol
/// (periodic attractors pin cycling modes onto or just under the unit
/// circle next to lambda0; the decay rates of interest start below them).
Complex leading_decay_mode(const SpectralSet& set, double unimodular_tol = 1e-4);

}  // namespace ratchet

#endif
