#ifndef RATCHET_WIGNER_HPP
#define RATCHET_WIGNER_HPP

#include "ratchet/hilbert.hpp"
#include "ratchet/phase_space.hpp"

namespace ratchet {

/// Hard-disk cutoff in chord space. radius is the maximum retained chord
/// length in grid-cell units; chords of length >= radius are removed
/// (open disk). radius = N keeps every chord.
struct ChordCutoff {
    double radius = 0.0;

    void validate(int N) const {
        if (!(radius > 0.0) || radius > static_cast<double>(N))
            throw ConfigError("ChordCutoff: radius must lie in (0, N]");
    }
};

/// Weyl-Wigner symbol of a position-basis operator on the redundant 2N x 2N
/// half-integer grid. Rows index momentum, columns position. Linear in rho.
/// The symbol of a Hermitian operator is real; summing the integer-parity
/// subgrid gives N * Tr(rho).
PhaseField weyl_symbol(const DensityMatrix& rho_position, double hbar_eff);

/// Chord-space filtering: symplectic Fourier transform, removal of chords
/// of length >= cutoff.radius, inverse transform and downsampling to the
/// N x N integer grid. Output rows are ordered by ascending physical
/// momentum. Each chord class appears four times on the doubled lattice at
/// mutual index distance N; radius N/4 keeps exactly one (minimal-image)
/// representative per class, which removes the ghost replicas while
/// retaining every chord up to a quarter torus.
PhaseField chord_filter(const PhaseField& symbol, const ChordCutoff& cutoff);

/// Phase that makes a matrix payload as Hermitian as possible
/// (theta = -arg(tr V^2) / 2, sign fixed deterministically).
Complex hermitizing_phase(const MatrixXc& v);

/// Phase that makes a field payload as real as possible.
Complex realizing_phase(const PhaseField& field);

/// Phase that rotates the maximal-modulus entry onto the positive real axis.
Complex positivizing_phase(const PhaseField& field);

/// Fix the global phase of an eigenvector payload: real eigenvalues get the
/// hermitizing/realizing rotation, complex ones the max-entry rule applied
/// to the (symbol of the) payload.
void fix_phase(MatrixXc& v, Complex lambda);
void fix_phase(PhaseField& field, Complex lambda);

/// Fix a conjugate pair together: the +Im member by its own rule, the
/// partner by the phase that best matches the conjugate of the fixed member.
void fix_phase_pair(PhaseField& plus, PhaseField& minus);

/// Phase-fix a canonically ordered run of eigenvector fields: real
/// eigenvalues individually, conjugate pairs through fix_phase_pair.
void fix_phase_run(std::vector<PhaseField>& fields, const std::vector<Complex>& lambdas);

/// Normalized phase-space overlap
/// sum R1 R2* / sqrt(sum |R1|^2 sum |R2|^2). Grids and windows must match;
/// |O| <= 1 and is invariant under rescaling or rephasing of either field.
Complex overlap(const PhaseField& r1, const PhaseField& r2);

}  // namespace ratchet

#endif
