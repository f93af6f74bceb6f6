#ifndef RATCHET_LINDBLAD_HPP
#define RATCHET_LINDBLAD_HPP

#include <memory>
#include <vector>

#include "ratchet/hilbert.hpp"

namespace ratchet {

/// One-period propagators of the momentum-damping dissipator, one dense
/// block per diagonal offset d = n - m >= 0 of the density matrix in the
/// momentum basis (negative offsets follow by complex conjugation).
/// blocks[d] has size (N-d) x (N-d) and acts on the elements rho_{n, n-d}
/// ordered by ascending n.
struct DissipativeBlocks {
    int N = 0;
    double gamma = 0.0;
    double hbar_eff = 0.0;
    std::vector<MatrixXc> blocks;

    /// g = sqrt(-ln gamma), the Lindblad coupling.
    double g() const { return std::sqrt(-std::log(gamma)); }
};

/// Dissipator restricted to offset d (any sign): diagonal damping plus the
/// birth-death feeding along the offset diagonal.
MatrixXc offset_generator(const HilbertSpec& spec, double gamma, int d);

/// Exact per-offset propagators exp(offset_generator * 1), calibrated so one
/// period contracts <n> by exactly gamma. gamma must lie strictly inside
/// (0, 1).
DissipativeBlocks build_dissipative_blocks(const HilbertSpec& spec, double gamma);

/// The one-period quantum channel rho -> e^Lambda rho: the dissipative
/// propagator, then the position-basis kick phases, then the kinetic
/// rotation exp(-i hbar_eff n^2 / 2). This ordering makes the stroboscopic
/// section coincide with the classical map's (momentum after kick and
/// damping, position after the drift). Immutable after construction; apply
/// is reentrant.
struct SuperPropagator {
    HilbertSpec spec;
    MapParams params;
    VectorXc kick;      ///< diagonal kick phases in the position basis
    VectorXc rotation;  ///< kinetic phases exp(-i hbar n^2 / 2), momentum order
    DissipativeBlocks blocks;
    std::shared_ptr<const FourierTransformer> dft;

    std::int64_t dimension() const { return static_cast<std::int64_t>(spec.N) * spec.N; }
};

SuperPropagator build_superpropagator(const HilbertSpec& spec, const MapParams& params);

/// One period applied to a momentum-basis matrix.
MatrixXc apply_superoperator(const SuperPropagator& prop, const MatrixXc& rho_momentum);
DensityMatrix apply_superoperator(const SuperPropagator& prop, const DensityMatrix& rho);

/// Same channel on a column-major flattened N^2 vector (eigensolver path).
void apply_superoperator_vec(const SuperPropagator& prop, const Complex* in, Complex* out);

struct ChoiReport {
    bool pass = false;
    double min_eigenvalue = 0.0;
};

/// Builds the N^2 x N^2 Choi matrix column by column through the channel and
/// reports its minimal eigenvalue. Guarded to N <= 15.
ChoiReport choi_positivity_check(const SuperPropagator& prop, double tol = 1e-8);

}  // namespace ratchet

#endif
