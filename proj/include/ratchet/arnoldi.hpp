#ifndef RATCHET_ARNOLDI_HPP
#define RATCHET_ARNOLDI_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ratchet/errors.hpp"
#include "ratchet/hilbert.hpp"

namespace ratchet {

/// Matrix-free linear operator: y = A x on contiguous complex vectors.
struct LinearOperatorHandle {
    std::int64_t dimension = 0;
    std::function<void(const Complex*, Complex*)> apply;
    std::string label;
};

struct EigenPair {
    Complex lambda;
    VectorXc vec;
    double residual = 0.0;
};

/// Leading eigenpairs ordered by |lambda| descending, ties by Re then Im
/// descending (conjugate pairs end up adjacent, +Im first).
struct SpectralSet {
    std::vector<EigenPair> pairs;
    int requested = 0;
    std::string operator_label;
};

struct ArnoldiOptions {
    int count = 100;
    int subspace = 300;
    double tol = 1e-8;
    int max_restarts = 300;
    std::uint64_t seed = 1;
};

/// Ordering used everywhere a spectrum is sorted or paired.
bool spectral_less(const Complex& a, const Complex& b);

/// Sort by spectral_less, then make conjugate partners (pairing tolerance
/// 1e-6) adjacent with the +Im member first.
void canonicalize_spectrum_order(std::vector<Complex>& lambdas);

/// `count` largest-modulus eigenpairs via Arnoldi iteration with thick
/// (Krylov-Schur) restarts. May return count + 1 pairs when the cut would
/// split a conjugate pair. Deterministic for a fixed seed. Throws
/// ArnoldiNotConverged carrying the converged subset when max_restarts is
/// exhausted.
SpectralSet leading_spectrum(const LinearOperatorHandle& op, const ArnoldiOptions& options);

struct ArnoldiNotConverged : NumericsError {
    ArnoldiNotConverged(const std::string& msg, SpectralSet converged)
        : NumericsError(msg), partial(std::move(converged)) {}
    SpectralSet partial;
};

/// ||A v - lambda v||_2 / ||v||_2.
double residual(const LinearOperatorHandle& op, Complex lambda, const VectorXc& v);

/// Largest defect of apply(alpha u + beta v) - alpha apply(u) - beta apply(v)
/// over `probes` random probes, relative to the probe scale.
double linearity_defect(const LinearOperatorHandle& op, std::uint64_t seed, int probes = 3);

}  // namespace ratchet

#endif
