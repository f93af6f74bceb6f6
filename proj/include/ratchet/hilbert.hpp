#ifndef RATCHET_HILBERT_HPP
#define RATCHET_HILBERT_HPP

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <mutex>
#include <optional>

#include "ratchet/errors.hpp"
#include "ratchet/map.hpp"

namespace ratchet {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Finite momentum cylinder: N (odd) levels n in {-(N-1)/2, ..., (N-1)/2},
/// position grid x_j = 2pi j / N. Momentum and position bases are related by
/// the unitary discrete Fourier transform <x_j|n> = exp(i n x_j)/sqrt(N).
struct HilbertSpec {
    int N = 0;
    double hbar_eff = 0.0;

    int lmax() const { return (N - 1) / 2; }
    int momentum_of_row(int row) const { return row - lmax(); }
    int row_of_momentum(int n) const { return n + lmax(); }
    double position(int j) const { return kTwoPi * j / N; }

    /// Half-width of the momentum window actually covered, N*hbar_eff/2.
    double realized_p_halfwidth() const { return 0.5 * N * hbar_eff; }
};

/// N = nearest odd integer to 2*p_max/hbar_eff (ties upward). Errors when
/// the raw dimension falls below 3.
HilbertSpec build_hilbert(double hbar_eff, double p_max);

/// FFTW plan creation is not thread-safe; every plan maker must hold this.
std::mutex& fftw_planner_mutex();

enum class Basis { Momentum, Position };

/// N x N complex matrix with a basis tag. Eigenvector payloads carry the
/// eigenvalue they belong to and are exempt from the state checks.
struct DensityMatrix {
    MatrixXc m;
    Basis basis = Basis::Momentum;
    std::optional<Complex> eigenvalue;

    int N() const { return static_cast<int>(m.rows()); }
    Complex trace() const { return m.trace(); }
    double hermiticity_defect() const { return (m - m.adjoint()).norm(); }

    /// Hermitian within 1e-12, unit trace within 1e-12, and smallest
    /// eigenvalue >= -1e-10.
    bool is_physical_state(double* min_eigenvalue = nullptr) const;
};

DensityMatrix maximally_mixed(const HilbertSpec& spec);

/// <n_hat> of a momentum-basis matrix (diagonal weighted by levels).
double momentum_expectation(const HilbertSpec& spec, const MatrixXc& rho_momentum);

/// Kick phases U_jj = exp(-i k [cos x_j + (a/2) cos(2 x_j + phi)]),
/// diagonal in the position basis.
VectorXc kick_unitary(const HilbertSpec& spec, const MapParams& params);

/// FFT-backed unitary change of basis rho_pos = W rho_mom W^dag with
/// W_{jn} = exp(i n x_j)/sqrt(N). Plans are created once; apply calls are
/// reentrant.
class FourierTransformer {
  public:
    explicit FourierTransformer(int N);
    ~FourierTransformer();
    FourierTransformer(const FourierTransformer&) = delete;
    FourierTransformer& operator=(const FourierTransformer&) = delete;

    int N() const { return N_; }

    MatrixXc to_position(const MatrixXc& rho_momentum) const;
    MatrixXc to_momentum(const MatrixXc& rho_position) const;

    DensityMatrix to_position(const DensityMatrix& rho) const;
    DensityMatrix to_momentum(const DensityMatrix& rho) const;

    /// Dense W, mainly for tests.
    MatrixXc dft_matrix() const;

  private:
    struct Plans;
    void transform(MatrixXc& rho, bool to_position) const;

    int N_;
    std::unique_ptr<Plans> plans_;
    VectorXc row_phase_;  ///< exp(-2pi i j L / N), the centered-index shift
};

}  // namespace ratchet

#endif
