#include "ratchet/hilbert.hpp"

#include <fftw3.h>

#include <cmath>

namespace ratchet {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

HilbertSpec build_hilbert(double hbar_eff, double p_max) {
    if (!(hbar_eff > 0.0)) throw ConfigError("build_hilbert: hbar_eff must be > 0");
    if (!(p_max > 0.0)) throw ConfigError("build_hilbert: p_max must be > 0");
    const double raw = 2.0 * p_max / hbar_eff;
    if (raw < 3.0) throw ConfigError("build_hilbert: window/hbar too small (N < 3)");
    const int N = 2 * static_cast<int>(std::llround((raw - 1.0) / 2.0)) + 1;
    return HilbertSpec{N, hbar_eff};
}

bool DensityMatrix::is_physical_state(double* min_eigenvalue) const {
    const double scale = std::max(1.0, m.norm());
    if (hermiticity_defect() > 1e-12 * scale) return false;
    if (std::abs(trace() - 1.0) > 1e-12) return false;
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(0.5 * (m + m.adjoint()),
                                                   Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eigenvalue) *min_eigenvalue = min_eig;
    return min_eig >= -1e-10;
}

DensityMatrix maximally_mixed(const HilbertSpec& spec) {
    DensityMatrix rho;
    rho.m = MatrixXc::Identity(spec.N, spec.N) / static_cast<double>(spec.N);
    rho.basis = Basis::Momentum;
    return rho;
}

double momentum_expectation(const HilbertSpec& spec, const MatrixXc& rho_momentum) {
    double num = 0.0, den = 0.0;
    for (int row = 0; row < spec.N; ++row) {
        const double pop = rho_momentum(row, row).real();
        num += spec.momentum_of_row(row) * pop;
        den += pop;
    }
    return num / den;
}

VectorXc kick_unitary(const HilbertSpec& spec, const MapParams& params) {
    params.validate();
    VectorXc u(spec.N);
    for (int j = 0; j < spec.N; ++j) {
        const double x = spec.position(j);
        const double v = params.k * (std::cos(x) + 0.5 * params.a * std::cos(2.0 * x + params.phi));
        u[j] = std::polar(1.0, -v);
    }
    return u;
}

struct FourierTransformer::Plans {
    fftw_plan col_fwd = nullptr;
    fftw_plan col_bwd = nullptr;
    fftw_plan row_fwd = nullptr;
    fftw_plan row_bwd = nullptr;

    ~Plans() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (col_fwd) fftw_destroy_plan(col_fwd);
        if (col_bwd) fftw_destroy_plan(col_bwd);
        if (row_fwd) fftw_destroy_plan(row_fwd);
        if (row_bwd) fftw_destroy_plan(row_bwd);
    }
};

FourierTransformer::FourierTransformer(int N) : N_(N), plans_(std::make_unique<Plans>()) {
    if (N < 1 || N % 2 == 0) throw ConfigError("FourierTransformer: N must be odd and positive");

    std::vector<Complex> scratch(static_cast<std::size_t>(N) * N);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int n[1] = {N};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    // column-major storage: columns are contiguous (stride 1, dist N),
    // rows are strided (stride N, dist 1)
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plans_->col_fwd = fftw_plan_many_dft(1, n, N, buf, nullptr, 1, N, buf, nullptr, 1, N,
                                         FFTW_FORWARD, flags);
    plans_->col_bwd = fftw_plan_many_dft(1, n, N, buf, nullptr, 1, N, buf, nullptr, 1, N,
                                         FFTW_BACKWARD, flags);
    plans_->row_fwd = fftw_plan_many_dft(1, n, N, buf, nullptr, N, 1, buf, nullptr, N, 1,
                                         FFTW_FORWARD, flags);
    plans_->row_bwd = fftw_plan_many_dft(1, n, N, buf, nullptr, N, 1, buf, nullptr, N, 1,
                                         FFTW_BACKWARD, flags);

    const int L = (N - 1) / 2;
    row_phase_.resize(N);
    for (int j = 0; j < N; ++j)
        row_phase_[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) * L / N);
}

FourierTransformer::~FourierTransformer() = default;

void FourierTransformer::transform(MatrixXc& rho, bool to_position) const {
    if (rho.rows() != N_ || rho.cols() != N_)
        throw std::invalid_argument("FourierTransformer: dimension mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(rho.data());
    const double inv_n = 1.0 / static_cast<double>(N_);

    if (to_position) {
        // rho_pos = W rho W^dag
        fftw_execute_dft(plans_->col_bwd, buf, buf);
        for (int j = 0; j < N_; ++j) rho.row(j) *= row_phase_[j];
        fftw_execute_dft(plans_->row_fwd, buf, buf);
        for (int k = 0; k < N_; ++k) rho.col(k) *= std::conj(row_phase_[k]) * inv_n;
    } else {
        // rho_mom = W^dag rho W
        for (int j = 0; j < N_; ++j) rho.row(j) *= std::conj(row_phase_[j]);
        fftw_execute_dft(plans_->col_fwd, buf, buf);
        for (int k = 0; k < N_; ++k) rho.col(k) *= row_phase_[k];
        fftw_execute_dft(plans_->row_bwd, buf, buf);
        rho *= inv_n;
    }
}

MatrixXc FourierTransformer::to_position(const MatrixXc& rho_momentum) const {
    MatrixXc out = rho_momentum;
    transform(out, true);
    return out;
}

MatrixXc FourierTransformer::to_momentum(const MatrixXc& rho_position) const {
    MatrixXc out = rho_position;
    transform(out, false);
    return out;
}

DensityMatrix FourierTransformer::to_position(const DensityMatrix& rho) const {
    if (rho.basis != Basis::Momentum)
        throw std::invalid_argument("to_position: input must be in the momentum basis");
    DensityMatrix out;
    out.m = to_position(rho.m);
    out.basis = Basis::Position;
    out.eigenvalue = rho.eigenvalue;
    return out;
}

DensityMatrix FourierTransformer::to_momentum(const DensityMatrix& rho) const {
    if (rho.basis != Basis::Position)
        throw std::invalid_argument("to_momentum: input must be in the position basis");
    DensityMatrix out;
    out.m = to_momentum(rho.m);
    out.basis = Basis::Momentum;
    out.eigenvalue = rho.eigenvalue;
    return out;
}

MatrixXc FourierTransformer::dft_matrix() const {
    MatrixXc w(N_, N_);
    const int L = (N_ - 1) / 2;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N_));
    for (int j = 0; j < N_; ++j)
        for (int col = 0; col < N_; ++col)
            w(j, col) = inv_sqrt_n * std::polar(1.0, kTwoPi * j * (col - L) / N_);
    return w;
}

}  // namespace ratchet
