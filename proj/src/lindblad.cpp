#include "ratchet/lindblad.hpp"

#include <omp.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ratchet {

MatrixXc offset_generator(const HilbertSpec& spec, double gamma, int d) {
    const int N = spec.N;
    if (std::abs(d) > N - 1) throw std::invalid_argument("offset_generator: |d| out of range");
    const double g2 = -std::log(gamma);
    const int size = N - std::abs(d);
    const int n_lo = -spec.lmax() + std::max(d, 0);

    MatrixXc gen = MatrixXc::Zero(size, size);
    for (int l = 0; l < size; ++l) {
        const int n = n_lo + l;
        const int m = n - d;
        gen(l, l) = Complex(-0.5 * g2 * (std::abs(n) + std::abs(m)), 0.0);
        // feeding from rho_{n+1, m+1} on the nonnegative side
        if (n >= 0 && m >= 0 && l + 1 < size)
            gen(l, l + 1) = g2 * std::sqrt(static_cast<double>(n + 1) * (m + 1));
        // feeding from rho_{n-1, m-1} on the nonpositive side
        if (n <= 0 && m <= 0 && l - 1 >= 0)
            gen(l, l - 1) = g2 * std::sqrt(static_cast<double>(-n + 1) * (-m + 1));
    }
    return gen;
}

DissipativeBlocks build_dissipative_blocks(const HilbertSpec& spec, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ConfigError("build_dissipative_blocks: gamma must lie strictly in (0,1)");

    DissipativeBlocks out;
    out.N = spec.N;
    out.gamma = gamma;
    out.hbar_eff = spec.hbar_eff;
    out.blocks.resize(static_cast<std::size_t>(spec.N));

#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < spec.N; ++d) {
        out.blocks[static_cast<std::size_t>(d)] = offset_generator(spec, gamma, d).exp();
    }
    return out;
}

SuperPropagator build_superpropagator(const HilbertSpec& spec, const MapParams& params) {
    params.validate();
    SuperPropagator prop;
    prop.spec = spec;
    prop.params = params;
    prop.kick = kick_unitary(spec, params);
    prop.rotation.resize(spec.N);
    for (int row = 0; row < spec.N; ++row) {
        const double n = spec.momentum_of_row(row);
        prop.rotation[row] = std::polar(1.0, -0.5 * spec.hbar_eff * n * n);
    }
    prop.blocks = build_dissipative_blocks(spec, params.gamma);
    prop.dft = std::make_shared<FourierTransformer>(spec.N);
    return prop;
}

namespace {

void apply_blocks(const DissipativeBlocks& blocks, MatrixXc& rho) {
    const int N = blocks.N;
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < N; ++d) {
        const MatrixXc& block = blocks.blocks[static_cast<std::size_t>(d)];
        const int size = N - d;
        VectorXc v(size), w(size);

        // offset +d: elements rho_{n, n-d} live at (row d+l, col l)
        for (int l = 0; l < size; ++l) v[l] = rho(d + l, l);
        w.noalias() = block * v;
        for (int l = 0; l < size; ++l) rho(d + l, l) = w[l];

        if (d == 0) continue;
        // offset -d: apply conj(block)
        for (int l = 0; l < size; ++l) v[l] = std::conj(rho(l, d + l));
        w.noalias() = block * v;
        for (int l = 0; l < size; ++l) rho(l, d + l) = std::conj(w[l]);
    }
}

}  // namespace

MatrixXc apply_superoperator(const SuperPropagator& prop, const MatrixXc& rho_momentum) {
    const int N = prop.spec.N;
    if (rho_momentum.rows() != N || rho_momentum.cols() != N)
        throw std::invalid_argument("apply_superoperator: dimension mismatch");

    // dissipation, per diagonal offset
    MatrixXc work = rho_momentum;
    apply_blocks(prop.blocks, work);

    // kick: rho -> U rho U^dag in the position basis
    work = prop.dft->to_position(work);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) work(j, k) *= prop.kick[j] * std::conj(prop.kick[k]);
    work = prop.dft->to_momentum(work);

    // kinetic rotation over the period
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) work(j, k) *= prop.rotation[j] * std::conj(prop.rotation[k]);
    return work;
}

DensityMatrix apply_superoperator(const SuperPropagator& prop, const DensityMatrix& rho) {
    if (rho.basis != Basis::Momentum)
        throw std::invalid_argument("apply_superoperator: state must be in the momentum basis");
    DensityMatrix out;
    out.m = apply_superoperator(prop, rho.m);
    out.basis = Basis::Momentum;
    return out;
}

void apply_superoperator_vec(const SuperPropagator& prop, const Complex* in, Complex* out) {
    const int N = prop.spec.N;
    Eigen::Map<const MatrixXc> rho(in, N, N);
    MatrixXc result = apply_superoperator(prop, MatrixXc(rho));
    Eigen::Map<MatrixXc>(out, N, N) = result;
}

ChoiReport choi_positivity_check(const SuperPropagator& prop, double tol) {
    const int N = prop.spec.N;
    if (N > 15)
        throw ConfigError(
            "choi_positivity_check: N > 15; the N^2 x N^2 Choi matrix would be too large. "
            "Run the check on a smaller Hilbert space.");

    const int dim = N * N;
    MatrixXc choi = MatrixXc::Zero(dim, dim);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            MatrixXc unit = MatrixXc::Zero(N, N);
            unit(i, j) = 1.0;
            const MatrixXc image = apply_superoperator(prop, unit);
            choi.block(i * N, j * N, N, N) = image;
        }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(0.5 * (choi + choi.adjoint()),
                                                   Eigen::EigenvaluesOnly);
    ChoiReport report;
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    report.pass = report.min_eigenvalue >= -tol;
    return report;
}

}  // namespace ratchet
