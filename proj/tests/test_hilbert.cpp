#include <doctest.h>

#include <cmath>

#include "ratchet/hilbert.hpp"
#include "ratchet/rng.hpp"

using namespace ratchet;

namespace {
MatrixXc random_matrix(int n, std::uint64_t seed) {
    Rng rng(seed);
    MatrixXc m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    return m;
}
}  // namespace

TEST_CASE("Hilbert dimension rounding") {
    CHECK(build_hilbert(0.15, 30.0).N == 401);
    CHECK(build_hilbert(0.082, 30.0).N == 731);
    CHECK_THROWS_AS(build_hilbert(30.0, 30.0), ConfigError);
    CHECK_THROWS_AS(build_hilbert(0.15, -1.0), ConfigError);

    const HilbertSpec spec = build_hilbert(0.15, 30.0);
    CHECK(spec.realized_p_halfwidth() == doctest::Approx(30.075));
    CHECK(spec.lmax() == 200);
    CHECK(spec.momentum_of_row(0) == -200);
    CHECK(spec.row_of_momentum(0) == 200);
}

TEST_CASE("DFT matches the dense W and is unitary") {
    const int N = 31;
    FourierTransformer dft(N);
    const MatrixXc w = dft.dft_matrix();

    CHECK((w * w.adjoint() - MatrixXc::Identity(N, N)).norm() <= 1e-12);

    const MatrixXc rho = random_matrix(N, 7);
    const MatrixXc via_fft = dft.to_position(rho);
    const MatrixXc via_dense = w * rho * w.adjoint();
    CHECK((via_fft - via_dense).norm() <= 1e-12 * via_dense.norm());

    const MatrixXc back = dft.to_momentum(via_fft);
    CHECK((back - rho).norm() <= 1e-12 * rho.norm());
}

TEST_CASE("momentum eigenstates become plane waves in position") {
    const int N = 9;
    const HilbertSpec spec{N, 0.5};
    FourierTransformer dft(N);

    MatrixXc rho = MatrixXc::Zero(N, N);
    rho(spec.row_of_momentum(1), spec.row_of_momentum(1)) = 1.0;  // |n=1><n=1|
    const MatrixXc pos = dft.to_position(rho);
    // <x_j|n=1><n=1|x_k> = exp(i (x_j - x_k)) / N
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            const Complex expect =
                std::polar(1.0 / N, spec.position(j) - spec.position(k));
            CHECK(std::abs(pos(j, k) - expect) <= 1e-12);
        }
}

TEST_CASE("kick phases") {
    const HilbertSpec spec{65, 0.15};

    const MapParams off{0.0, 0.2, 0.5, M_PI / 2, 0.15};
    const VectorXc identity = kick_unitary(spec, off);
    for (int j = 0; j < spec.N; ++j) CHECK(std::abs(identity[j] - 1.0) <= 1e-15);

    const MapParams b1{8.2, 0.2, 0.5, M_PI / 2, 0.15};
    const VectorXc u = kick_unitary(spec, b1);
    for (int j = 0; j < spec.N; ++j) CHECK(std::abs(std::abs(u[j]) - 1.0) <= 1e-15);
    // x_0 = 0: phase is exp(-i k (1 + (a/2) cos(phi))) = exp(-i 8.2)
    CHECK(std::abs(u[0] - std::polar(1.0, -8.2)) <= 1e-14);
}

TEST_CASE("physical state checks") {
    const HilbertSpec spec{5, 0.15};
    DensityMatrix rho = maximally_mixed(spec);
    double min_eig = 0.0;
    CHECK(rho.is_physical_state(&min_eig));
    CHECK(min_eig == doctest::Approx(0.2));

    rho.m(0, 1) = 5.0;  // badly non-Hermitian
    CHECK_FALSE(rho.is_physical_state());
}

TEST_CASE("momentum expectation") {
    const HilbertSpec spec{7, 0.15};
    MatrixXc rho = MatrixXc::Zero(7, 7);
    rho(spec.row_of_momentum(2), spec.row_of_momentum(2)) = 0.5;
    rho(spec.row_of_momentum(-1), spec.row_of_momentum(-1)) = 0.5;
    CHECK(momentum_expectation(spec, rho) == doctest::Approx(0.5));
}
