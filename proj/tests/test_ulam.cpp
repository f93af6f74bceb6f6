#include <doctest.h>

#include <cmath>
#include <complex>

#include "ratchet/ulam.hpp"

using namespace ratchet;

TEST_CASE("grid construction") {
    const UlamGrid g(400, 30.0);
    CHECK(g.heff_pf() == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(g.size() == 160000);

    const UlamGrid tiny(2, 1.0);
    CHECK(tiny.size() == 4);
    CHECK(tiny.dx() == doctest::Approx(M_PI));
    CHECK(tiny.dp() == doctest::Approx(1.0));

    const UlamGrid m243(243, 30.0);
    CHECK(m243.heff_pf() == doctest::Approx(0.247).epsilon(2e-3));

    CHECK_THROWS_AS(UlamGrid(1, 30.0), ConfigError);
    CHECK_THROWS_AS(UlamGrid(10, 0.0), ConfigError);
    CHECK_THROWS_AS(UlamGrid(10, -2.0), ConfigError);
}

TEST_CASE("grid indexing is a bijection") {
    const UlamGrid g(17, 5.0);
    for (int j = 0; j < g.M(); ++j)
        for (int i = 0; i < g.M(); ++i) {
            const auto flat = g.flat(i, j);
            CHECK(flat == j * 17 + i);
            CHECK(g.x_index(g.x_center(i)) == i);
            CHECK(g.p_index(g.p_center(j)) == j);
        }
    CHECK(g.p_index(5.0) == 16);   // closed upper boundary
    CHECK(g.p_index(5.1) == -1);
    CHECK(g.x_index(-0.1) == -1);
}

TEST_CASE("one-step collapse: k=0, gamma=0 concentrates all columns at p=0") {
    const UlamGrid g(20, 10.0);
    const MapParams params{0.0, 0.0, 0.5, M_PI / 2, 0.15};
    const TransferMatrix S = build_transfer_matrix(g, params, NoiseSpec{}, 50, 1);

    // n' = 0 exactly, so every destination is in momentum row M/2 (p = +0)
    for (std::int64_t j = 0; j < g.size(); ++j) {
        for (std::int64_t t = S.col_ptr[j]; t < S.col_ptr[j + 1]; ++t) {
            const int dest_j = static_cast<int>(S.row_idx[t] / g.M());
            CHECK(dest_j == g.M() / 2);
        }
        CHECK(S.column_sum(j) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("columns are stochastic with thermal noise") {
    const UlamGrid g(40, 30.0);
    const MapParams params{8.2, 0.2, 0.5, M_PI / 2, 0.15};
    const TransferMatrix S = build_transfer_matrix(g, params, NoiseSpec{0.15, 8.0}, 200, 3);
    for (std::int64_t j = 0; j < g.size(); ++j) {
        CHECK(std::abs(S.column_sum(j) - 1.0) <= 1e-12);
        for (std::int64_t t = S.col_ptr[j]; t < S.col_ptr[j + 1]; ++t) {
            CHECK(S.values[t] >= 0.0);
            CHECK(S.values[t] <= 1.0);
        }
    }
}

TEST_CASE("window escape is refused, not renormalized") {
    // gamma=1 with a kick: one step pushes samples past a tiny p_max
    const UlamGrid g(10, 1.0);
    const MapParams params{8.2, 1.0, 0.5, M_PI / 2, 0.15};
    CHECK_THROWS_AS(build_transfer_matrix(g, params, NoiseSpec{}, 20, 1), ConfigError);
}

TEST_CASE("apply matches a dense matvec oracle") {
    const UlamGrid g(2, 1.0);
    const MapParams params{1.1, 0.3, 0.5, M_PI / 2, 0.15};
    const TransferMatrix S = build_transfer_matrix(g, params, NoiseSpec{0.01, 8.0}, 64, 11);

    // dense oracle
    double dense[4][4] = {};
    for (int j = 0; j < 4; ++j)
        for (std::int64_t t = S.col_ptr[j]; t < S.col_ptr[j + 1]; ++t)
            dense[S.row_idx[t]][j] = S.values[t];

    const std::vector<double> v{0.1, 0.4, 0.25, 0.25};
    const auto w = apply(S, v);
    for (int r = 0; r < 4; ++r) {
        double expect = 0.0;
        for (int j = 0; j < 4; ++j) expect += dense[r][j] * v[j];
        CHECK(w[r] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("apply conserves mass of nonnegative densities") {
    const UlamGrid g(30, 30.0);
    const MapParams params{8.2, 0.2, 0.5, M_PI / 2, 0.15};
    const TransferMatrix S = build_transfer_matrix(g, params, NoiseSpec{0.15, 8.0}, 100, 17);

    std::vector<double> v(static_cast<std::size_t>(g.size()));
    Rng rng(19);
    double total = 0.0;
    for (auto& x : v) {
        x = rng.uniform();
        total += x;
    }
    const auto w = apply(S, v);
    double total_w = 0.0;
    for (double x : w) total_w += x;
    CHECK(total_w == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("apply rejects mismatched lengths") {
    const UlamGrid g(4, 2.0);
    const MapParams params{0.1, 0.4, 0.5, M_PI / 2, 0.15};
    const TransferMatrix S = build_transfer_matrix(g, params, NoiseSpec{}, 10, 1);
    const std::vector<double> bad(7, 0.0);
    CHECK_THROWS_AS(apply(S, bad), std::invalid_argument);
}

TEST_CASE("builds are bitwise reproducible for a fixed seed") {
    const UlamGrid g(24, 30.0);
    const MapParams params{8.2, 0.2, 0.5, M_PI / 2, 0.15};
    const NoiseSpec noise{0.15, 8.0};
    const TransferMatrix a = build_transfer_matrix(g, params, noise, 150, 23);
    const TransferMatrix b = build_transfer_matrix(g, params, noise, 150, 23);
    REQUIRE(a.values.size() == b.values.size());
    CHECK(a.col_ptr == b.col_ptr);
    CHECK(a.row_idx == b.row_idx);
    CHECK(a.values == b.values);

    const TransferMatrix c = build_transfer_matrix(g, params, noise, 150, 24);
    CHECK(a.values != c.values);
}

TEST_CASE("cell_vector_to_field round-trips the layout") {
    const UlamGrid g(3, 1.0);
    std::vector<std::complex<double>> v(9);
    for (int i = 0; i < 9; ++i) v[static_cast<std::size_t>(i)] = {static_cast<double>(i), 0.0};
    const PhaseField f = cell_vector_to_field(g, v, PhaseField::Provenance::ClassicalEigenvector);
    // flat = j*M + i -> row j, column i
    CHECK(f.at(2, 1).real() == doctest::Approx(7.0));
    CHECK(f.at(0, 0).real() == doctest::Approx(0.0));
}
