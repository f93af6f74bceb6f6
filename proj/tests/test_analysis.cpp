#include <doctest.h>

#include <cmath>

#include "ratchet/analysis.hpp"
#include "ratchet/rng.hpp"
#include "ratchet/wigner.hpp"

using namespace ratchet;

namespace {
SpectralSet make_set(std::initializer_list<Complex> lambdas) {
    SpectralSet set;
    for (Complex l : lambdas) {
        EigenPair p;
        p.lambda = l;
        set.pairs.push_back(std::move(p));
    }
    set.requested = static_cast<int>(set.pairs.size());
    return set;
}
}  // namespace

TEST_CASE("equilibration times reproduce the reference values") {
    CHECK(equilibration_time(Complex(0.840, 0.0)) == doctest::Approx(26.4).epsilon(0.002));
    CHECK(equilibration_time(Complex(0.818, 0.0)) == doctest::Approx(22.9).epsilon(0.002));
    CHECK(equilibration_time(Complex(0.900, 0.0)) == doctest::Approx(43.7).epsilon(0.002));
    CHECK(equilibration_time(Complex(0.01, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("equilibration time domain errors") {
    CHECK_THROWS_AS(equilibration_time(Complex(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(equilibration_time(Complex(1.2, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(equilibration_time(Complex(0.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(equilibration_time(Complex(0.5, 0.0), 1.5), std::invalid_argument);
}

TEST_CASE("equilibration time is monotone in |lambda1|") {
    double prev = 0.0;
    for (double mod : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double t = equilibration_time(Complex(mod, 0.0));
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("identical spectra compare at distance zero") {
    const SpectralSet set = make_set({1.0, Complex(0.5, 0.4), Complex(0.5, -0.4), 0.3});
    const SpectrumPairing pairing = compare_spectra(set, set, 4);
    CHECK(pairing.max_distance == 0.0);
    CHECK(pairing.mean_distance == 0.0);
}

TEST_CASE("swapped conjugate partners are canonicalized before pairing") {
    const SpectralSet a = make_set({1.0, Complex(0.5, 0.4), Complex(0.5, -0.4)});
    // same spectrum with the pair stored in the opposite order and a tiny
    // modulus asymmetry
    const SpectralSet b = make_set({1.0, Complex(0.5 - 1e-9, -0.4), Complex(0.5, 0.4)});
    const SpectrumPairing pairing = compare_spectra(a, b, 3);
    CHECK(pairing.max_distance <= 1e-8);
}

TEST_CASE("reference eigenvalue pair distance") {
    const SpectralSet classical = make_set({1.0, 0.727, Complex(0.388, 0.500), Complex(0.388, -0.500)});
    const SpectralSet quantum = make_set({1.0, 0.701, Complex(0.396, 0.501), Complex(0.396, -0.501)});
    const SpectrumPairing pairing = compare_spectra(classical, quantum, 4);
    CHECK(pairing.entries[2].distance == doctest::Approx(0.00806).epsilon(0.01));
    CHECK(pairing.entries[3].distance == doctest::Approx(0.00806).epsilon(0.01));
}

TEST_CASE("insufficient entries are refused") {
    const SpectralSet set = make_set({1.0, 0.5});
    CHECK_THROWS_AS(compare_spectra(set, set, 3), std::invalid_argument);
}

TEST_CASE("pairing distance is symmetric") {
    const SpectralSet a = make_set({1.0, 0.8, Complex(0.3, 0.2), Complex(0.3, -0.2)});
    const SpectralSet b = make_set({0.99, 0.75, Complex(0.35, 0.18), Complex(0.35, -0.18)});
    const SpectrumPairing ab = compare_spectra(a, b, 4);
    const SpectrumPairing ba = compare_spectra(b, a, 4);
    CHECK(ab.max_distance == doctest::Approx(ba.max_distance));
    CHECK(ab.mean_distance == doctest::Approx(ba.mean_distance));
}

TEST_CASE("overlap table rows stay in [0,1] and follow the pairing") {
    const int n = 6;
    Window w{0, kTwoPi, -1, 1};
    Rng rng(7);
    auto field = [&](std::uint64_t seed) {
        PhaseField f(n, n, w, PhaseField::Provenance::ClassicalEigenvector);
        Rng local(seed);
        for (auto& v : f.values) v = Complex(local.uniform() - 0.5, local.uniform() - 0.5);
        return f;
    };

    const SpectralSet cl = make_set({1.0, 0.8, 0.5});
    const SpectralSet qm = make_set({1.0, 0.75, 0.45});
    std::vector<PhaseField> cl_fields{field(1), field(2), field(3)};
    std::vector<PhaseField> qm_fields{field(4), field(5), field(6)};

    const OverlapTable table = overlap_table(cl, cl_fields, qm, qm_fields, 3);
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
        CHECK(row.overlap_modulus >= 0.0);
        CHECK(row.overlap_modulus <= 1.0 + 1e-12);
    }

    // rescaling or rephasing any eigenvector leaves |O| unchanged
    for (auto& v : qm_fields[1].values) v *= Complex(0.0, -3.3);
    const OverlapTable rescaled = overlap_table(cl, cl_fields, qm, qm_fields, 3);
    CHECK(rescaled.rows[1].overlap_modulus ==
          doctest::Approx(table.rows[1].overlap_modulus).epsilon(1e-12));

    CHECK_THROWS_AS(overlap_table(cl, cl_fields, qm, qm_fields, 5), std::invalid_argument);
}

TEST_CASE("scenario summary") {
    const SpectralSet set = make_set({1.0, Complex(0.84, 0.0), 0.3});
    const ScenarioResult r = summarize_spectrum("B1", "PF_thermal", set);
    CHECK(r.gap == doctest::Approx(0.16));
    REQUIRE(r.t_lambda1.has_value());
    CHECK(*r.t_lambda1 == doctest::Approx(26.4).epsilon(0.002));
}
