#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ratchet/field_io.hpp"
#include "ratchet/rng.hpp"

using namespace ratchet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ratchet_io_" + std::to_string(Rng(std::random_device{}()).next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

PhaseField random_field(int n, std::uint64_t seed) {
    PhaseField f(n, n, Window{0.0, kTwoPi, -3.0, 3.0}, PhaseField::Provenance::WignerSymbol);
    Rng rng(seed);
    for (auto& v : f.values) v = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    return f;
}

void corrupt_byte(const fs::path& path, std::size_t offset) {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(static_cast<std::streamoff>(offset));
    char c = 0;
    f.read(&c, 1);
    c = static_cast<char>(c ^ 0x40);
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(&c, 1);
}

}  // namespace

TEST_CASE("phase field round trip is bit exact") {
    TempDir dir;
    const PhaseField f = random_field(8, 3);
    const auto path = dir.path / "field.bin";
    write_field(path, f, {{"scenario", "test"}});
    const PhaseField g = read_field(path);

    CHECK(g.rows == f.rows);
    CHECK(g.cols == f.cols);
    CHECK(g.provenance == f.provenance);
    CHECK(g.window.approx_equal(f.window));
    CHECK(g.values == f.values);  // bitwise
}

TEST_CASE("corrupted payload byte is a checksum error") {
    TempDir dir;
    const auto path = dir.path / "field.bin";
    write_field(path, random_field(8, 5));
    corrupt_byte(path, 37);
    CHECK_THROWS_WITH_AS(read_field(path), doctest::Contains("checksum mismatch"), IoError);
}

TEST_CASE("truncated payload is its own error") {
    TempDir dir;
    const auto path = dir.path / "field.bin";
    write_field(path, random_field(8, 7));
    fs::resize_file(path, fs::file_size(path) - 16);
    CHECK_THROWS_WITH_AS(read_field(path), doctest::Contains("truncated payload"), IoError);
}

TEST_CASE("kind mismatch is an unknown-kind error") {
    TempDir dir;
    const auto path = dir.path / "field.bin";
    write_field(path, random_field(4, 9));
    CHECK_THROWS_WITH_AS(read_density(path), doctest::Contains("unknown kind"), IoError);
    CHECK(peek_kind(path) == "phase_field");
}

TEST_CASE("density matrix round trip keeps basis and eigenvalue") {
    TempDir dir;
    DensityMatrix rho;
    rho.m = MatrixXc::Random(6, 6);
    rho.basis = Basis::Position;
    rho.eigenvalue = Complex(0.3, -0.7);
    const auto path = dir.path / "rho.bin";
    write_density(path, rho);
    const DensityMatrix out = read_density(path);
    CHECK(out.basis == Basis::Position);
    REQUIRE(out.eigenvalue.has_value());
    CHECK(*out.eigenvalue == *rho.eigenvalue);
    CHECK(out.m == rho.m);
}

TEST_CASE("transfer matrix round trip and payload size arithmetic") {
    TempDir dir;
    const UlamGrid grid(16, 30.0);
    const MapParams params{8.2, 0.2, 0.5, 1.5707963267948966, 0.15};
    const TransferMatrix S = build_transfer_matrix(grid, params, NoiseSpec{0.15, 8.0}, 64, 13);

    const auto path = dir.path / "transfer.bin";
    write_transfer(path, S);

    // payload = col_ptr + row_idx as int64 plus float64 values
    const auto expected =
        sizeof(std::int64_t) * (static_cast<std::size_t>(S.dimension()) + 1 +
                                static_cast<std::size_t>(S.nnz())) +
        sizeof(double) * static_cast<std::size_t>(S.nnz());
    CHECK(fs::file_size(path) == expected);

    const TransferMatrix T = read_transfer(path);
    CHECK(T.col_ptr == S.col_ptr);
    CHECK(T.row_idx == S.row_idx);
    CHECK(T.values == S.values);
    CHECK(T.n_tr == S.n_tr);
    CHECK(T.seed == S.seed);
    CHECK(T.grid.M() == S.grid.M());
    CHECK(T.params.k == S.params.k);
    CHECK(T.noise.variance == S.noise.variance);
    // mirror rebuilt on load
    CHECK(T.csr_row_ptr == S.csr_row_ptr);
}

TEST_CASE("missing sidecar is an io error") {
    TempDir dir;
    const auto path = dir.path / "field.bin";
    write_field(path, random_field(4, 11));
    fs::remove(fs::path(path.string() + ".json"));
    CHECK_THROWS_AS(read_field(path), IoError);
}
