#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ratchet/field_io.hpp"
#include "ratchet/pipeline.hpp"
#include "ratchet/rng.hpp"

using namespace ratchet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ratchet_pipe_" + std::to_string(Rng(std::random_device{}()).next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

/// Small but physical configuration at a coarse grid.
ScenarioConfig small_config(const fs::path& outdir) {
    ScenarioConfig cfg = preset("B1");
    cfg.name = "small";
    cfg.k = 2.0;  // keeps the window bound closed at the coarse hbar
    cfg.hbar_eff = 1.5;  // N = 41
    cfg.hbar_eff_pf = 1.5;
    cfg.p_max = 30.0;
    cfg.n_tr = 200;
    cfg.eigen.count = 6;
    cfg.eigen.subspace = 40;
    cfg.eigen.tol = 1e-9;
    cfg.seed = 12345;
    cfg.output_dir = outdir;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("full pipeline: artifacts, invariants, determinism") {
    TempDir dir;
    ScenarioConfig cfg = small_config(dir.path / "run1");

    const std::set<Stage> all{Stage::Classical, Stage::ClassicalThermal, Stage::Quantum,
                              Stage::Wigner, Stage::Compare};
    const PipelineResult result = run_pipeline(cfg, all);

    for (const char* name :
         {"spectrum_classical.csv", "spectrum_classical_thermal.csv", "spectrum_quantum.csv",
          "compare_spectra.csv", "overlap_table.csv", "manifest.json", "eig_classical_0.bin",
          "eig_classical_thermal_0.bin", "rho_quantum_0.bin", "wigner_0.bin"}) {
        CHECK(fs::exists(result.output_dir / name));
    }

    // stochasticity: the first spectrum line is lambda0 = 1
    const SpectralSet classical = read_spectrum_csv(result.output_dir / "spectrum_classical.csv");
    CHECK(std::abs(classical.pairs[0].lambda - 1.0) <= 1e-8);
    const SpectralSet thermal =
        read_spectrum_csv(result.output_dir / "spectrum_classical_thermal.csv");
    CHECK(std::abs(thermal.pairs[0].lambda - 1.0) <= 1e-8);
    const SpectralSet quantum = read_spectrum_csv(result.output_dir / "spectrum_quantum.csv");
    CHECK(std::abs(quantum.pairs[0].lambda - 1.0) <= 1e-8);

    // matched grids: classical fields and wigner fields overlap without error
    const PhaseField cl0 = read_field(result.output_dir / "eig_classical_thermal_0.bin");
    const PhaseField qm0 = read_field(result.output_dir / "wigner_0.bin");
    CHECK(cl0.same_grid(qm0));

    // rerun into a second directory: byte-identical CSVs
    ScenarioConfig cfg2 = small_config(dir.path / "run2");
    run_pipeline(cfg2, all);
    for (const char* name : {"spectrum_classical.csv", "spectrum_classical_thermal.csv",
                             "spectrum_quantum.csv", "compare_spectra.csv", "overlap_table.csv"}) {
        CHECK(slurp(dir.path / "run1" / name) == slurp(dir.path / "run2" / name));
    }
}

TEST_CASE("missing prerequisites are reported by artifact name") {
    TempDir dir;
    ScenarioConfig cfg = small_config(dir.path / "empty");
    CHECK_THROWS_WITH_AS(run_pipeline(cfg, {Stage::Compare}),
                         doctest::Contains("spectrum_classical_thermal.csv"), ConfigError);
    CHECK_THROWS_WITH_AS(run_pipeline(cfg, {Stage::Wigner}),
                         doctest::Contains("rho_quantum_0.bin"), ConfigError);
}

TEST_CASE("staged invocations compose through the filesystem") {
    TempDir dir;
    ScenarioConfig cfg = small_config(dir.path / "staged");
    // matched grid must be used from the start for a later compare
    apply_matched_grid(cfg);

    run_pipeline(cfg, {Stage::ClassicalThermal});
    run_pipeline(cfg, {Stage::Quantum});
    run_pipeline(cfg, {Stage::Wigner});
    const PipelineResult result = run_pipeline(cfg, {Stage::Compare});
    CHECK(fs::exists(result.output_dir / "overlap_table.csv"));
}

TEST_CASE("explicit M conflicting with the matched grid is refused") {
    TempDir dir;
    ScenarioConfig cfg = small_config(dir.path / "conflict");
    cfg.M = 40;  // derived M for hbar_eff_pf = 1.5, but N = 41
    CHECK_THROWS_WITH_AS(
        run_pipeline(cfg, {Stage::ClassicalThermal, Stage::Quantum, Stage::Wigner, Stage::Compare}),
        doctest::Contains("M = N"), ConfigError);
}
