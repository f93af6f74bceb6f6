#include "ratchet/pipeline.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include "ratchet/field_io.hpp"
#include "ratchet/lindblad.hpp"
#include "ratchet/ulam.hpp"
#include "ratchet/wigner.hpp"

namespace ratchet {

using nlohmann::json;

namespace {
constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Exclusive lock on the output directory for the run's duration.
class DirLock {
  public:
    explicit DirLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0)
            throw IoError("output directory is locked by another run: " + path_.string());
    }
    ~DirLock() {
        if (fd_ >= 0) {
            ::close(fd_);
            std::error_code ec;
            std::filesystem::remove(path_, ec);
        }
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    std::filesystem::path path_;
    int fd_ = -1;
};
}  // namespace

Stage stage_from_name(const std::string& name) {
    if (name == "classical") return Stage::Classical;
    if (name == "classical-thermal") return Stage::ClassicalThermal;
    if (name == "quantum") return Stage::Quantum;
    if (name == "wigner") return Stage::Wigner;
    if (name == "compare") return Stage::Compare;
    throw ConfigError("unknown stage '" + name + "'");
}

std::string stage_name(Stage stage) {
    switch (stage) {
        case Stage::Classical: return "classical";
        case Stage::ClassicalThermal: return "classical-thermal";
        case Stage::Quantum: return "quantum";
        case Stage::Wigner: return "wigner";
        case Stage::Compare: return "compare";
    }
    return "?";
}

int stored_eigenvector_count(const ScenarioConfig& config) {
    return std::min(config.eigen.count, 12);
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectralSet& set) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "index,re_lambda,im_lambda,modulus,residual\n";
    const auto lambdas = canonical_eigenvalues(set);
    // residuals follow the same canonical permutation
    std::vector<double> residuals(set.pairs.size());
    {
        std::vector<std::size_t> used(set.pairs.size(), 0);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            for (std::size_t j = 0; j < set.pairs.size(); ++j) {
                if (!used[j] && set.pairs[j].lambda == lambdas[i]) {
                    residuals[i] = set.pairs[j].residual;
                    used[j] = 1;
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        out << i << ',' << fmt(lambdas[i].real()) << ',' << fmt(lambdas[i].imag()) << ','
            << fmt(std::abs(lambdas[i])) << ',' << fmt(residuals[i]) << '\n';
    }
}

SpectralSet read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("missing artifact: " + path.string());
    SpectralSet set;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> cols;
        std::getline(ss, tok, ',');  // index
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        if (cols.size() < 4) throw IoError("malformed spectrum row in " + path.string());
        EigenPair p;
        p.lambda = Complex(cols[0], cols[1]);
        p.residual = cols[3];
        set.pairs.push_back(std::move(p));
    }
    set.requested = static_cast<int>(set.pairs.size());
    return set;
}

void apply_matched_grid(ScenarioConfig& config) {
    const HilbertSpec spec = build_hilbert(config.hbar_eff, config.p_max);
    const double realized = spec.realized_p_halfwidth();
    const int matched_m = spec.N;
    if (config.M != 0 && config.M != matched_m)
        throw ConfigError("comparison requires M = N = " + std::to_string(matched_m) +
                          " (got M=" + std::to_string(config.M) + ")");
    config.p_max = realized;
    config.hbar_eff_pf = 2.0 * realized / matched_m;
    config.M = matched_m;
}

namespace {

struct StageData {
    std::optional<SpectralSet> classical, thermal, quantum;
    std::vector<PhaseField> thermal_fields;   // canonical order, phase fixed
    std::vector<DensityMatrix> quantum_vecs;  // canonical order, solver phases
    std::vector<PhaseField> wigner_fields;    // canonical order, phase fixed
};

std::map<std::string, std::string> context_of(const ScenarioConfig& cfg) {
    return {{"scenario", cfg.name},
            {"k", fmt(cfg.k)},
            {"gamma", fmt(cfg.gamma)},
            {"a", fmt(cfg.a)},
            {"phi", fmt(cfg.phi)},
            {"hbar_eff", fmt(cfg.hbar_eff)},
            {"seed", std::to_string(cfg.seed)}};
}

SpectralSet run_classical_stage(const ScenarioConfig& cfg, bool thermal, const UlamGrid& grid,
                                std::vector<PhaseField>& fields_out, PipelineResult& result) {
    const NoiseSpec noise = thermal ? cfg.thermal_noise() : NoiseSpec{0.0, 8.0};
    TransferMatrix S = build_transfer_matrix(grid, cfg.map_params(), noise, cfg.n_tr, cfg.seed);

    LinearOperatorHandle op;
    op.dimension = S.dimension();
    op.label = thermal ? "classical-thermal" : "classical";
    op.apply = [&S](const Complex* in, Complex* out) { apply(S, in, out); };

    ArnoldiOptions opts;
    opts.count = cfg.eigen.count;
    opts.subspace = cfg.eigen.subspace;
    opts.tol = cfg.eigen.tol;
    opts.max_restarts = cfg.eigen.max_restarts;
    opts.seed = cfg.seed;
    SpectralSet set = leading_spectrum(op, opts);

    const std::string tag = thermal ? "classical_thermal" : "classical";
    const auto csv = result.output_dir / ("spectrum_" + tag + ".csv");
    write_spectrum_csv(csv, set);
    result.artifacts["spectrum_" + tag] = csv;

    // leading eigenvectors as phase-space fields, canonical order (the
    // solver returns them canonically ordered), phase fixed
    const int stored = std::min<int>(stored_eigenvector_count(cfg), static_cast<int>(set.pairs.size()));
    std::vector<Complex> lambdas;
    fields_out.clear();
    for (int i = 0; i < stored; ++i) {
        const auto& pair = set.pairs[static_cast<std::size_t>(i)];
        lambdas.push_back(pair.lambda);
        fields_out.push_back(cell_vector_to_field(
            grid,
            std::span<const Complex>(pair.vec.data(), static_cast<std::size_t>(pair.vec.size())),
            PhaseField::Provenance::ClassicalEigenvector));
    }
    fix_phase_run(fields_out, lambdas);
    for (int i = 0; i < stored; ++i) {
        const auto path = result.output_dir / ("eig_" + tag + "_" + std::to_string(i) + ".bin");
        write_field(path, fields_out[static_cast<std::size_t>(i)], context_of(cfg));
        result.artifacts["eig_" + tag + "_" + std::to_string(i)] = path;
    }
    return set;
}

SpectralSet run_quantum_stage(const ScenarioConfig& cfg, const HilbertSpec& spec,
                              std::vector<DensityMatrix>& vecs_out, PipelineResult& result) {
    const SuperPropagator prop = build_superpropagator(spec, cfg.map_params());

    LinearOperatorHandle op;
    op.dimension = prop.dimension();
    op.label = "quantum";
    op.apply = [&prop](const Complex* in, Complex* out) {
        apply_superoperator_vec(prop, in, out);
    };

    ArnoldiOptions opts;
    opts.count = cfg.eigen.count;
    opts.subspace = cfg.eigen.subspace;
    opts.tol = cfg.eigen.tol;
    opts.max_restarts = cfg.eigen.max_restarts;
    opts.seed = cfg.seed;
    SpectralSet set = leading_spectrum(op, opts);

    const auto csv = result.output_dir / "spectrum_quantum.csv";
    write_spectrum_csv(csv, set);
    result.artifacts["spectrum_quantum"] = csv;

    const int stored = std::min<int>(stored_eigenvector_count(cfg), static_cast<int>(set.pairs.size()));
    vecs_out.clear();
    for (int i = 0; i < stored; ++i) {
        DensityMatrix rho;
        rho.m = Eigen::Map<const MatrixXc>(set.pairs[static_cast<std::size_t>(i)].vec.data(),
                                           spec.N, spec.N);
        rho.basis = Basis::Momentum;
        rho.eigenvalue = set.pairs[static_cast<std::size_t>(i)].lambda;
        const auto path = result.output_dir / ("rho_quantum_" + std::to_string(i) + ".bin");
        write_density(path, rho, context_of(cfg));
        result.artifacts["rho_quantum_" + std::to_string(i)] = path;
        vecs_out.push_back(std::move(rho));
    }
    return set;
}

void run_wigner_stage(const ScenarioConfig& cfg, const HilbertSpec& spec,
                      const std::vector<DensityMatrix>& vecs, std::vector<PhaseField>& fields_out,
                      PipelineResult& result) {
    FourierTransformer dft(spec.N);
    const ChordCutoff cutoff{0.25 * spec.N};

    std::vector<Complex> lambdas;
    fields_out.clear();
    for (const auto& rho : vecs) {
        DensityMatrix pos = dft.to_position(rho);
        PhaseField symbol = weyl_symbol(pos, spec.hbar_eff);
        fields_out.push_back(chord_filter(symbol, cutoff));
        lambdas.push_back(rho.eigenvalue.value_or(Complex(0.0, 0.0)));
    }
    fix_phase_run(fields_out, lambdas);
    for (std::size_t i = 0; i < fields_out.size(); ++i) {
        const auto path = result.output_dir / ("wigner_" + std::to_string(i) + ".bin");
        write_field(path, fields_out[i], context_of(cfg));
        result.artifacts["wigner_" + std::to_string(i)] = path;
    }
}

void run_compare_stage(const ScenarioConfig& cfg, StageData& data, PipelineResult& result) {
    // prerequisites: thermal + quantum spectra, thermal fields, wigner fields
    if (!data.thermal) {
        const auto path = cfg.output_dir / "spectrum_classical_thermal.csv";
        if (!std::filesystem::exists(path))
            throw ConfigError("compare: missing artifact " + path.string() +
                              " (run the classical-thermal stage first)");
        data.thermal = read_spectrum_csv(path);
    }
    if (!data.quantum) {
        const auto path = cfg.output_dir / "spectrum_quantum.csv";
        if (!std::filesystem::exists(path))
            throw ConfigError("compare: missing artifact " + path.string() +
                              " (run the quantum stage first)");
        data.quantum = read_spectrum_csv(path);
    }

    const int depth = std::min({5, static_cast<int>(data.thermal->pairs.size()),
                                static_cast<int>(data.quantum->pairs.size())});
    if (data.thermal_fields.empty()) {
        for (int i = 0;; ++i) {
            const auto path = cfg.output_dir / ("eig_classical_thermal_" + std::to_string(i) + ".bin");
            if (!std::filesystem::exists(path)) break;
            data.thermal_fields.push_back(read_field(path));
        }
        if (static_cast<int>(data.thermal_fields.size()) < depth)
            throw ConfigError("compare: missing artifact " +
                              (cfg.output_dir / "eig_classical_thermal_*.bin").string());
    }
    if (data.wigner_fields.empty()) {
        for (int i = 0;; ++i) {
            const auto path = cfg.output_dir / ("wigner_" + std::to_string(i) + ".bin");
            if (!std::filesystem::exists(path)) break;
            data.wigner_fields.push_back(read_field(path));
        }
        if (static_cast<int>(data.wigner_fields.size()) < depth)
            throw ConfigError("compare: missing artifact " +
                              (cfg.output_dir / "wigner_*.bin").string());
    }
    if (!data.thermal_fields.front().same_grid(data.wigner_fields.front()))
        throw ConfigError(
            "compare: classical and quantum fields live on different grids; rebuild the "
            "classical side with the matched grid (M = N, identical windows)");

    const int count = std::min({cfg.eigen.count, static_cast<int>(data.thermal->pairs.size()),
                                static_cast<int>(data.quantum->pairs.size())});
    const SpectrumPairing pairing = compare_spectra(*data.thermal, *data.quantum, count);
    {
        const auto path = result.output_dir / "compare_spectra.csv";
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << "# mean_distance=" << fmt(pairing.mean_distance)
            << " max_distance=" << fmt(pairing.max_distance) << '\n';
        out << "index,re_classical,im_classical,re_quantum,im_quantum,distance\n";
        for (std::size_t i = 0; i < pairing.entries.size(); ++i) {
            const auto& e = pairing.entries[i];
            out << i << ',' << fmt(e.classical.real()) << ',' << fmt(e.classical.imag()) << ','
                << fmt(e.quantum.real()) << ',' << fmt(e.quantum.imag()) << ','
                << fmt(e.distance) << '\n';
        }
        result.artifacts["compare_spectra"] = path;
    }

    const OverlapTable table =
        overlap_table(*data.thermal, data.thermal_fields, *data.quantum, data.wigner_fields, depth);
    {
        const auto path = result.output_dir / "overlap_table.csv";
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << "index,re_lambda_classical,im_lambda_classical,re_lambda_quantum,im_lambda_quantum,"
               "overlap_modulus\n";
        for (const auto& row : table.rows) {
            out << row.index << ',' << fmt(row.lambda_classical.real()) << ','
                << fmt(row.lambda_classical.imag()) << ',' << fmt(row.lambda_quantum.real()) << ','
                << fmt(row.lambda_quantum.imag()) << ',' << fmt(row.overlap_modulus) << '\n';
        }
        result.artifacts["overlap_table"] = path;
    }
}

}  // namespace

PipelineResult run_pipeline(const ScenarioConfig& config_in, const std::set<Stage>& stages) {
    ScenarioConfig cfg = config_in;
    const bool wants_compare = stages.count(Stage::Compare) > 0;
    const bool wants_quantum_side = stages.count(Stage::Quantum) || stages.count(Stage::Wigner);
    if (wants_compare &&
        (stages.count(Stage::ClassicalThermal) || stages.count(Stage::Classical) || wants_quantum_side))
        apply_matched_grid(cfg);
    cfg.validate();

    std::filesystem::create_directories(cfg.output_dir);
    DirLock lock(cfg.output_dir);
    PipelineResult result;
    result.output_dir = cfg.output_dir;
    StageData data;

    const UlamGrid grid(cfg.M != 0 ? cfg.M : cfg.derived_M(), cfg.p_max);
    std::optional<HilbertSpec> hspec;
    if (wants_quantum_side || wants_compare) hspec = build_hilbert(cfg.hbar_eff, cfg.p_max);

    if (stages.count(Stage::Classical)) {
        std::vector<PhaseField> noiseless_fields;
        data.classical = run_classical_stage(cfg, false, grid, noiseless_fields, result);
    }
    if (stages.count(Stage::ClassicalThermal))
        data.thermal = run_classical_stage(cfg, true, grid, data.thermal_fields, result);

    if (stages.count(Stage::Quantum))
        data.quantum = run_quantum_stage(cfg, *hspec, data.quantum_vecs, result);

    if (stages.count(Stage::Wigner)) {
        if (data.quantum_vecs.empty()) {
            for (int i = 0;; ++i) {
                const auto path = cfg.output_dir / ("rho_quantum_" + std::to_string(i) + ".bin");
                if (!std::filesystem::exists(path)) break;
                data.quantum_vecs.push_back(read_density(path));
            }
            if (data.quantum_vecs.empty())
                throw ConfigError("wigner: missing artifact " +
                                  (cfg.output_dir / "rho_quantum_0.bin").string() +
                                  " (run the quantum stage first)");
            if (data.quantum_vecs.front().N() != hspec->N)
                throw ConfigError("wigner: stored eigenvectors have N=" +
                                  std::to_string(data.quantum_vecs.front().N()) +
                                  " but the configuration derives N=" + std::to_string(hspec->N));
        }
        run_wigner_stage(cfg, *hspec, data.quantum_vecs, data.wigner_fields, result);
    }

    if (wants_compare) run_compare_stage(cfg, data, result);

    // run manifest: everything needed to regenerate the artifacts
    json manifest{{"version", kVersion},
                  {"scenario",
                   {{"name", cfg.name},
                    {"k", cfg.k},
                    {"gamma", cfg.gamma},
                    {"a", cfg.a},
                    {"phi", cfg.phi},
                    {"hbar_eff", cfg.hbar_eff},
                    {"hbar_eff_pf", cfg.hbar_eff_pf},
                    {"p_max", cfg.p_max},
                    {"M", grid.M()},
                    {"n_tr", cfg.n_tr},
                    {"noise_variance", cfg.thermal_noise().variance},
                    {"eigen_count", cfg.eigen.count},
                    {"eigen_subspace", cfg.eigen.subspace},
                    {"eigen_tol", cfg.eigen.tol},
                    {"max_restarts", cfg.eigen.max_restarts},
                    {"seed", cfg.seed}}},
                  {"threads", omp_get_max_threads()}};
    if (hspec) manifest["scenario"]["N"] = hspec->N;
    json stage_list = json::array();
    for (Stage s : stages) stage_list.push_back(stage_name(s));
    manifest["stages"] = stage_list;
    json artifact_list = json::array();
    for (const auto& [name, path] : result.artifacts)
        artifact_list.push_back(json{{"name", name}, {"path", path.filename().string()}});
    manifest["artifacts"] = artifact_list;

    std::ofstream out(cfg.output_dir / "manifest.json", std::ios::trunc);
    if (!out) throw IoError("cannot write manifest.json");
    out << manifest.dump(2) << '\n';
    result.artifacts["manifest"] = cfg.output_dir / "manifest.json";

    return result;
}

}  // namespace ratchet
