// Command-line front end for the dissipative-ratchet spectral toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "ratchet/field_io.hpp"
#include "ratchet/pipeline.hpp"

namespace {

using namespace ratchet;

struct CommonOpts {
    std::string preset_name;
    std::string config_path;
    ScenarioConfig cfg;
    bool have_preset = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--preset", opts.preset_name, "scenario preset: B1, Cm1, Dm1 or attractor");
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--name", opts.cfg.name, "scenario label");
    cmd->add_option("--k", opts.cfg.k, "kick strength (rescaled momentum units)");
    cmd->add_option("--gamma", opts.cfg.gamma, "dissipation in [0,1]");
    cmd->add_option("--a", opts.cfg.a, "second-harmonic amplitude");
    cmd->add_option("--phi", opts.cfg.phi, "spatial phase");
    cmd->add_option("--hbar-eff", opts.cfg.hbar_eff, "effective Planck constant");
    cmd->add_option("--hbar-eff-pf", opts.cfg.hbar_eff_pf, "momentum cell width of the Ulam grid");
    cmd->add_option("--p-max", opts.cfg.p_max, "momentum window half-width");
    cmd->add_option("--M", opts.cfg.M, "cells per axis (0 = derive)");
    cmd->add_option("--n-tr", opts.cfg.n_tr, "samples per Ulam cell");
    cmd->add_option("--noise-variance", opts.cfg.noise_variance,
                    "thermal noise variance (<0 = hbar_eff)");
    cmd->add_option("--count", opts.cfg.eigen.count, "eigenvalues to compute");
    cmd->add_option("--subspace", opts.cfg.eigen.subspace, "Krylov subspace dimension");
    cmd->add_option("--tol", opts.cfg.eigen.tol, "eigensolver tolerance");
    cmd->add_option("--max-restarts", opts.cfg.eigen.max_restarts, "restart limit");
    cmd->add_option("--seed", opts.cfg.seed, "master seed");
    cmd->add_option("--output", opts.cfg.output_dir, "output directory");
}

ScenarioConfig resolve_config(const CommonOpts& opts, const CLI::App* cmd) {
    ScenarioConfig cfg;
    if (!opts.config_path.empty())
        cfg = parse_config(opts.config_path);
    else if (!opts.preset_name.empty())
        cfg = preset(opts.preset_name);

    // explicit flags override file/preset values
    auto take = [&](const char* flag, auto member_ptr) {
        if (cmd->count(flag) > 0) cfg.*member_ptr = opts.cfg.*member_ptr;
    };
    take("--name", &ScenarioConfig::name);
    take("--k", &ScenarioConfig::k);
    take("--gamma", &ScenarioConfig::gamma);
    take("--a", &ScenarioConfig::a);
    take("--phi", &ScenarioConfig::phi);
    take("--hbar-eff", &ScenarioConfig::hbar_eff);
    take("--hbar-eff-pf", &ScenarioConfig::hbar_eff_pf);
    take("--p-max", &ScenarioConfig::p_max);
    take("--M", &ScenarioConfig::M);
    take("--n-tr", &ScenarioConfig::n_tr);
    take("--noise-variance", &ScenarioConfig::noise_variance);
    take("--seed", &ScenarioConfig::seed);
    take("--output", &ScenarioConfig::output_dir);
    if (cmd->count("--count")) cfg.eigen.count = opts.cfg.eigen.count;
    if (cmd->count("--subspace")) cfg.eigen.subspace = opts.cfg.eigen.subspace;
    if (cmd->count("--tol")) cfg.eigen.tol = opts.cfg.eigen.tol;
    if (cmd->count("--max-restarts")) cfg.eigen.max_restarts = opts.cfg.eigen.max_restarts;

    if (cfg.name.empty())
        throw ConfigError("scenario name required (use --preset, --config or --name)");
    cfg.validate();
    return cfg;
}

void print_artifacts(const PipelineResult& result) {
    for (const auto& [name, path] : result.artifacts)
        std::printf("%-28s %s\n", name.c_str(), path.string().c_str());
}

int run_stages(const CommonOpts& opts, const CLI::App* cmd, std::set<Stage> stages) {
    const ScenarioConfig cfg = resolve_config(opts, cmd);
    const PipelineResult result = run_pipeline(cfg, stages);
    print_artifacts(result);
    return 0;
}

int run_simulate(const CommonOpts& opts, const CLI::App* cmd, std::int64_t samples,
                 std::int64_t transient, bool thermal) {
    ScenarioConfig cfg = resolve_config(opts, cmd);
    const UlamGrid grid(cfg.M != 0 ? cfg.M : cfg.derived_M(), cfg.p_max);
    const NoiseSpec noise = thermal ? cfg.thermal_noise() : NoiseSpec{0.0, 8.0};

    const PhaseField histogram =
        attractor_histogram(cfg.map_params(), noise, grid, transient, samples, cfg.seed);
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / "histogram.bin";
    write_field(path, histogram, {{"scenario", cfg.name}, {"seed", std::to_string(cfg.seed)}});

    // asymptotic current from the same ensemble parameters
    std::vector<PhasePoint> points(4096);
    Rng rng(cfg.seed ^ 0x5eedULL);
    for (auto& pt : points)
        pt = PhasePoint{rng.uniform(0.0, kTwoPi),
                        rng.uniform(-grid.p_max(), grid.p_max()) / cfg.hbar_eff};
    const auto evolved = evolve_ensemble(points, cfg.map_params(), noise, transient, cfg.seed);
    const double current = ratchet_current(evolved, cfg.hbar_eff);
    std::printf("histogram                    %s\n", path.string().c_str());
    std::printf("ratchet current              %.6f\n", current);
    return 0;
}

int run_report(const CommonOpts& opts, const CLI::App* cmd) {
    const ScenarioConfig cfg = resolve_config(opts, cmd);
    const auto dir = cfg.output_dir;
    const auto out_path = dir / "report.csv";
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path.string());
    out << "operator,re_lambda0,im_lambda0,re_lambda1,im_lambda1,gap,t_lambda1\n";

    bool any = false;
    for (const auto& [kind, file] : std::vector<std::pair<std::string, std::string>>{
             {"PF", "spectrum_classical.csv"},
             {"PF_thermal", "spectrum_classical_thermal.csv"},
             {"QM", "spectrum_quantum.csv"}}) {
        const auto path = dir / file;
        if (!std::filesystem::exists(path)) continue;
        any = true;
        const SpectralSet set = read_spectrum_csv(path);
        const ScenarioResult r = summarize_spectrum(cfg.name, kind, set);
        char t_buf[32] = "nan";
        if (r.t_lambda1) std::snprintf(t_buf, sizeof t_buf, "%.17g", *r.t_lambda1);
        out << kind << ',' << r.lambda0.real() << ',' << r.lambda0.imag() << ','
            << r.lambda1.real() << ',' << r.lambda1.imag() << ',' << r.gap << ',' << t_buf << '\n';
        std::printf("%-12s lambda1 = %.4f%+.4fi  gap = %.4f  t = %s\n", kind.c_str(),
                    r.lambda1.real(), r.lambda1.imag(), r.gap, t_buf);
    }
    if (!any)
        throw ConfigError("report: no spectrum CSVs found in " + dir.string() +
                          " (run a spectrum stage first)");
    std::printf("report                       %s\n", out_path.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative kicked-ratchet spectral toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool thermal = false;
    std::int64_t samples = 1000000, transient = 300;

    auto* classical = app.add_subcommand("classical-spectrum",
                                         "Ulam transfer matrix and its leading spectrum");
    add_common(classical, opts);
    classical->add_flag("--thermal", thermal, "add thermal noise (variance <xi^2>)");

    auto* quantum = app.add_subcommand("quantum-spectrum",
                                       "one-period quantum channel and its leading spectrum");
    add_common(quantum, opts);

    auto* wigner = app.add_subcommand("wigner",
                                      "Weyl-Wigner symbols of stored quantum eigenvectors");
    add_common(wigner, opts);

    auto* overlap_cmd = app.add_subcommand("overlap",
                                           "spectra comparison and eigenvector overlap table");
    add_common(overlap_cmd, opts);

    auto* simulate = app.add_subcommand("simulate", "direct ensemble evolution and histogram");
    add_common(simulate, opts);
    simulate->add_flag("--thermal", thermal, "add thermal noise");
    simulate->add_option("--samples", samples, "ensemble size");
    simulate->add_option("--transient", transient, "steps discarded before binning");

    auto* report = app.add_subcommand("report", "gap/equilibration summary of stored spectra");
    add_common(report, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classical->parsed())
            return run_stages(opts, classical,
                              {thermal ? ratchet::Stage::ClassicalThermal
                                       : ratchet::Stage::Classical});
        if (quantum->parsed()) return run_stages(opts, quantum, {ratchet::Stage::Quantum});
        if (wigner->parsed()) return run_stages(opts, wigner, {ratchet::Stage::Wigner});
        if (overlap_cmd->parsed()) return run_stages(opts, overlap_cmd, {ratchet::Stage::Compare});
        if (simulate->parsed()) return run_simulate(opts, simulate, samples, transient, thermal);
        if (report->parsed()) return run_report(opts, report);
    } catch (const ratchet::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const ratchet::NumericsError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const ratchet::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    }
    return 0;
}
