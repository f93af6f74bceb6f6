#ifndef RATCHET_PIPELINE_HPP
#define RATCHET_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ratchet/analysis.hpp"
#include "ratchet/scenario.hpp"

namespace ratchet {

enum class Stage { Classical, ClassicalThermal, Quantum, Wigner, Compare };

Stage stage_from_name(const std::string& name);
std::string stage_name(Stage stage);

struct PipelineResult {
    std::filesystem::path output_dir;
    std::map<std::string, std::filesystem::path> artifacts;
};

/// Runs the requested stages in dependency order, persisting every product
/// under config.output_dir together with a run manifest. Stages not run in
/// this invocation load their prerequisites from the output directory and
/// fail naming the missing artifact. Deterministic for a fixed seed.
PipelineResult run_pipeline(const ScenarioConfig& config, const std::set<Stage>& stages);

/// Number of leading eigenvector payloads persisted per operator.
int stored_eigenvector_count(const ScenarioConfig& config);

/// Spectrum CSV helpers (index, Re, Im, |lambda|, residual per row).
void write_spectrum_csv(const std::filesystem::path& path, const SpectralSet& set);
SpectralSet read_spectrum_csv(const std::filesystem::path& path);

/// Classical side of a matched classical/quantum comparison: M = N and the
/// window equals the realized quantum window.
void apply_matched_grid(ScenarioConfig& config);

}  // namespace ratchet

#endif
