#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wvrecon/coupler.hpp"
#include "wvrecon/grid.hpp"
#include "wvrecon/reconstructor.hpp"

namespace wvrecon {

// A complete experiment description. n_runs = 0 selects the exact pipeline
// (infinite-statistics limit); n_runs > 0 selects Monte Carlo sampling.
struct RunConfig {
    StateDescriptor state;
    double theta = 0.05;
    std::int64_t n_runs = 0;
    std::uint64_t seed = 1;
    double bin_width = 0.1;
    GridSpec grid = default_grid();
    double rotation_angle = 0.0;  // optional pre-rotation of the descriptor
    std::string output_dir;       // empty = in-memory only, no files
    bool emit_records = false;
};

void validate(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& config);

// Realized states and coupled joint for a config: the (optionally rotated)
// system state, its momentum representation, the vacuum meter, and the
// post-beam-splitter joint in the measured (P, x) representation.
struct PreparedJoint {
    Wavefunction system_position;
    Wavefunction system_momentum;
    JointAmplitude joint;
};
PreparedJoint prepare_joint(const RunConfig& config);

// Exact per-bin statistics: bin-averaged density and probability-weighted
// meter means on bins anchored at P = 0, boundary cells split fractionally.
// Bins whose probability mass is at or below mass_threshold are excluded
// (the infinite-N analogue of an empty bin); leading and trailing excluded
// bins are trimmed.
struct ExactBinnedStats {
    double bin_width = 0.0;
    std::vector<double> bin_centers;
    std::vector<double> p_mean;
    std::vector<double> e_mean;
    std::vector<char> included;
};
ExactBinnedStats exact_binned_stats(const JointAmplitude& joint, double bin_width,
                                    double mass_threshold = 1e-12);

// Shared back half of both pipelines: sqrt the density, integrate the phase
// per segment, assemble on the grid, and score against the exact state.
ReconstructionResult reconstruct_from_bins(std::span<const double> bin_centers,
                                           std::span<const double> p_hat,
                                           std::span<const double> e_hat,
                                           std::span<const char> usable, double theta,
                                           double bin_width,
                                           const Wavefunction& psi_exact_momentum);

struct RunOutput {
    ReconstructionResult result;
    Wavefunction psi_exact_momentum;
    nlohmann::ordered_json summary;
    nlohmann::ordered_json manifest;
};

// Exact pipeline: exact density and postselected means at the configured bin
// width, reconstruction, error, and (when output_dir is set) the full file
// set: exact statistics, reconstruction, exact/reconstructed Wigner grids,
// reference wavefunction, summary, and manifest.
RunOutput run_exact(const RunConfig& config);

// Monte Carlo pipeline: sampled records, binned estimators, reconstruction,
// error, and the corresponding file set.
RunOutput run_monte_carlo(const RunConfig& config);

enum class SweepAxis { Theta, NRuns };

struct SweepEntry {
    double axis_value = 0.0;
    double delta = 0.0;
    int segments = 0;
    bool failed = true;
    std::string error;  // nonempty when the run itself threw
};

// Runs the pipeline once per axis value (exact when the entry's n_runs is 0).
// Per-run failures are recorded and the sweep continues. When the base config
// has an output directory, each run writes into its own subdirectory and a
// sweep_summary.csv is emitted.
std::vector<SweepEntry> sweep(const RunConfig& base, SweepAxis axis,
                              std::span<const double> values);

}  // namespace wvrecon
