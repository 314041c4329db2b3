#ifndef ONSU_EXPERIMENT_HPP
#define ONSU_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "onsu/sim.hpp"

namespace onsu {

// One robustness setting evaluated across seeds.
struct ScenarioPoint {
    std::string label;
    RobustConfig robust;
};

enum class Scenario { GammaSweep, DeltaSweep, Custom };

struct ExperimentConfig {
    std::string topology = "abilene";  // builtin name or document path
    WorkloadParams workload;
    std::vector<std::uint64_t> seeds;
    std::vector<AdmitMode> modes = {AdmitMode::Heuristic};
    Scenario scenario = Scenario::GammaSweep;
    std::vector<ScenarioPoint> custom_points;  // used when scenario == Custom
    SolverConfig solver;
    ModelOptions model;
    int k_paths = 5;
    std::string out_dir = "out";

    void validate() const;
    std::vector<ScenarioPoint> points() const;
};

struct RunOutcome {
    ScenarioPoint point;
    AdmitMode mode = AdmitMode::Heuristic;
    std::uint64_t seed = 0;
    MetricsSeries metrics;
};

// Runs every (scenario point, mode, seed) simulation, writes per-slot CSVs,
// per-run summary JSONs and a cross-seed aggregate CSV. Returns the in-memory
// outcomes for callers that post-process.
std::vector<RunOutcome> run_experiment(const ExperimentConfig& config);

// Gamma-sweep and delta-sweep points as used in the evaluation protocol.
std::vector<ScenarioPoint> gamma_sweep_points(double delta);
std::vector<ScenarioPoint> delta_sweep_points(int gamma);

std::string mode_name(AdmitMode mode);

// Aggregate CSV text (mean and standard deviation per scenario point and
// mode); exposed for tests.
std::string aggregate_csv(const std::vector<RunOutcome>& outcomes);

} // namespace onsu

#endif
