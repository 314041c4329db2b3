#ifndef ONSU_SIM_HPP
#define ONSU_SIM_HPP

#include "onsu/heuristic.hpp"
#include "onsu/metrics.hpp"
#include "onsu/solver.hpp"

namespace onsu {

enum class AdmitMode { Exact, Heuristic };

struct ReleaseSummary {
    std::vector<SliceKey> released;
    std::vector<int> ledger_slots_freed;
};

// Start-of-slot expiration step: returns expired slices' nominal resources,
// decrements remaining lifespans, clears flags of emptied nodes/links, and
// frees the robustness ledgers of admission slots whose slices have all
// expired.
ReleaseSummary release_expired(SimState& state, const Topology& topo);

// Admission for the current slot, dispatching to the exact solver or the
// greedy. The result is validated with check_solution; a violation from
// either engine is an internal error.
Assignment admit(SimState& state, const std::vector<SliceRequest>& arrivals, AdmitMode mode,
                 const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                 const SolverConfig& solver_cfg, const ModelOptions& options = {});

// Applies an admission: subtracts nominal demands, records the protection
// increments into the slot ledgers, registers lifespans, updates flags and
// power totals.
void commit(SimState& state, const Assignment& assignment,
            const std::vector<SliceRequest>& arrivals, int slot, const Topology& topo,
            const PathTable& paths, const RobustConfig& cfg);

// Verifies the SimState invariants (availability in range, flags matching
// holdings, ledgers nonnegative, power totals consistent). Throws
// InternalError on failure.
void audit_state(const SimState& state, const Topology& topo);

struct SimulationOptions {
    AdmitMode mode = AdmitMode::Heuristic;
    RobustConfig robust;
    SolverConfig solver;
    ModelOptions model;
    // Keep running empty slots after the schedule until every finite-lifespan
    // slice has expired and all ledgers are freed.
    bool drain_after_schedule = false;
    int drain_slot_cap = 100000;
    bool audit_every_slot = true;
};

struct SimulationResult {
    MetricsSeries metrics;
    SimState end_state;
};

// The time-slotted loop: per slot release, admit, commit, record.
SimulationResult run_simulation(const Topology& topo, const PathTable& paths,
                                const ArrivalSchedule& schedule, const SimulationOptions& opts);

// End-state snapshot for audits and replay in tests.
std::string state_to_json(const SimState& state, const Topology& topo);

} // namespace onsu

#endif
