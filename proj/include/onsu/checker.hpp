#ifndef ONSU_CHECKER_HPP
#define ONSU_CHECKER_HPP

#include <string>
#include <vector>

#include "onsu/assignment.hpp"
#include "onsu/paths.hpp"
#include "onsu/robust.hpp"
#include "onsu/sim_state.hpp"

namespace onsu {

struct Violation {
    std::string family;  // constraint family, e.g. "C6", "C9", "OBJ"
    std::string entity;  // offending node/link/slice
    std::string detail;
};

// Semantic evaluation of an assignment against the current state, computed
// directly from the worst-case oracles with no model object involved.
struct AssignmentEval {
    bool feasible = true;
    std::vector<ResourceVector> node_load;  // robust usage added by this slot
    std::vector<double> link_load;
    std::set<int> hosts;            // nodes receiving at least one VM
    std::set<int> newly_on_nodes;   // hosts that were previously unused
    std::set<int> links_in_use;     // links under at least one new VL
    double n_c = 0.0;               // slot node power (C10 semantics)
    double s_c = 0.0;               // slot switch power (C13 semantics)
    int eta = 0;
    double objective = 0.0;
};

// Computes loads, power and the objective for the given accept/place/embed
// choices. Capacity, delay and structural failures clear `feasible` but the
// evaluation still completes.
AssignmentEval evaluate_assignment(const SimState& state,
                                   const std::vector<SliceRequest>& arrivals,
                                   const Topology& topo, const PathTable& paths,
                                   const RobustConfig& cfg, const Assignment& assignment,
                                   double eta_weight);

// Re-derives every constraint family from the assignment alone and reports
// each violation. Empty result means the assignment is feasible and its
// recorded objective matches the recomputation within 1e-6.
std::vector<Violation> check_solution(const SimState& state,
                                      const std::vector<SliceRequest>& arrivals,
                                      const Topology& topo, const PathTable& paths,
                                      const RobustConfig& cfg, const Assignment& assignment,
                                      double eta_weight);

} // namespace onsu

#endif
