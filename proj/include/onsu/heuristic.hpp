#ifndef ONSU_HEURISTIC_HPP
#define ONSU_HEURISTIC_HPP

#include "onsu/checker.hpp"
#include "onsu/model.hpp"

namespace onsu {

// Operation counters for complexity instrumentation.
struct HeuristicCounters {
    long node_scans = 0;
    long path_scans = 0;
    long link_checks = 0;
};

// Greedy admission: nodes sorted by descending available capacity, slices by
// descending requested resources, VMs by descending demand; each VM takes
// the first node with robust room and each VL the first delay-feasible path
// with robust bandwidth room. A slice that cannot be served is rolled back
// atomically and rejected.
Assignment nea_onsu_admit(const SimState& state, const std::vector<SliceRequest>& arrivals,
                          const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                          const ModelOptions& options = {}, HeuristicCounters* counters = nullptr);

} // namespace onsu

#endif
