#ifndef ONSU_SOLVER_HPP
#define ONSU_SOLVER_HPP

#include <string>
#include <vector>

#include "onsu/checker.hpp"
#include "onsu/model.hpp"
#include "onsu/simplex.hpp"

namespace onsu {

enum class SearchOrder { BestFirst, DepthFirst };

struct SolverConfig {
    double time_limit_s = 60.0;
    double gap_tolerance = 1e-6;  // relative
    long node_limit = 100000000;
    SearchOrder order = SearchOrder::BestFirst;

    void validate() const;
};

enum class SolveStatus { ProvenOptimal, FeasibleTimeLimited, Infeasible };

struct SolveStats {
    long nodes = 0;
    long lp_solves = 0;
    long lp_iterations = 0;
    double wall_time_s = 0.0;
    std::vector<double> incumbent_history;  // objective after each improvement
    std::vector<double> bound_history;      // global lower bound when popped
};

struct Solution {
    Assignment assignment;
    SolveStatus status = SolveStatus::FeasibleTimeLimited;
    double bound = 0.0;  // best proven lower bound
    SolveStats stats;
};

// Exact branch and bound over the model's delta/pi/xi binaries with bound
// propagation, LP-relaxation lower bounds from the built-in simplex and the
// all-reject assignment as the initial incumbent. theta/beta follow from the
// linking constraints once delta/pi/xi are integral.
Solution solve_exact(const RobinsModel& model, const SimState& state,
                     const std::vector<SliceRequest>& arrivals, const Topology& topo,
                     const PathTable& paths, const RobustConfig& cfg,
                     const SolverConfig& solver_cfg = {});

// Optimal value of the continuous relaxation plus the (possibly fractional)
// point. `ok` is false when the simplex failed; callers fall back to the
// trivial bound 0, valid because every objective term is nonnegative.
struct LpRelaxation {
    bool ok = false;
    double bound = 0.0;
    std::vector<double> x;  // indexed like model.vars.defs
};
LpRelaxation solve_lp_relaxation(const RobinsModel& model);

// Exhaustive oracle over delta/placement/path choices; guarded to instances
// whose choice product stays within 10^7. Ties resolve to the first optimum
// in enumeration order (slices by arrival, nodes and paths by index,
// rejection last).
Solution brute_force_optimum(const SimState& state, const std::vector<SliceRequest>& arrivals,
                             const Topology& topo, const PathTable& paths,
                             const RobustConfig& cfg, const ModelOptions& options = {});

// CPLEX-style LP text of the model, rows named by their provenance tags.
// Deterministic: the same model always prints the same bytes.
std::string export_lp(const RobinsModel& model);

} // namespace onsu

#endif
