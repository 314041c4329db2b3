#ifndef ONSU_MODEL_HPP
#define ONSU_MODEL_HPP

#include <array>
#include <string>
#include <vector>

#include "onsu/paths.hpp"
#include "onsu/robust.hpp"
#include "onsu/sim_state.hpp"

namespace onsu {

enum class VarKind { Binary, Continuous };

enum class Sense { LE, EQ, GE };

struct RowTerm {
    int var = 0;
    double coef = 0.0;
};

struct ModelRow {
    std::string tag;  // constraint family plus entity, e.g. "C5_1_nATLAng_cpu"
    Sense sense = Sense::LE;
    double rhs = 0.0;
    std::vector<RowTerm> terms;
};

struct VarDef {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0.0;
    double ub = 0.0;
    double obj = 0.0;  // objective coefficient
};

// Branching priority classes for the exact solver.
enum class VarClass { Delta = 0, Pi = 1, Xi = 2, Theta = 3, Beta = 4, Aux = 5 };

struct ModelOptions {
    // < 0 selects the automatic weight |N| + |L| + 4, which makes the
    // rejected-count term dominate the bounded utilization terms.
    double eta_weight = -1.0;
    bool paper_faithful_objective = false;  // weight 1 on eta, as printed

    double resolve_eta_weight(const Topology& topo) const;
};

// One candidate (ordered pair, path) slot for a VL, with its xi variable.
struct XiEntry {
    int from = 0;
    int to = 0;
    int path_index = 0;   // index into PathTable::paths(from, to)
    int var = -1;         // xi variable
    int rho2_var = -1;    // -1 when gamma2 protection is off
    double delay_ms = 0.0;
    std::vector<int> links;
};

struct VlVars {
    VlKey key;
    int local_m = 0;   // endpoint VM ids
    int local_m2 = 0;
    double nominal_rate = 0.0;
    double rate_dev = 0.0;
    double max_delay_ms = 0.0;
    std::vector<XiEntry> xi;
};

struct VmVars {
    VmKey key;
    ResourceVector nominal;
    ResourceVector deviation;            // cfg.delta1 * nominal
    std::vector<int> pi;                 // per node index
    std::vector<std::array<int, 3>> rho1;  // per node, -1 entries when gamma1 off
};

struct SliceVars {
    SliceKey key;
    int delta = -1;
    std::vector<VmVars> vms;
    std::vector<VlVars> vls;
};

// Semantic index of the variable catalog; lets the solver propagate and
// extract assignments without string lookups.
struct VarCatalog {
    std::vector<VarDef> defs;
    std::vector<VarClass> clazz;  // parallel to defs

    int eta = -1;
    int n_c = -1;
    int s_c = -1;
    std::vector<SliceVars> slices;
    std::vector<std::array<int, 3>> u_node;  // per node: U vars (cpu, ram, stor)
    std::vector<int> u_link;                 // per link: U' var
    std::vector<int> beta;                   // per node, -1 when previously used
    std::vector<int> theta;                  // per link
    std::vector<std::array<int, 3>> z1;      // per node, -1 when gamma1 off
    std::vector<int> z2;                     // per link, -1 when gamma2 off

    int add(std::string name, VarKind kind, double lb, double ub, VarClass cls);
};

// The per-slot Gamma-robust BLP. Rows carry provenance tags naming the
// constraint family they realize.
struct RobinsModel {
    VarCatalog vars;
    std::vector<ModelRow> rows;
    double eta_weight = 1.0;
    int arrival_count = 0;
};

// Builds the admission model for the current slot: accepted slices must be
// fully placed and embedded within the remaining capacities, with
// Gamma-protection on node and link usage.
RobinsModel build_model(const SimState& state, const std::vector<SliceRequest>& arrivals,
                        const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                        const ModelOptions& options = {});

} // namespace onsu

#endif
