#include "onsu/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <queue>

#include "onsu/errors.hpp"

namespace onsu {

void SolverConfig::validate() const {
    if (time_limit_s <= 0.0) throw ValidationError("solver config: time limit must be > 0");
    if (gap_tolerance < 0.0) throw ValidationError("solver config: gap tolerance must be >= 0");
    if (node_limit < 1) throw ValidationError("solver config: node limit must be >= 1");
}

namespace {

constexpr double kInf = 1e30;
constexpr double kIntTol = 1e-6;

double clamp_inf(double v) { return std::clamp(v, -kInf, kInf); }

// ---------------------------------------------------------------------------
// Presolve: fixed-variable substitution plus activity-based bound
// tightening. With `integral` set, binary bounds round to the lattice, which
// is exactly the logical propagation branch and bound needs (delta = 0
// clears a slice's pi/xi, pi sums force delta, C9 kills too-slow paths).
// ---------------------------------------------------------------------------
struct PresolveResult {
    bool infeasible = false;
    std::vector<double> lb, ub;
    lp::Problem reduced;
    std::vector<int> reduced_of;  // original var -> reduced index or -1
    std::vector<int> orig_of;     // reduced index -> original var
    double offset = 0.0;          // objective contribution of fixed vars
};

bool is_fixed(double lo, double hi) { return hi - lo <= 1e-9; }

PresolveResult presolve(const RobinsModel& model, std::vector<double> lb, std::vector<double> ub,
                        bool integral) {
    PresolveResult out;
    const auto& defs = model.vars.defs;
    const int nv = static_cast<int>(defs.size());

    bool changed = true;
    int sweeps = 0;
    while (changed && sweeps++ < 64 && !out.infeasible) {
        changed = false;
        for (const ModelRow& row : model.rows) {
            // Tighten against "<= rhs" (LE/EQ) and ">= rhs" (GE/EQ).
            for (int dir = 0; dir < 2; ++dir) {
                if (dir == 0 && row.sense == Sense::GE) continue;
                if (dir == 1 && row.sense == Sense::LE) continue;
                // dir 0: sum <= rhs. dir 1: sum >= rhs, i.e. -sum <= -rhs.
                double minact = 0.0;
                int inf_count = 0;
                for (const RowTerm& t : row.terms) {
                    double a = dir == 0 ? t.coef : -t.coef;
                    double contrib = a > 0.0 ? a * lb[static_cast<std::size_t>(t.var)]
                                             : a * ub[static_cast<std::size_t>(t.var)];
                    if (contrib <= -kInf * 1e-3)
                        ++inf_count;
                    else
                        minact += contrib;
                }
                double rhs = dir == 0 ? row.rhs : -row.rhs;
                if (inf_count == 0 && minact > rhs + 1e-7) {
                    out.infeasible = true;
                    break;
                }
                for (const RowTerm& t : row.terms) {
                    double a = dir == 0 ? t.coef : -t.coef;
                    if (a == 0.0) continue;
                    double contrib = a > 0.0 ? a * lb[static_cast<std::size_t>(t.var)]
                                             : a * ub[static_cast<std::size_t>(t.var)];
                    double rest;
                    if (contrib <= -kInf * 1e-3) {
                        if (inf_count > 1) continue;
                        rest = minact;
                    } else {
                        if (inf_count > 0) continue;
                        rest = minact - contrib;
                    }
                    double room = rhs - rest;
                    double& lo = lb[static_cast<std::size_t>(t.var)];
                    double& hi = ub[static_cast<std::size_t>(t.var)];
                    if (a > 0.0) {
                        double cap = room / a;
                        if (integral && defs[static_cast<std::size_t>(t.var)].kind ==
                                            VarKind::Binary)
                            cap = std::floor(cap + kIntTol);
                        if (cap < hi - 1e-9) {
                            hi = cap;
                            changed = true;
                        }
                    } else {
                        double floor_v = room / a;  // a < 0 flips the inequality
                        if (integral && defs[static_cast<std::size_t>(t.var)].kind ==
                                            VarKind::Binary)
                            floor_v = std::ceil(floor_v - kIntTol);
                        if (floor_v > lo + 1e-9) {
                            lo = floor_v;
                            changed = true;
                        }
                    }
                    if (lo > hi + 1e-7) {
                        out.infeasible = true;
                        break;
                    }
                    if (lo > hi) hi = lo;  // snap a hairline crossing
                }
                if (out.infeasible) break;
            }
            if (out.infeasible) break;
        }
    }
    out.lb = lb;
    out.ub = ub;
    if (out.infeasible) return out;

    // Split fixed and free variables.
    out.reduced_of.assign(static_cast<std::size_t>(nv), -1);
    for (int j = 0; j < nv; ++j) {
        if (is_fixed(lb[static_cast<std::size_t>(j)], ub[static_cast<std::size_t>(j)])) {
            out.offset +=
                defs[static_cast<std::size_t>(j)].obj * lb[static_cast<std::size_t>(j)];
        } else {
            out.reduced_of[static_cast<std::size_t>(j)] = static_cast<int>(out.orig_of.size());
            out.orig_of.push_back(j);
        }
    }
    lp::Problem& prob = out.reduced;
    const int nr = static_cast<int>(out.orig_of.size());
    prob.cost.resize(static_cast<std::size_t>(nr));
    prob.lb.resize(static_cast<std::size_t>(nr));
    prob.ub.resize(static_cast<std::size_t>(nr));
    prob.cols.assign(static_cast<std::size_t>(nr), {});
    for (int r = 0; r < nr; ++r) {
        int j = out.orig_of[static_cast<std::size_t>(r)];
        prob.cost[static_cast<std::size_t>(r)] = defs[static_cast<std::size_t>(j)].obj;
        prob.lb[static_cast<std::size_t>(r)] = clamp_inf(lb[static_cast<std::size_t>(j)]);
        prob.ub[static_cast<std::size_t>(r)] = clamp_inf(ub[static_cast<std::size_t>(j)]);
    }

    // Surviving rows: substitute fixed values, drop rows proven redundant by
    // the activity bounds.
    for (const ModelRow& row : model.rows) {
        double fixed_part = 0.0;
        double minact = 0.0, maxact = 0.0;
        int lo_inf = 0, hi_inf = 0;
        std::vector<lp::Entry> entries;  // reuse Entry as (reduced var, coef)
        for (const RowTerm& t : row.terms) {
            int rj = out.reduced_of[static_cast<std::size_t>(t.var)];
            if (rj < 0) {
                fixed_part += t.coef * lb[static_cast<std::size_t>(t.var)];
                continue;
            }
            double lo = lb[static_cast<std::size_t>(t.var)];
            double hi = ub[static_cast<std::size_t>(t.var)];
            double cmin = t.coef > 0.0 ? t.coef * lo : t.coef * hi;
            double cmax = t.coef > 0.0 ? t.coef * hi : t.coef * lo;
            if (cmin <= -kInf * 1e-3)
                ++lo_inf;
            else
                minact += cmin;
            if (cmax >= kInf * 1e-3)
                ++hi_inf;
            else
                maxact += cmax;
            entries.push_back(lp::Entry{rj, t.coef});
        }
        double rhs = row.rhs - fixed_part;
        if (entries.empty()) {
            bool ok = true;
            if (row.sense == Sense::LE) ok = 0.0 <= rhs + 1e-6;
            if (row.sense == Sense::GE) ok = 0.0 >= rhs - 1e-6;
            if (row.sense == Sense::EQ) ok = std::abs(rhs) <= 1e-6;
            if (!ok) {
                out.infeasible = true;
                return out;
            }
            continue;
        }
        if (row.sense == Sense::LE && hi_inf == 0 && maxact <= rhs + 1e-9) continue;
        if (row.sense == Sense::GE && lo_inf == 0 && minact >= rhs - 1e-9) continue;

        int row_id = prob.n_rows++;
        for (const lp::Entry& e : entries)
            prob.cols[static_cast<std::size_t>(e.row)].push_back(
                lp::Entry{row_id, e.value});
        prob.sense.push_back(row.sense == Sense::LE   ? lp::RowSense::LE
                             : row.sense == Sense::EQ ? lp::RowSense::EQ
                                                      : lp::RowSense::GE);
        prob.rhs.push_back(rhs);
    }
    return out;
}

} // namespace

LpRelaxation solve_lp_relaxation(const RobinsModel& model) {
    std::vector<double> lb, ub;
    for (const VarDef& d : model.vars.defs) {
        lb.push_back(d.lb);
        ub.push_back(d.ub);
    }
    PresolveResult pre = presolve(model, lb, ub, /*integral=*/false);
    LpRelaxation out;
    if (pre.infeasible) return out;  // unavailable; caller falls back
    lp::Result res = lp::solve(pre.reduced);
    if (res.status != lp::Status::Optimal) return out;
    out.ok = true;
    out.bound = pre.offset + res.objective;
    out.x.assign(model.vars.defs.size(), 0.0);
    for (std::size_t j = 0; j < model.vars.defs.size(); ++j) {
        int rj = pre.reduced_of[j];
        out.x[j] = rj < 0 ? pre.lb[j] : res.x[static_cast<std::size_t>(rj)];
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Assignment extraction shared by branch and bound and the oracle.
// ---------------------------------------------------------------------------
Assignment finalize_assignment(const RobinsModel& model, const SimState& state,
                               const std::vector<SliceRequest>& arrivals, const Topology& topo,
                               const PathTable& paths, const RobustConfig& cfg,
                               const std::set<SliceKey>& accepted,
                               const std::map<VmKey, int>& placements,
                               const std::map<VlKey, PathRef>& embeddings, AssignmentEval* out_eval) {
    Assignment a;
    a.accepted = accepted;
    a.placements = placements;
    a.embeddings = embeddings;
    a.eta = static_cast<int>(arrivals.size()) - static_cast<int>(accepted.size());
    AssignmentEval ev =
        evaluate_assignment(state, arrivals, topo, paths, cfg, a, model.eta_weight);
    a.activated_nodes = ev.newly_on_nodes;
    a.activated_links = ev.links_in_use;
    a.objective_value = ev.objective;
    if (out_eval) *out_eval = ev;
    return a;
}

// Reads an integral delta/pi/xi labeling out of variable values.
bool extract_choices(const RobinsModel& model, const std::vector<double>& value,
                     std::set<SliceKey>& accepted, std::map<VmKey, int>& placements,
                     std::map<VlKey, PathRef>& embeddings) {
    const VarCatalog& cat = model.vars;
    for (const SliceVars& sv : cat.slices) {
        double d = value[static_cast<std::size_t>(sv.delta)];
        if (std::abs(d - std::round(d)) > kIntTol) return false;
        bool acc = std::round(d) > 0.5;
        if (acc) accepted.insert(sv.key);
        for (const VmVars& vv : sv.vms) {
            int host = -1;
            for (std::size_t n = 0; n < vv.pi.size(); ++n) {
                double v = value[static_cast<std::size_t>(vv.pi[n])];
                if (std::abs(v - std::round(v)) > kIntTol) return false;
                if (std::round(v) > 0.5) {
                    if (host >= 0) return false;
                    host = static_cast<int>(n);
                }
            }
            if (acc == (host < 0)) return false;
            if (host >= 0) placements[vv.key] = host;
        }
        for (const VlVars& ev : sv.vls) {
            int found = -1;
            for (std::size_t i = 0; i < ev.xi.size(); ++i) {
                double v = value[static_cast<std::size_t>(ev.xi[i].var)];
                if (std::abs(v - std::round(v)) > kIntTol) return false;
                if (std::round(v) > 0.5) {
                    if (found >= 0) return false;
                    found = static_cast<int>(i);
                }
            }
            if (acc == (found < 0)) return false;
            if (found >= 0) {
                const XiEntry& xe = ev.xi[static_cast<std::size_t>(found)];
                embeddings[ev.key] = PathRef{xe.from, xe.to, xe.path_index};
            }
        }
    }
    return true;
}

struct BnbNode {
    std::shared_ptr<BnbNode> parent;
    int fix_var = -1;
    double fix_val = 0.0;
    double bound = 0.0;
    long seq = 0;
    int depth = 0;
};

using NodePtr = std::shared_ptr<BnbNode>;

void materialize_bounds(const NodePtr& node, std::vector<double>& lb, std::vector<double>& ub) {
    for (const BnbNode* n = node.get(); n; n = n->parent.get()) {
        if (n->fix_var < 0) continue;
        lb[static_cast<std::size_t>(n->fix_var)] = n->fix_val;
        ub[static_cast<std::size_t>(n->fix_var)] = n->fix_val;
    }
}

} // namespace

Solution solve_exact(const RobinsModel& model, const SimState& state,
                     const std::vector<SliceRequest>& arrivals, const Topology& topo,
                     const PathTable& paths, const RobustConfig& cfg,
                     const SolverConfig& solver_cfg) {
    solver_cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const VarCatalog& cat = model.vars;
    const int nv = static_cast<int>(cat.defs.size());
    std::vector<double> root_lb(static_cast<std::size_t>(nv)), root_ub(static_cast<std::size_t>(nv));
    for (int j = 0; j < nv; ++j) {
        root_lb[static_cast<std::size_t>(j)] = cat.defs[static_cast<std::size_t>(j)].lb;
        root_ub[static_cast<std::size_t>(j)] = cat.defs[static_cast<std::size_t>(j)].ub;
    }

    Solution sol;
    // All-reject warm start: always feasible, gives the initial upper bound.
    sol.assignment = finalize_assignment(model, state, arrivals, topo, paths, cfg, {}, {}, {},
                                         nullptr);
    double incumbent = sol.assignment.objective_value;
    sol.stats.incumbent_history.push_back(incumbent);

    auto branchable = [&](int j) {
        VarClass c = cat.clazz[static_cast<std::size_t>(j)];
        return c == VarClass::Delta || c == VarClass::Pi || c == VarClass::Xi;
    };

    // Best-first: smallest parent bound wins, insertion order breaks ties.
    auto cmp = [](const NodePtr& a, const NodePtr& b) {
        if (a->bound != b->bound) return a->bound > b->bound;
        return a->seq > b->seq;
    };
    std::priority_queue<NodePtr, std::vector<NodePtr>, decltype(cmp)> heap(cmp);
    std::vector<NodePtr> stack;
    long seq = 0;
    auto push = [&](NodePtr n) {
        if (solver_cfg.order == SearchOrder::BestFirst)
            heap.push(std::move(n));
        else
            stack.push_back(std::move(n));
    };
    auto pop = [&]() -> NodePtr {
        if (solver_cfg.order == SearchOrder::BestFirst) {
            NodePtr n = heap.top();
            heap.pop();
            return n;
        }
        NodePtr n = stack.back();
        stack.pop_back();
        return n;
    };
    auto open_empty = [&] {
        return solver_cfg.order == SearchOrder::BestFirst ? heap.empty() : stack.empty();
    };
    auto min_open_bound = [&]() -> double {
        if (solver_cfg.order == SearchOrder::BestFirst)
            return heap.empty() ? incumbent : heap.top()->bound;
        double b = incumbent;
        for (const NodePtr& n : stack) b = std::min(b, n->bound);
        return b;
    };

    auto root = std::make_shared<BnbNode>();
    root->bound = 0.0;  // every objective term is nonnegative
    root->seq = seq++;
    push(root);

    bool limited = false;
    std::vector<double> lb, ub, value;
    while (!open_empty()) {
        double gap_abs = solver_cfg.gap_tolerance * std::max(1.0, std::abs(incumbent));
        if (solver_cfg.order == SearchOrder::BestFirst &&
            min_open_bound() >= incumbent - gap_abs)
            break;  // proven within gap
        if (sol.stats.nodes >= solver_cfg.node_limit || elapsed() > solver_cfg.time_limit_s) {
            limited = true;
            break;
        }
        NodePtr node = pop();
        ++sol.stats.nodes;
        sol.stats.bound_history.push_back(
            std::max(0.0, std::min(node->bound, min_open_bound())));
        if (node->bound >= incumbent - gap_abs) continue;

        lb = root_lb;
        ub = root_ub;
        materialize_bounds(node, lb, ub);
        PresolveResult pre = presolve(model, std::move(lb), std::move(ub), /*integral=*/true);
        if (pre.infeasible) continue;

        // All branchable binaries fixed: the subtree collapses to a single
        // candidate; theta/beta are implied by the embeddings.
        bool all_fixed = true;
        for (int j = 0; j < nv && all_fixed; ++j)
            if (branchable(j) && pre.reduced_of[static_cast<std::size_t>(j)] >= 0)
                all_fixed = false;

        auto try_incumbent = [&](const std::vector<double>& values) {
            std::set<SliceKey> accepted;
            std::map<VmKey, int> placements;
            std::map<VlKey, PathRef> embeddings;
            if (!extract_choices(model, values, accepted, placements, embeddings)) return;
            AssignmentEval ev;
            Assignment cand = finalize_assignment(model, state, arrivals, topo, paths, cfg,
                                                  accepted, placements, embeddings, &ev);
            if (!ev.feasible) return;
            if (cand.objective_value < incumbent - 1e-12) {
                incumbent = cand.objective_value;
                sol.assignment = std::move(cand);
                sol.stats.incumbent_history.push_back(incumbent);
            }
        };

        if (all_fixed) {
            value.assign(pre.lb.begin(), pre.lb.end());
            try_incumbent(value);
            continue;
        }

        // LP relaxation bound.
        double node_bound = node->bound;
        int branch_var = -1;
        bool have_lp = false;
        lp::Result lpres = lp::solve(pre.reduced);
        ++sol.stats.lp_solves;
        sol.stats.lp_iterations += lpres.iterations;
        if (lpres.status == lp::Status::Infeasible) continue;
        if (lpres.status == lp::Status::Optimal) {
            have_lp = true;
            node_bound = std::max(node_bound, pre.offset + lpres.objective);
            if (node_bound >= incumbent - gap_abs) continue;
            // Expand LP values over all variables.
            value.assign(static_cast<std::size_t>(nv), 0.0);
            for (int j = 0; j < nv; ++j) {
                int rj = pre.reduced_of[static_cast<std::size_t>(j)];
                value[static_cast<std::size_t>(j)] =
                    rj < 0 ? pre.lb[static_cast<std::size_t>(j)]
                           : lpres.x[static_cast<std::size_t>(rj)];
            }
            // Most fractional by class priority: delta, then pi, then xi.
            for (VarClass cls : {VarClass::Delta, VarClass::Pi, VarClass::Xi}) {
                double best_frac = kIntTol;
                for (int j = 0; j < nv; ++j) {
                    if (cat.clazz[static_cast<std::size_t>(j)] != cls) continue;
                    if (pre.reduced_of[static_cast<std::size_t>(j)] < 0) continue;
                    double v = value[static_cast<std::size_t>(j)];
                    double frac = std::min(v, 1.0 - v);
                    if (frac > best_frac) {
                        best_frac = frac;
                        branch_var = j;
                    }
                }
                if (branch_var >= 0) break;
            }
            if (branch_var < 0) {
                // Integral on every branchable variable: evaluate and keep
                // searching only if the bound still leaves room.
                try_incumbent(value);
                gap_abs = solver_cfg.gap_tolerance * std::max(1.0, std::abs(incumbent));
                if (node_bound >= incumbent - gap_abs) continue;
            }
        }
        if (branch_var < 0) {
            // No fractional guidance; fix the first open binary by class.
            for (VarClass cls : {VarClass::Delta, VarClass::Pi, VarClass::Xi}) {
                for (int j = 0; j < nv && branch_var < 0; ++j)
                    if (cat.clazz[static_cast<std::size_t>(j)] == cls &&
                        pre.reduced_of[static_cast<std::size_t>(j)] >= 0)
                        branch_var = j;
                if (branch_var >= 0) break;
            }
        }
        if (branch_var < 0) continue;  // nothing left to decide

        double first_val = 1.0;
        if (have_lp)
            first_val = value[static_cast<std::size_t>(branch_var)] >= 0.5 ? 1.0 : 0.0;
        for (int childi = 0; childi < 2; ++childi) {
            auto child = std::make_shared<BnbNode>();
            child->parent = node;
            child->fix_var = branch_var;
            child->fix_val = childi == 0 ? first_val : 1.0 - first_val;
            child->bound = node_bound;
            child->depth = node->depth + 1;
            child->seq = seq++;
            push(std::move(child));
        }
        // Depth-first pops the back, so push the preferred value last.
        if (solver_cfg.order == SearchOrder::DepthFirst && stack.size() >= 2)
            std::swap(stack[stack.size() - 1], stack[stack.size() - 2]);
    }

    sol.stats.wall_time_s = elapsed();
    if (limited && !open_empty()) {
        sol.status = SolveStatus::FeasibleTimeLimited;
        sol.bound = std::max(0.0, min_open_bound());
    } else {
        sol.status = SolveStatus::ProvenOptimal;
        sol.bound = open_empty() ? incumbent : std::max(0.0, min_open_bound());
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle.
// ---------------------------------------------------------------------------
Solution brute_force_optimum(const SimState& state, const std::vector<SliceRequest>& arrivals,
                             const Topology& topo, const PathTable& paths,
                             const RobustConfig& cfg, const ModelOptions& options) {
    cfg.validate();
    const int n_nodes = static_cast<int>(topo.nodes.size());
    const int n_links = static_cast<int>(topo.links.size());
    const double eta_weight = options.resolve_eta_weight(topo);

    // Size guard on the full choice product.
    double product = 1.0;
    int max_paths = 1;
    for (int a = 0; a < n_nodes; ++a)
        for (int b = 0; b < n_nodes; ++b)
            max_paths = std::max(max_paths, static_cast<int>(paths.paths(a, b).size()));
    for (const SliceRequest& req : arrivals) {
        double choices = 1.0;
        for (std::size_t i = 0; i < req.vms.size(); ++i) choices *= n_nodes;
        for (std::size_t i = 0; i < req.vls.size(); ++i) choices *= max_paths;
        product *= 1.0 + choices;
        if (product > 1e7)
            throw SizeGuardError("brute force: choice product exceeds 10^7");
    }

    const int n_slices = static_cast<int>(arrivals.size());
    std::vector<std::vector<const VmSpec*>> node_vms(static_cast<std::size_t>(n_nodes));
    std::vector<std::vector<const VlSpec*>> link_vls(static_cast<std::size_t>(n_links));
    std::vector<char> slice_on(static_cast<std::size_t>(n_slices), 0);
    std::vector<std::vector<int>> host(static_cast<std::size_t>(n_slices));
    std::vector<std::vector<PathRef>> embed(static_cast<std::size_t>(n_slices));
    for (int s = 0; s < n_slices; ++s) {
        host[static_cast<std::size_t>(s)].assign(arrivals[static_cast<std::size_t>(s)].vms.size(),
                                                 -1);
        embed[static_cast<std::size_t>(s)].assign(
            arrivals[static_cast<std::size_t>(s)].vls.size(), PathRef{-1, -1, -1});
    }

    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<char> best_on;
    std::vector<std::vector<int>> best_host;
    std::vector<std::vector<PathRef>> best_embed;
    long leaves = 0;

    auto capacity_ok = [&]() {
        for (int n = 0; n < n_nodes; ++n) {
            ResourceVector load = worst_case_node_load(node_vms[static_cast<std::size_t>(n)],
                                                       cfg.gamma1, cfg.delta1);
            if (!load.all_leq(state.available[static_cast<std::size_t>(n)], 1e-9)) return false;
        }
        for (int l = 0; l < n_links; ++l)
            if (worst_case_link_load(link_vls[static_cast<std::size_t>(l)], cfg.gamma2,
                                     cfg.delta2) >
                state.avail_bw[static_cast<std::size_t>(l)] + 1e-9)
                return false;
        return true;
    };

    auto objective_now = [&]() {
        double obj = 0.0;
        int eta = 0;
        for (int s = 0; s < n_slices; ++s)
            if (!slice_on[static_cast<std::size_t>(s)]) ++eta;
        obj += eta_weight * eta;
        double n_c = 0.0, s_c = 0.0;
        std::vector<char> link_used(static_cast<std::size_t>(n_links), 0);
        for (int l = 0; l < n_links; ++l)
            link_used[static_cast<std::size_t>(l)] =
                !link_vls[static_cast<std::size_t>(l)].empty();
        for (int n = 0; n < n_nodes; ++n) {
            const NodeSpec& spec = topo.nodes[static_cast<std::size_t>(n)];
            ResourceVector load = worst_case_node_load(node_vms[static_cast<std::size_t>(n)],
                                                       cfg.gamma1, cfg.delta1);
            if (spec.capacity.cpu > 0.0)
                n_c += (spec.p_max - spec.p_idle) * (load.cpu / spec.capacity.cpu);
            if (!node_vms[static_cast<std::size_t>(n)].empty() &&
                !state.used_node[static_cast<std::size_t>(n)])
                n_c += spec.p_idle;
            if (spec.capacity.ram > 0.0) obj += load.ram / spec.capacity.ram;
            if (spec.capacity.storage > 0.0) obj += load.storage / spec.capacity.storage;
        }
        for (int l = 0; l < n_links; ++l) {
            if (link_used[static_cast<std::size_t>(l)] &&
                !state.used_link[static_cast<std::size_t>(l)])
                s_c += topo.links[static_cast<std::size_t>(l)].power_weight;
            if (topo.b_total > 0.0)
                obj += worst_case_link_load(link_vls[static_cast<std::size_t>(l)], cfg.gamma2,
                                            cfg.delta2) /
                       topo.b_total;
        }
        if (topo.n_total_power > 0.0) obj += n_c / topo.n_total_power;
        if (topo.s_total_power > 0.0) obj += s_c / topo.s_total_power;
        return obj;
    };

    // Recursive enumeration: per slice, every placement and path choice,
    // rejection last.
    std::function<void(int)> recurse_slice = [&](int s) {
        if (s == n_slices) {
            ++leaves;
            if (!capacity_ok()) return;
            double obj = objective_now();
            if (obj < best_obj - 1e-12) {
                best_obj = obj;
                best_on = slice_on;
                best_host = host;
                best_embed = embed;
            }
            return;
        }
        const SliceRequest& req = arrivals[static_cast<std::size_t>(s)];
        const int n_vms = static_cast<int>(req.vms.size());
        const int n_vls = static_cast<int>(req.vls.size());

        std::function<void(int)> place_vl;
        std::function<void(int)> place_vm = [&](int mi) {
            if (mi == n_vms) {
                place_vl(0);
                return;
            }
            for (int n = 0; n < n_nodes; ++n) {
                host[static_cast<std::size_t>(s)][static_cast<std::size_t>(mi)] = n;
                node_vms[static_cast<std::size_t>(n)].push_back(
                    &req.vms[static_cast<std::size_t>(mi)]);
                place_vm(mi + 1);
                node_vms[static_cast<std::size_t>(n)].pop_back();
                host[static_cast<std::size_t>(s)][static_cast<std::size_t>(mi)] = -1;
            }
        };
        place_vl = [&](int ei) {
            if (ei == n_vls) {
                recurse_slice(s + 1);
                return;
            }
            const VlSpec& vl = req.vls[static_cast<std::size_t>(ei)];
            int ia = -1, ib = -1;
            for (int mi = 0; mi < n_vms; ++mi) {
                if (req.vms[static_cast<std::size_t>(mi)].id == vl.m) ia = mi;
                if (req.vms[static_cast<std::size_t>(mi)].id == vl.m2) ib = mi;
            }
            int from = host[static_cast<std::size_t>(s)][static_cast<std::size_t>(ia)];
            int to = host[static_cast<std::size_t>(s)][static_cast<std::size_t>(ib)];
            const auto& plist = paths.paths(from, to);
            for (int b = 0; b < static_cast<int>(plist.size()); ++b) {
                const Path& path = plist[static_cast<std::size_t>(b)];
                if (path.delay_ms > vl.max_delay_ms + 1e-9) continue;
                embed[static_cast<std::size_t>(s)][static_cast<std::size_t>(ei)] =
                    PathRef{from, to, b};
                for (int l : path.links)
                    link_vls[static_cast<std::size_t>(l)].push_back(&vl);
                place_vl(ei + 1);
                for (int l : path.links) link_vls[static_cast<std::size_t>(l)].pop_back();
                embed[static_cast<std::size_t>(s)][static_cast<std::size_t>(ei)] =
                    PathRef{-1, -1, -1};
            }
        };

        slice_on[static_cast<std::size_t>(s)] = 1;
        place_vm(0);
        slice_on[static_cast<std::size_t>(s)] = 0;
        recurse_slice(s + 1);  // rejection, enumerated last
    };
    recurse_slice(0);

    // Rebuild the winner as a full Assignment.
    std::set<SliceKey> accepted;
    std::map<VmKey, int> placements;
    std::map<VlKey, PathRef> embeddings;
    for (int s = 0; s < n_slices; ++s) {
        if (best_on.empty() || !best_on[static_cast<std::size_t>(s)]) continue;
        const SliceRequest& req = arrivals[static_cast<std::size_t>(s)];
        SliceKey key = SliceKey::of(req);
        accepted.insert(key);
        for (std::size_t mi = 0; mi < req.vms.size(); ++mi)
            placements[VmKey{key, req.vms[mi].id}] =
                best_host[static_cast<std::size_t>(s)][mi];
        for (std::size_t ei = 0; ei < req.vls.size(); ++ei)
            embeddings[VlKey{key, req.vls[ei].id}] =
                best_embed[static_cast<std::size_t>(s)][ei];
    }
    RobinsModel shim;  // only the eta weight is needed for evaluation
    shim.eta_weight = eta_weight;
    Solution sol;
    sol.assignment = finalize_assignment(shim, state, arrivals, topo, paths, cfg, accepted,
                                         placements, embeddings, nullptr);
    sol.status = SolveStatus::ProvenOptimal;
    sol.bound = sol.assignment.objective_value;
    sol.stats.nodes = leaves;
    return sol;
}

// ---------------------------------------------------------------------------
// LP text export.
// ---------------------------------------------------------------------------
namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void append_terms(std::string& out, const std::vector<RowTerm>& terms,
                  const std::vector<VarDef>& defs) {
    // Merge duplicate variables, keeping first-occurrence order.
    std::vector<std::pair<int, double>> merged;
    for (const RowTerm& t : terms) {
        bool found = false;
        for (auto& [var, coef] : merged)
            if (var == t.var) {
                coef += t.coef;
                found = true;
                break;
            }
        if (!found) merged.emplace_back(t.var, t.coef);
    }
    bool first = true;
    std::size_t line_len = out.size() - out.rfind('\n');
    for (const auto& [var, coef] : merged) {
        if (coef == 0.0) continue;
        std::string piece;
        if (coef == 1.0)
            piece = first ? "" : "+ ";
        else if (coef == -1.0)
            piece = "- ";
        else if (coef < 0.0)
            piece = "- " + fmt_num(-coef) + " ";
        else
            piece = (first ? "" : "+ ") + fmt_num(coef) + " ";
        piece += defs[static_cast<std::size_t>(var)].name;
        if (line_len + piece.size() > 200) {
            out += "\n      ";
            line_len = 7;
        } else if (!first) {
            out += " ";
            ++line_len;
        }
        out += piece;
        line_len += piece.size();
        first = false;
    }
    if (first) out += "0";
}

} // namespace

std::string export_lp(const RobinsModel& model) {
    const auto& defs = model.vars.defs;
    std::string out;
    out += "\\ ROBINS per-slot admission model\n";
    out += "\\ rows are named by constraint family\n";
    out += "Minimize\n obj: ";
    {
        std::vector<RowTerm> obj_terms;
        for (int j = 0; j < static_cast<int>(defs.size()); ++j)
            if (defs[static_cast<std::size_t>(j)].obj != 0.0)
                obj_terms.push_back({j, defs[static_cast<std::size_t>(j)].obj});
        append_terms(out, obj_terms, defs);
    }
    out += "\nSubject To\n";
    for (const ModelRow& row : model.rows) {
        out += " " + row.tag + ": ";
        append_terms(out, row.terms, defs);
        out += row.sense == Sense::LE ? " <= " : row.sense == Sense::EQ ? " = " : " >= ";
        out += fmt_num(row.rhs);
        out += "\n";
    }
    out += "Bounds\n";
    for (const VarDef& d : defs) {
        if (d.kind == VarKind::Binary) continue;  // declared below
        if (d.lb == 0.0 && d.ub >= kInf) continue;  // LP default
        if (d.ub >= kInf)
            out += " " + d.name + " >= " + fmt_num(d.lb) + "\n";
        else
            out += " " + fmt_num(d.lb) + " <= " + d.name + " <= " + fmt_num(d.ub) + "\n";
    }
    bool any_bin = false;
    for (const VarDef& d : defs)
        if (d.kind == VarKind::Binary) any_bin = true;
    if (any_bin) {
        out += "Binaries\n";
        std::size_t line_len = 0;
        for (const VarDef& d : defs) {
            if (d.kind != VarKind::Binary) continue;
            if (line_len == 0) {
                out += " ";
                line_len = 1;
            } else if (line_len + d.name.size() + 1 > 200) {
                out += "\n ";
                line_len = 1;
            } else {
                out += " ";
                ++line_len;
            }
            out += d.name;
            line_len += d.name.size();
        }
        out += "\n";
    }
    out += "End\n";
    return out;
}

} // namespace onsu
