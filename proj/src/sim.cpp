#include "onsu/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "onsu/errors.hpp"

namespace onsu {

using nlohmann::json;

SimState SimState::fresh(const Topology& topo) {
    SimState s;
    s.available.reserve(topo.nodes.size());
    for (const NodeSpec& n : topo.nodes) s.available.push_back(n.capacity);
    for (const LinkSpec& l : topo.links) s.avail_bw.push_back(l.bandwidth_mbps);
    s.used_node.assign(topo.nodes.size(), 0);
    s.used_link.assign(topo.links.size(), 0);
    s.clock = 0;
    return s;
}

const VmSpec& SimState::vm_spec(const VmKey& key) const {
    auto it = active_slices.find(key.slice);
    if (it == active_slices.end()) throw InternalError("vm_spec: slice not active");
    return it->second.request.vm(key.vm);
}

const VlSpec& SimState::vl_spec(const VlKey& key) const {
    auto it = active_slices.find(key.slice);
    if (it == active_slices.end()) throw InternalError("vl_spec: slice not active");
    for (const VlSpec& vl : it->second.request.vls)
        if (vl.id == key.vl) return vl;
    throw InternalError("vl_spec: VL not in slice");
}

std::vector<const VmSpec*> SimState::vms_on_node(int node) const {
    std::vector<const VmSpec*> out;
    for (const auto& [key, n] : placements)
        if (n == node) out.push_back(&vm_spec(key));
    return out;
}

std::vector<const VlSpec*> SimState::vls_on_link(int link) const {
    std::vector<const VlSpec*> out;
    for (const auto& [key, links] : embeddings)
        if (std::find(links.begin(), links.end(), link) != links.end())
            out.push_back(&vl_spec(key));
    return out;
}

void SimState::refresh_derived(const Topology& topo) {
    // Availability from first principles, in a fixed order: capacity minus
    // placed nominals minus ledgered protection. With no holdings left this
    // restores the exact capacity values.
    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        available[n] = topo.nodes[n].capacity;
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        avail_bw[l] = topo.links[l].bandwidth_mbps;
    for (const auto& [key, node] : placements)
        available[static_cast<std::size_t>(node)] -= vm_spec(key).nominal;
    for (const auto& [key, links] : embeddings) {
        const VlSpec& vl = vl_spec(key);
        for (int l : links) avail_bw[static_cast<std::size_t>(l)] -= vl.nominal_rate;
    }
    for (const auto& [slot, per_node] : node_reservations)
        for (std::size_t n = 0; n < per_node.size(); ++n) available[n] -= per_node[n];
    for (const auto& [slot, per_link] : link_reservations)
        for (std::size_t l = 0; l < per_link.size(); ++l) avail_bw[l] -= per_link[l];

    // Power of the standing state: utilization share plus idle power per
    // active node, cumulative link weight per active link.
    power_used_nodes = 0.0;
    power_used_switches = 0.0;
    for (std::size_t n = 0; n < topo.nodes.size(); ++n) {
        if (!used_node[n]) continue;
        const NodeSpec& spec = topo.nodes[n];
        double held_cpu = spec.capacity.cpu - available[n].cpu;
        power_used_nodes += spec.p_idle;
        if (spec.capacity.cpu > 0.0)
            power_used_nodes += (spec.p_max - spec.p_idle) * (held_cpu / spec.capacity.cpu);
    }
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (used_link[l]) power_used_switches += topo.links[l].power_weight;
}

ReleaseSummary release_expired(SimState& state, const Topology& topo) {
    ReleaseSummary summary;

    // Expire or age the active slices.
    for (auto it = state.active_slices.begin(); it != state.active_slices.end();) {
        ActiveSlice& act = it->second;
        if (!act.request.permanent && act.remaining == 0) {
            SliceKey key = it->first;
            summary.released.push_back(key);
            for (const VmSpec& vm : act.request.vms)
                state.placements.erase(VmKey{key, vm.id});
            for (const VlSpec& vl : act.request.vls)
                state.embeddings.erase(VlKey{key, vl.id});
            it = state.active_slices.erase(it);
        } else {
            if (!act.request.permanent) --act.remaining;
            ++it;
        }
    }

    // Clear flags of emptied nodes and links.
    std::vector<char> node_busy(topo.nodes.size(), 0);
    std::vector<char> link_busy(topo.links.size(), 0);
    for (const auto& [key, node] : state.placements)
        node_busy[static_cast<std::size_t>(node)] = 1;
    for (const auto& [key, links] : state.embeddings)
        for (int l : links) link_busy[static_cast<std::size_t>(l)] = 1;
    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        if (!node_busy[n]) state.used_node[n] = 0;
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (!link_busy[l]) state.used_link[l] = 0;

    // Free the ledgers of admission slots whose slices have all expired.
    for (auto it = state.admitted_by_slot.begin(); it != state.admitted_by_slot.end();) {
        bool all_gone = true;
        for (const SliceKey& key : it->second)
            if (state.active_slices.contains(key)) {
                all_gone = false;
                break;
            }
        if (all_gone) {
            summary.ledger_slots_freed.push_back(it->first);
            state.node_reservations.erase(it->first);
            state.link_reservations.erase(it->first);
            it = state.admitted_by_slot.erase(it);
        } else {
            ++it;
        }
    }

    state.refresh_derived(topo);
    return summary;
}

void commit(SimState& state, const Assignment& assignment,
            const std::vector<SliceRequest>& arrivals, int slot, const Topology& topo,
            const PathTable& paths, const RobustConfig& cfg) {
    if (assignment.accepted.empty()) {
        state.clock = slot;
        state.refresh_derived(topo);
        return;
    }

    // This slot's own additions, the basis of the protection ledger.
    std::vector<std::vector<const VmSpec*>> new_vms(topo.nodes.size());
    std::vector<std::vector<const VlSpec*>> new_vls(topo.links.size());

    // Register accepted slices and their holdings.
    for (const SliceKey& key : assignment.accepted) {
        const SliceRequest* req = nullptr;
        for (const SliceRequest& r : arrivals)
            if (SliceKey::of(r) == key) req = &r;
        if (!req) throw InternalError("commit: accepted slice not among arrivals");
        ActiveSlice act;
        act.request = *req;
        act.remaining = req->permanent ? 0 : req->lifespan;
        act.admitted_slot = slot;
        state.active_slices.emplace(key, std::move(act));
        state.admitted_by_slot[slot].insert(key);
        for (const VmSpec& vm : req->vms) {
            auto it = assignment.placements.find(VmKey{key, vm.id});
            if (it == assignment.placements.end())
                throw InternalError("commit: accepted VM without placement");
            state.placements[it->first] = it->second;
            state.used_node[static_cast<std::size_t>(it->second)] = 1;
            new_vms[static_cast<std::size_t>(it->second)].push_back(
                &state.active_slices.at(key).request.vm(vm.id));
        }
        for (const VlSpec& vl : req->vls) {
            auto it = assignment.embeddings.find(VlKey{key, vl.id});
            if (it == assignment.embeddings.end())
                throw InternalError("commit: accepted VL without embedding");
            const PathRef& pref = it->second;
            const auto& plist = paths.paths(pref.from, pref.to);
            if (pref.index < 0 || pref.index >= static_cast<int>(plist.size()))
                throw InternalError("commit: embedding references a missing path");
            const std::vector<int>& links = plist[static_cast<std::size_t>(pref.index)].links;
            state.embeddings[it->first] = links;
            const ActiveSlice& act = state.active_slices.at(key);
            for (const VlSpec& stored : act.request.vls)
                if (stored.id == vl.id)
                    for (int l : links) {
                        state.used_link[static_cast<std::size_t>(l)] = 1;
                        new_vls[static_cast<std::size_t>(l)].push_back(&stored);
                    }
        }
    }

    // Protection ledger for this admission slot: the worst-case deviation of
    // the slot's own arrivals, exactly what C5-1/C7-1 reserved against the
    // remaining capacity. Per-cohort sums cover the union worst case until
    // the whole cohort expires and the entry is returned.
    std::vector<ResourceVector> node_delta(topo.nodes.size());
    bool any_node = false;
    for (std::size_t n = 0; n < topo.nodes.size(); ++n) {
        ResourceVector wc = worst_case_node_load(new_vms[n], cfg.gamma1, cfg.delta1);
        ResourceVector nominal;
        for (const VmSpec* vm : new_vms[n]) nominal += vm->nominal;
        node_delta[n] = wc - nominal;
        if (node_delta[n].cpu > 0.0 || node_delta[n].ram > 0.0 || node_delta[n].storage > 0.0)
            any_node = true;
    }
    if (any_node) state.node_reservations[slot] = std::move(node_delta);

    std::vector<double> link_delta(topo.links.size(), 0.0);
    bool any_link = false;
    for (std::size_t l = 0; l < topo.links.size(); ++l) {
        double wc = worst_case_link_load(new_vls[l], cfg.gamma2, cfg.delta2);
        double nominal = 0.0;
        for (const VlSpec* vl : new_vls[l]) nominal += vl->nominal_rate;
        link_delta[l] = wc - nominal;
        if (link_delta[l] > 0.0) any_link = true;
    }
    if (any_link) state.link_reservations[slot] = std::move(link_delta);

    state.clock = slot;
    state.refresh_derived(topo);

    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        if (!state.available[n].nonnegative(1e-6))
            throw InternalError("commit: node " + topo.nodes[n].id +
                                " over-committed after commit");
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (state.avail_bw[l] < -1e-6)
            throw InternalError("commit: link " + topo.links[l].id +
                                " over-committed after commit");
}

Assignment admit(SimState& state, const std::vector<SliceRequest>& arrivals, AdmitMode mode,
                 const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                 const SolverConfig& solver_cfg, const ModelOptions& options) {
    Assignment assignment;
    if (arrivals.empty()) {
        AssignmentEval ev = evaluate_assignment(state, arrivals, topo, paths, cfg, assignment,
                                                options.resolve_eta_weight(topo));
        assignment.objective_value = ev.objective;
        return assignment;
    }
    if (mode == AdmitMode::Heuristic) {
        assignment = nea_onsu_admit(state, arrivals, topo, paths, cfg, options);
    } else {
        RobinsModel model = build_model(state, arrivals, topo, paths, cfg, options);
        Solution sol = solve_exact(model, state, arrivals, topo, paths, cfg, solver_cfg);
        assignment = std::move(sol.assignment);
    }
    auto violations = check_solution(state, arrivals, topo, paths, cfg, assignment,
                                     options.resolve_eta_weight(topo));
    if (!violations.empty())
        throw InternalError("admit: engine produced an invalid assignment (" +
                            violations.front().family + " on " + violations.front().entity +
                            ": " + violations.front().detail + ")");
    return assignment;
}

void audit_state(const SimState& state, const Topology& topo) {
    for (std::size_t n = 0; n < topo.nodes.size(); ++n) {
        if (!state.available[n].nonnegative(1e-6))
            throw InternalError("audit: negative availability on node " + topo.nodes[n].id);
        if (!state.available[n].all_leq(topo.nodes[n].capacity, 1e-6))
            throw InternalError("audit: availability above capacity on node " +
                                topo.nodes[n].id);
    }
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (state.avail_bw[l] < -1e-6 ||
            state.avail_bw[l] > topo.links[l].bandwidth_mbps + 1e-6)
            throw InternalError("audit: bandwidth out of range on link " + topo.links[l].id);

    // Flags match holdings.
    std::vector<char> node_busy(topo.nodes.size(), 0);
    std::vector<char> link_busy(topo.links.size(), 0);
    for (const auto& [key, node] : state.placements)
        node_busy[static_cast<std::size_t>(node)] = 1;
    for (const auto& [key, links] : state.embeddings)
        for (int l : links) link_busy[static_cast<std::size_t>(l)] = 1;
    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        if (node_busy[n] && !state.used_node[n])
            throw InternalError("audit: node hosts VMs but is not flagged used");
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (link_busy[l] && !state.used_link[l])
            throw InternalError("audit: link carries VLs but is not flagged used");

    // Ledgers nonnegative.
    for (const auto& [slot, per_node] : state.node_reservations)
        for (const ResourceVector& rv : per_node)
            if (!rv.nonnegative())
                throw InternalError("audit: negative node reservation in slot " +
                                    std::to_string(slot));
    for (const auto& [slot, per_link] : state.link_reservations)
        for (double v : per_link)
            if (v < 0.0)
                throw InternalError("audit: negative link reservation in slot " +
                                    std::to_string(slot));

    // Power totals match a recomputation.
    SimState copy = state;
    copy.refresh_derived(topo);
    if (std::abs(copy.power_used_nodes - state.power_used_nodes) > 1e-6 ||
        std::abs(copy.power_used_switches - state.power_used_switches) > 1e-6)
        throw InternalError("audit: cached power totals diverge from recomputation");
}

SimulationResult run_simulation(const Topology& topo, const PathTable& paths,
                                const ArrivalSchedule& schedule, const SimulationOptions& opts) {
    if (schedule.slots.empty()) throw ValidationError("run_simulation: schedule has no slots");
    SimulationResult result;
    SimState state = SimState::fresh(topo);
    const std::vector<SliceRequest> no_arrivals;

    int total_slots = static_cast<int>(schedule.slots.size());
    int slot = 0;
    for (;;) {
        ++slot;
        bool in_schedule = slot <= total_slots;
        if (!in_schedule && !opts.drain_after_schedule) break;
        if (!in_schedule && state.active_slices.empty() && state.node_reservations.empty() &&
            state.link_reservations.empty())
            break;
        if (slot > opts.drain_slot_cap) break;  // permanent slices never drain

        if (slot > 1) release_expired(state, topo);
        const std::vector<SliceRequest>& arrivals =
            in_schedule ? schedule.slots[static_cast<std::size_t>(slot - 1)] : no_arrivals;

        auto t0 = std::chrono::steady_clock::now();
        Assignment assignment =
            admit(state, arrivals, opts.mode, topo, paths, opts.robust, opts.solver, opts.model);
        double admit_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        commit(state, assignment, arrivals, slot, topo, paths, opts.robust);
        if (opts.audit_every_slot) audit_state(state, topo);

        SlotRecord rec;
        rec.slot = slot;
        rec.arrived = static_cast<int>(arrivals.size());
        rec.accepted = static_cast<int>(assignment.accepted.size());
        rec.eta = assignment.eta;
        rec.node_power = state.power_used_nodes;
        rec.switch_power = state.power_used_switches;
        rec.total_power = rec.node_power + rec.switch_power;
        rec.active_servers =
            static_cast<int>(std::count(state.used_node.begin(), state.used_node.end(), 1));
        rec.active_links =
            static_cast<int>(std::count(state.used_link.begin(), state.used_link.end(), 1));
        rec.admit_wall_time = admit_seconds;
        result.metrics.records.push_back(rec);

        ProtectionRecord prot;
        for (const auto& [t, per_node] : state.node_reservations)
            for (const ResourceVector& rv : per_node) {
                prot.node_cpu += rv.cpu;
                prot.node_ram += rv.ram;
                prot.node_stor += rv.storage;
            }
        for (const auto& [t, per_link] : state.link_reservations)
            for (double v : per_link) prot.link_mbps += v;
        result.metrics.protection.push_back(prot);

        result.metrics.total_arrived += rec.arrived;
        result.metrics.total_accepted += rec.accepted;
        result.metrics.sum_objective += assignment.objective_value;
    }

    result.metrics.final_acceptance_ratio =
        acceptance_ratio(result.metrics.total_accepted, result.metrics.total_arrived);
    result.end_state = std::move(state);
    return result;
}

std::string state_to_json(const SimState& state, const Topology& topo) {
    json doc;
    doc["clock"] = state.clock;
    doc["power_used_nodes"] = state.power_used_nodes;
    doc["power_used_switches"] = state.power_used_switches;
    doc["available"] = json::array();
    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        doc["available"].push_back(json{{"id", topo.nodes[n].id},
                                        {"cpu", state.available[n].cpu},
                                        {"ram", state.available[n].ram},
                                        {"storage", state.available[n].storage},
                                        {"used", static_cast<bool>(state.used_node[n])}});
    doc["avail_bw"] = json::array();
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        doc["avail_bw"].push_back(json{{"id", topo.links[l].id},
                                       {"mbps", state.avail_bw[l]},
                                       {"used", static_cast<bool>(state.used_link[l])}});
    doc["active_slices"] = json::array();
    for (const auto& [key, act] : state.active_slices)
        doc["active_slices"].push_back(json{{"tenant", key.tenant},
                                            {"slice", key.slice},
                                            {"remaining", act.remaining},
                                            {"permanent", act.request.permanent},
                                            {"admitted_slot", act.admitted_slot}});
    doc["node_reservations"] = json::object();
    for (const auto& [slot, per_node] : state.node_reservations) {
        json arr = json::array();
        for (const ResourceVector& rv : per_node)
            arr.push_back(json{{"cpu", rv.cpu}, {"ram", rv.ram}, {"storage", rv.storage}});
        doc["node_reservations"][std::to_string(slot)] = std::move(arr);
    }
    doc["link_reservations"] = json::object();
    for (const auto& [slot, per_link] : state.link_reservations)
        doc["link_reservations"][std::to_string(slot)] = per_link;
    return doc.dump(2);
}

} // namespace onsu
