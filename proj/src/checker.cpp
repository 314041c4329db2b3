#include "onsu/checker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace onsu {

namespace {

constexpr double kTol = 1e-9;

const SliceRequest* find_request(const std::vector<SliceRequest>& arrivals, const SliceKey& key) {
    for (const SliceRequest& req : arrivals)
        if (SliceKey::of(req) == key) return &req;
    return nullptr;
}

} // namespace

AssignmentEval evaluate_assignment(const SimState& state,
                                   const std::vector<SliceRequest>& arrivals,
                                   const Topology& topo, const PathTable& paths,
                                   const RobustConfig& cfg, const Assignment& assignment,
                                   double eta_weight) {
    const int n_nodes = static_cast<int>(topo.nodes.size());
    const int n_links = static_cast<int>(topo.links.size());
    AssignmentEval ev;
    ev.node_load.assign(static_cast<std::size_t>(n_nodes), {});
    ev.link_load.assign(static_cast<std::size_t>(n_links), 0.0);
    ev.eta = static_cast<int>(arrivals.size()) - static_cast<int>(assignment.accepted.size());

    // Collect per-node VM sets and per-link VL sets from the decisions.
    std::vector<std::vector<const VmSpec*>> vms_by_node(static_cast<std::size_t>(n_nodes));
    std::vector<std::vector<const VlSpec*>> vls_by_link(static_cast<std::size_t>(n_links));
    for (const auto& [vm_key, node] : assignment.placements) {
        const SliceRequest* req = find_request(arrivals, vm_key.slice);
        if (!req || node < 0 || node >= n_nodes) {
            ev.feasible = false;
            continue;
        }
        vms_by_node[static_cast<std::size_t>(node)].push_back(&req->vm(vm_key.vm));
        ev.hosts.insert(node);
    }
    for (const auto& [vl_key, pref] : assignment.embeddings) {
        const SliceRequest* req = find_request(arrivals, vl_key.slice);
        if (!req) {
            ev.feasible = false;
            continue;
        }
        const VlSpec* spec = nullptr;
        for (const VlSpec& vl : req->vls)
            if (vl.id == vl_key.vl) spec = &vl;
        if (!spec || pref.from < 0 || pref.from >= n_nodes || pref.to < 0 || pref.to >= n_nodes) {
            ev.feasible = false;
            continue;
        }
        const auto& plist = paths.paths(pref.from, pref.to);
        if (pref.index < 0 || pref.index >= static_cast<int>(plist.size())) {
            ev.feasible = false;
            continue;
        }
        const Path& path = plist[static_cast<std::size_t>(pref.index)];
        if (path.delay_ms > spec->max_delay_ms + kTol) ev.feasible = false;
        for (int l : path.links) {
            vls_by_link[static_cast<std::size_t>(l)].push_back(spec);
            ev.links_in_use.insert(l);
        }
    }

    // Robust loads against the remaining capacities.
    for (int n = 0; n < n_nodes; ++n) {
        ev.node_load[static_cast<std::size_t>(n)] = worst_case_node_load(
            vms_by_node[static_cast<std::size_t>(n)], cfg.gamma1, cfg.delta1);
        if (!ev.node_load[static_cast<std::size_t>(n)].all_leq(
                state.available[static_cast<std::size_t>(n)], kTol))
            ev.feasible = false;
    }
    for (int l = 0; l < n_links; ++l) {
        ev.link_load[static_cast<std::size_t>(l)] = worst_case_link_load(
            vls_by_link[static_cast<std::size_t>(l)], cfg.gamma2, cfg.delta2);
        if (ev.link_load[static_cast<std::size_t>(l)] >
            state.avail_bw[static_cast<std::size_t>(l)] + kTol)
            ev.feasible = false;
    }

    // Slot power: utilization share over total capacity plus idle power of
    // nodes switched on now; switch power from newly activated links only.
    for (int n : ev.hosts)
        if (!state.used_node[static_cast<std::size_t>(n)]) ev.newly_on_nodes.insert(n);
    for (int n = 0; n < n_nodes; ++n) {
        const NodeSpec& spec = topo.nodes[static_cast<std::size_t>(n)];
        if (spec.capacity.cpu > 0.0)
            ev.n_c += (spec.p_max - spec.p_idle) *
                      (ev.node_load[static_cast<std::size_t>(n)].cpu / spec.capacity.cpu);
    }
    for (int n : ev.newly_on_nodes) ev.n_c += topo.nodes[static_cast<std::size_t>(n)].p_idle;
    for (int l : ev.links_in_use)
        if (!state.used_link[static_cast<std::size_t>(l)])
            ev.s_c += topo.links[static_cast<std::size_t>(l)].power_weight;

    ev.objective = eta_weight * static_cast<double>(ev.eta);
    if (topo.n_total_power > 0.0) ev.objective += ev.n_c / topo.n_total_power;
    if (topo.s_total_power > 0.0) ev.objective += ev.s_c / topo.s_total_power;
    for (int n = 0; n < n_nodes; ++n) {
        const ResourceVector& cap = topo.nodes[static_cast<std::size_t>(n)].capacity;
        if (cap.ram > 0.0)
            ev.objective += ev.node_load[static_cast<std::size_t>(n)].ram / cap.ram;
        if (cap.storage > 0.0)
            ev.objective += ev.node_load[static_cast<std::size_t>(n)].storage / cap.storage;
    }
    if (topo.b_total > 0.0)
        for (int l = 0; l < n_links; ++l)
            ev.objective += ev.link_load[static_cast<std::size_t>(l)] / topo.b_total;
    return ev;
}

std::vector<Violation> check_solution(const SimState& state,
                                      const std::vector<SliceRequest>& arrivals,
                                      const Topology& topo, const PathTable& paths,
                                      const RobustConfig& cfg, const Assignment& assignment,
                                      double eta_weight) {
    std::vector<Violation> out;
    auto violate = [&](std::string family, std::string entity, std::string detail) {
        out.push_back(Violation{std::move(family), std::move(entity), std::move(detail)});
    };

    // References resolve.
    for (const SliceKey& key : assignment.accepted)
        if (!find_request(arrivals, key))
            violate("REF", std::to_string(key.tenant) + "." + std::to_string(key.slice),
                    "accepted slice is not among the arrivals");

    // C1: rejected count.
    int expected_eta =
        static_cast<int>(arrivals.size()) - static_cast<int>(assignment.accepted.size());
    if (assignment.eta != expected_eta)
        violate("C1", "eta",
                "eta = " + std::to_string(assignment.eta) + ", rejected count = " +
                    std::to_string(expected_eta));

    // C2: accepted slices fully placed, exactly one node per VM; rejected
    // slices own nothing.
    std::map<VmKey, int> host;
    for (const auto& [vm_key, node] : assignment.placements) host[vm_key] = node;
    for (const SliceRequest& req : arrivals) {
        SliceKey key = SliceKey::of(req);
        bool accepted = assignment.accepted.contains(key);
        for (const VmSpec& vm : req.vms) {
            auto it = host.find(VmKey{key, vm.id});
            if (accepted && it == host.end())
                violate("C2", req.key(), "VM " + std::to_string(vm.id) + " is not placed");
            if (!accepted && it != host.end())
                violate("C2", req.key(),
                        "rejected slice has VM " + std::to_string(vm.id) + " placed");
            if (it != host.end() &&
                (it->second < 0 || it->second >= static_cast<int>(topo.nodes.size())))
                violate("REF", req.key(), "placement on unknown node index");
        }
        // C3/C4: every VL of an accepted slice on exactly one path whose
        // endpoints are the hosts of its endpoint VMs.
        for (const VlSpec& vl : req.vls) {
            auto it = assignment.embeddings.find(VlKey{key, vl.id});
            if (!accepted) {
                if (it != assignment.embeddings.end())
                    violate("C3", req.key(),
                            "rejected slice has VL " + std::to_string(vl.id) + " embedded");
                continue;
            }
            if (it == assignment.embeddings.end()) {
                violate("C3", req.key(), "VL " + std::to_string(vl.id) + " is not embedded");
                continue;
            }
            const PathRef& pref = it->second;
            const auto& plist = paths.paths(pref.from, pref.to);
            if (pref.index < 0 || pref.index >= static_cast<int>(plist.size())) {
                violate("REF", req.key(), "embedding references a missing path");
                continue;
            }
            auto a = host.find(VmKey{key, vl.m});
            auto b = host.find(VmKey{key, vl.m2});
            if (a == host.end() || b == host.end() || a->second != pref.from ||
                b->second != pref.to)
                violate("C4", req.key(),
                        "VL " + std::to_string(vl.id) + " path endpoints differ from its hosts");
            // C9: delay cap.
            const Path& path = plist[static_cast<std::size_t>(pref.index)];
            if (path.delay_ms > vl.max_delay_ms + 1e-9)
                violate("C9", req.key(),
                        "VL " + std::to_string(vl.id) + " delay " + std::to_string(path.delay_ms) +
                            " ms exceeds " + std::to_string(vl.max_delay_ms) + " ms");
        }
    }

    AssignmentEval ev =
        evaluate_assignment(state, arrivals, topo, paths, cfg, assignment, eta_weight);

    // C5/C6: robust node usage within remaining capacity.
    for (std::size_t n = 0; n < topo.nodes.size(); ++n)
        if (!ev.node_load[n].all_leq(state.available[n], 1e-9))
            violate("C6", topo.nodes[n].id, "robust load exceeds available resources");
    // C7/C8: robust link usage within remaining bandwidth.
    for (std::size_t l = 0; l < topo.links.size(); ++l)
        if (ev.link_load[l] > state.avail_bw[l] + 1e-9)
            violate("C8", topo.links[l].id, "robust load exceeds available bandwidth");

    // C11/C12: the activated-node set is exactly the previously unused hosts.
    if (assignment.activated_nodes != ev.newly_on_nodes)
        violate("C12", "-", "activated node set differs from newly used hosts");
    // C13: the activated-link set is exactly the links carrying new VLs.
    if (assignment.activated_links != ev.links_in_use)
        violate("C13", "-", "activated link set differs from links in use");

    if (std::abs(assignment.objective_value - ev.objective) > 1e-6)
        violate("OBJ", "-",
                "recorded objective " + std::to_string(assignment.objective_value) +
                    " differs from recomputed " + std::to_string(ev.objective));
    return out;
}

} // namespace onsu
