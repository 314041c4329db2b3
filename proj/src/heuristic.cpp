#include "onsu/heuristic.hpp"

#include <algorithm>
#include <cmath>

#include "onsu/robust.hpp"

namespace onsu {

namespace {

// Scalarizes a resource vector against per-node totals for the node sort.
double normalized_sum(const ResourceVector& v, const ResourceVector& denom) {
    double s = 0.0;
    if (denom.cpu > 0.0) s += v.cpu / denom.cpu;
    if (denom.ram > 0.0) s += v.ram / denom.ram;
    if (denom.storage > 0.0) s += v.storage / denom.storage;
    return s;
}

} // namespace

Assignment nea_onsu_admit(const SimState& state, const std::vector<SliceRequest>& arrivals,
                          const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                          const ModelOptions& options, HeuristicCounters* counters) {
    cfg.validate();
    const int n_nodes = static_cast<int>(topo.nodes.size());
    HeuristicCounters local;
    HeuristicCounters& ops = counters ? *counters : local;

    // Mean node capacity, the normalizer for demand-side sort keys.
    ResourceVector mean_cap;
    for (const NodeSpec& n : topo.nodes) mean_cap += n.capacity;
    if (n_nodes > 0) mean_cap = (1.0 / n_nodes) * mean_cap;

    // Nodes in descending order of available capacity, sorted once per slot.
    std::vector<int> sorted_nodes(static_cast<std::size_t>(n_nodes));
    for (int n = 0; n < n_nodes; ++n) sorted_nodes[static_cast<std::size_t>(n)] = n;
    std::stable_sort(sorted_nodes.begin(), sorted_nodes.end(), [&](int a, int b) {
        double ka = normalized_sum(state.available[static_cast<std::size_t>(a)],
                                   topo.nodes[static_cast<std::size_t>(a)].capacity);
        double kb = normalized_sum(state.available[static_cast<std::size_t>(b)],
                                   topo.nodes[static_cast<std::size_t>(b)].capacity);
        if (ka != kb) return ka > kb;
        return topo.nodes[static_cast<std::size_t>(a)].id <
               topo.nodes[static_cast<std::size_t>(b)].id;
    });

    // Slices in descending order of total requested VM resources.
    std::vector<int> slice_order(arrivals.size());
    for (std::size_t i = 0; i < arrivals.size(); ++i) slice_order[i] = static_cast<int>(i);
    auto slice_key_sum = [&](int s) {
        double total = 0.0;
        for (const VmSpec& vm : arrivals[static_cast<std::size_t>(s)].vms)
            total += normalized_sum(vm.nominal, mean_cap);
        return total;
    };
    std::stable_sort(slice_order.begin(), slice_order.end(), [&](int a, int b) {
        double ka = slice_key_sum(a), kb = slice_key_sum(b);
        if (ka != kb) return ka > kb;
        return SliceKey::of(arrivals[static_cast<std::size_t>(a)]) <
               SliceKey::of(arrivals[static_cast<std::size_t>(b)]);
    });

    // Tentative per-slot bookkeeping, on top of the committed state.
    std::vector<std::vector<const VmSpec*>> node_new_vms(static_cast<std::size_t>(n_nodes));
    std::vector<std::vector<const VlSpec*>> link_new_vls(topo.links.size());

    Assignment result;
    for (int s : slice_order) {
        const SliceRequest& req = arrivals[static_cast<std::size_t>(s)];
        SliceKey key = SliceKey::of(req);

        // VMs in descending order of requested capacity.
        std::vector<int> vm_order(req.vms.size());
        for (std::size_t i = 0; i < req.vms.size(); ++i) vm_order[i] = static_cast<int>(i);
        std::stable_sort(vm_order.begin(), vm_order.end(), [&](int a, int b) {
            double ka = normalized_sum(req.vms[static_cast<std::size_t>(a)].nominal, mean_cap);
            double kb = normalized_sum(req.vms[static_cast<std::size_t>(b)].nominal, mean_cap);
            if (ka != kb) return ka > kb;
            return req.vms[static_cast<std::size_t>(a)].id <
                   req.vms[static_cast<std::size_t>(b)].id;
        });

        std::map<int, int> host;  // vm id -> node, tentative for this slice
        std::map<int, PathRef> chosen;  // vl id -> path
        struct Placed {
            const VmSpec* vm;
            int node;
        };
        struct Embedded {
            const VlSpec* vl;
            std::vector<int> links;
        };
        std::vector<Placed> journal_vms;
        std::vector<Embedded> journal_vls;
        bool failed = false;

        auto node_has_room = [&](int n, const VmSpec& vm) {
            ++ops.node_scans;
            auto& list = node_new_vms[static_cast<std::size_t>(n)];
            list.push_back(&vm);
            ResourceVector load = worst_case_node_load(list, cfg.gamma1, cfg.delta1);
            list.pop_back();
            return load.all_leq(state.available[static_cast<std::size_t>(n)]);
        };
        auto place_on = [&](const VmSpec& vm, int n) {
            node_new_vms[static_cast<std::size_t>(n)].push_back(&vm);
            host[vm.id] = n;
            journal_vms.push_back({&vm, n});
        };
        auto path_fits = [&](const Path& path, const VlSpec& vl) {
            ++ops.path_scans;
            if (path.delay_ms > vl.max_delay_ms) return false;
            for (int l : path.links) {
                ++ops.link_checks;
                auto& list = link_new_vls[static_cast<std::size_t>(l)];
                list.push_back(&vl);
                double load = worst_case_link_load(list, cfg.gamma2, cfg.delta2);
                list.pop_back();
                if (load > state.avail_bw[static_cast<std::size_t>(l)]) return false;
            }
            return true;
        };
        auto embed_on = [&](const VlSpec& vl, int from, int to, int index,
                            const std::vector<int>& links) {
            for (int l : links) link_new_vls[static_cast<std::size_t>(l)].push_back(&vl);
            chosen[vl.id] = PathRef{from, to, index};
            journal_vls.push_back({&vl, links});
        };
        auto first_node_with_room = [&](const VmSpec& vm) {
            for (int n : sorted_nodes)
                if (node_has_room(n, vm)) return n;
            return -1;
        };

        for (int mi : vm_order) {
            if (failed) break;
            const VmSpec& vm = req.vms[static_cast<std::size_t>(mi)];
            if (!host.contains(vm.id)) {
                int n = first_node_with_room(vm);
                if (n < 0) {
                    failed = true;
                    break;
                }
                place_on(vm, n);
            }
            // Serve every VL touching this VM that is still unembedded.
            for (const VlSpec& vl : req.vls) {
                if (failed) break;
                if (vl.m != vm.id && vl.m2 != vm.id) continue;
                if (chosen.contains(vl.id)) continue;
                int peer_id = vl.m == vm.id ? vl.m2 : vl.m;
                // Path endpoints follow the VL's own (m, m') orientation.
                auto endpoints = [&](int n_m, int n_m2) {
                    return vl.m == vm.id ? std::pair{n_m, n_m2} : std::pair{n_m2, n_m};
                };
                if (host.contains(peer_id)) {
                    auto [from, to] = endpoints(host[vm.id], host[peer_id]);
                    const auto& plist = paths.paths(from, to);
                    bool done = false;
                    for (int b = 0; b < static_cast<int>(plist.size()) && !done; ++b)
                        if (path_fits(plist[static_cast<std::size_t>(b)], vl)) {
                            embed_on(vl, from, to, b, plist[static_cast<std::size_t>(b)].links);
                            done = true;
                        }
                    if (!done) failed = true;
                } else {
                    const VmSpec& peer = req.vm(peer_id);
                    bool done = false;
                    for (int n2 : sorted_nodes) {
                        if (done) break;
                        if (!node_has_room(n2, peer)) continue;
                        auto [from, to] = endpoints(host[vm.id], n2);
                        const auto& plist = paths.paths(from, to);
                        for (int b = 0; b < static_cast<int>(plist.size()) && !done; ++b)
                            if (path_fits(plist[static_cast<std::size_t>(b)], vl)) {
                                place_on(peer, n2);
                                embed_on(vl, from, to, b,
                                         plist[static_cast<std::size_t>(b)].links);
                                done = true;
                            }
                    }
                    if (!done) failed = true;
                }
            }
        }

        if (failed) {
            // Roll back every tentative allocation of this slice.
            for (const Embedded& e : journal_vls)
                for (int l : e.links) {
                    auto& list = link_new_vls[static_cast<std::size_t>(l)];
                    list.erase(std::find(list.begin(), list.end(), e.vl));
                }
            for (const Placed& p : journal_vms) {
                auto& list = node_new_vms[static_cast<std::size_t>(p.node)];
                list.erase(std::find(list.begin(), list.end(), p.vm));
            }
            continue;
        }
        result.accepted.insert(key);
        for (const auto& [vm_id, node] : host) result.placements[VmKey{key, vm_id}] = node;
        for (const auto& [vl_id, pref] : chosen) result.embeddings[VlKey{key, vl_id}] = pref;
    }

    result.eta = static_cast<int>(arrivals.size()) - static_cast<int>(result.accepted.size());
    AssignmentEval ev = evaluate_assignment(state, arrivals, topo, paths, cfg, result,
                                            options.resolve_eta_weight(topo));
    result.activated_nodes = ev.newly_on_nodes;
    result.activated_links = ev.links_in_use;
    result.objective_value = ev.objective;
    return result;
}

} // namespace onsu
