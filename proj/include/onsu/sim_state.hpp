#ifndef ONSU_SIM_STATE_HPP
#define ONSU_SIM_STATE_HPP

#include <map>
#include <vector>

#include "onsu/assignment.hpp"
#include "onsu/resources.hpp"
#include "onsu/topology.hpp"
#include "onsu/workload.hpp"

namespace onsu {

// One active (admitted, not yet expired) slice.
struct ActiveSlice {
    SliceRequest request;
    int remaining = 0;  // full slots left beyond the current one
    int admitted_slot = 0;
};

// Mutable infrastructure state across time slots.
//
// Holdings (placements, embeddings, reservation ledgers) are the source of
// truth; `available` and `avail_bw` are recomputed from them in a fixed
// order after every mutation, so returning every holding restores the
// initial capacities bit-exactly.
struct SimState {
    std::vector<ResourceVector> available;  // R'_n, indexed like topology nodes
    std::vector<double> avail_bw;           // B'_l, indexed like topology links
    std::vector<char> used_node;            // alpha_n
    std::vector<char> used_link;            // gamma_l

    std::map<VmKey, int> placements;                  // active VM -> node
    std::map<VlKey, std::vector<int>> embeddings;     // active VL -> link list
    std::map<SliceKey, ActiveSlice> active_slices;
    std::map<int, std::set<SliceKey>> admitted_by_slot;

    // Robustness reservation ledgers, keyed by admission slot.
    std::map<int, std::vector<ResourceVector>> node_reservations;  // O^t_n
    std::map<int, std::vector<double>> link_reservations;          // O'^t_l

    double power_used_nodes = 0.0;     // N_Used
    double power_used_switches = 0.0;  // S_Used
    int clock = 0;

    static SimState fresh(const Topology& topo);

    // Recomputes available/avail_bw and the power totals from holdings.
    void refresh_derived(const Topology& topo);

    // VMs currently placed on a node / VLs currently crossing a link.
    std::vector<const VmSpec*> vms_on_node(int node) const;
    std::vector<const VlSpec*> vls_on_link(int link) const;

    const VmSpec& vm_spec(const VmKey& key) const;
    const VlSpec& vl_spec(const VlKey& key) const;
};

} // namespace onsu

#endif
