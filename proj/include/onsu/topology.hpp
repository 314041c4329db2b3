#ifndef ONSU_TOPOLOGY_HPP
#define ONSU_TOPOLOGY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "onsu/resources.hpp"

namespace onsu {

// A physical node: a server cluster plus its forwarding switch.
struct NodeSpec {
    std::string id;
    ResourceVector capacity;                    // R_n
    double p_max = 0.0;                         // server power at full load, W
    double p_idle = 0.0;                        // server power when on but idle, W
    double switch_power = 0.0;                  // switch chassis power S_n, W
    std::map<std::string, double> port_power;   // per rate class, W per port
    int connected_ports = 0;                    // S'_n, ports toward other switches

    double port_power_for(const std::string& rate_class) const;
};

// A physical link. u == v is a self-link, used to carry traffic between VMs
// co-located on one node.
struct LinkSpec {
    std::string id;
    std::string u;
    std::string v;
    double bandwidth_mbps = 0.0;  // B_l
    std::string rate_class;
    double prop_delay_ms = 0.0;   // tau_l
    double power_weight = 0.0;    // zeta_l, derived

    bool is_self() const { return u == v; }
};

struct Topology {
    std::string name;
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;

    // Normalizers used by the objective.
    double n_total_power = 0.0;  // sum of p_max
    double s_total_power = 0.0;  // sum of power_weight
    double b_total = 0.0;        // sum of bandwidth_mbps

    int node_index(const std::string& id) const;  // -1 if unknown
    int link_index(const std::string& id) const;
    // Index of the self-link on node n, or -1.
    int self_link_of(int node) const { return self_link_[static_cast<std::size_t>(node)]; }
    int link_u(int l) const { return link_ends_[static_cast<std::size_t>(l)].first; }
    int link_v(int l) const { return link_ends_[static_cast<std::size_t>(l)].second; }
    const std::vector<int>& incident_links(int node) const {
        return incident_[static_cast<std::size_t>(node)];
    }

    // Fills derived fields (power weights, totals, index structures) and
    // checks every invariant. Throws ValidationError on any violation.
    void finalize();

private:
    std::map<std::string, int, std::less<>> node_by_id_;
    std::map<std::string, int, std::less<>> link_by_id_;
    std::vector<std::pair<int, int>> link_ends_;
    std::vector<int> self_link_;
    std::vector<std::vector<int>> incident_;
};

// Cumulative power attributed to one link: both endpoint switches' idle
// share plus the port power at the link's rate class. For a self-link only
// the local switch contributes.
double link_power_weight(const LinkSpec& link, const NodeSpec& end_u, const NodeSpec& end_v);

// Parses a topology document (see README for the schema). Throws ParseError
// or ValidationError.
Topology load_topology_json(const std::string& text);
Topology load_topology_file(const std::string& path);

// Built-in instances. `seed` draws each node's server type from the two
// reference server models. "abilene" has 12 nodes / 27 links; "abilene6" is
// the 6-node induced subgraph used for desk-scale exact runs.
Topology make_builtin(const std::string& name, std::uint64_t seed);
bool is_builtin(const std::string& name);

// Loads a builtin by name or a document by path.
Topology resolve_topology(const std::string& name_or_path, std::uint64_t seed);

std::string topology_to_json(const Topology& topo);

} // namespace onsu

#endif
