#include "onsu/topology.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "onsu/errors.hpp"
#include "onsu/rng.hpp"

namespace onsu {

using nlohmann::json;

double NodeSpec::port_power_for(const std::string& rate_class) const {
    auto it = port_power.find(rate_class);
    if (it == port_power.end())
        throw ValidationError("node '" + id + "' has no port power entry for rate class '" +
                              rate_class + "'");
    return it->second;
}

double link_power_weight(const LinkSpec& link, const NodeSpec& end_u, const NodeSpec& end_v) {
    if (link.is_self()) {
        if (end_u.connected_ports <= 0)
            throw ValidationError("self-link '" + link.id + "' on node '" + end_u.id +
                                  "' with no connected ports");
        return end_u.port_power_for(link.rate_class) +
               end_u.switch_power / static_cast<double>(end_u.connected_ports);
    }
    if (end_u.connected_ports <= 0 || end_v.connected_ports <= 0)
        throw ValidationError("link '" + link.id + "' endpoint with no connected ports");
    return 2.0 * end_u.port_power_for(link.rate_class) +
           end_u.switch_power / static_cast<double>(end_u.connected_ports) +
           end_v.switch_power / static_cast<double>(end_v.connected_ports);
}

int Topology::node_index(const std::string& id) const {
    auto it = node_by_id_.find(id);
    return it == node_by_id_.end() ? -1 : it->second;
}

int Topology::link_index(const std::string& id) const {
    auto it = link_by_id_.find(id);
    return it == link_by_id_.end() ? -1 : it->second;
}

void Topology::finalize() {
    node_by_id_.clear();
    link_by_id_.clear();
    link_ends_.clear();
    self_link_.assign(nodes.size(), -1);
    incident_.assign(nodes.size(), {});

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeSpec& n = nodes[i];
        if (n.id.empty()) throw ValidationError("node with empty id");
        if (!node_by_id_.emplace(n.id, static_cast<int>(i)).second)
            throw ValidationError("duplicate node id '" + n.id + "'");
        if (!n.capacity.nonnegative())
            throw ValidationError("node '" + n.id + "' has a negative capacity component");
        if (n.p_idle < 0.0 || n.p_max < n.p_idle)
            throw ValidationError("node '" + n.id + "' violates p_max >= p_idle >= 0");
        if (n.switch_power < 0.0)
            throw ValidationError("node '" + n.id + "' has negative switch power");
    }

    std::set<std::pair<int, int>> seen_pairs;
    for (std::size_t i = 0; i < links.size(); ++i) {
        LinkSpec& l = links[i];
        if (l.id.empty()) throw ValidationError("link with empty id");
        if (!link_by_id_.emplace(l.id, static_cast<int>(i)).second)
            throw ValidationError("duplicate link id '" + l.id + "'");
        int iu = node_index(l.u);
        int iv = node_index(l.v);
        if (iu < 0) throw ValidationError("link '" + l.id + "' references unknown node '" + l.u + "'");
        if (iv < 0) throw ValidationError("link '" + l.id + "' references unknown node '" + l.v + "'");
        if (l.bandwidth_mbps <= 0.0)
            throw ValidationError("link '" + l.id + "' must have positive bandwidth");
        if (l.prop_delay_ms < 0.0)
            throw ValidationError("link '" + l.id + "' has negative propagation delay");
        auto key = std::minmax(iu, iv);
        if (!seen_pairs.emplace(key).second)
            throw ValidationError("more than one link between nodes '" + l.u + "' and '" + l.v + "'");
        link_ends_.emplace_back(iu, iv);
        if (iu == iv) {
            self_link_[static_cast<std::size_t>(iu)] = static_cast<int>(i);
        } else {
            incident_[static_cast<std::size_t>(iu)].push_back(static_cast<int>(i));
            incident_[static_cast<std::size_t>(iv)].push_back(static_cast<int>(i));
        }
    }

    // connected_ports defaults to the count of incident inter-switch links.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].connected_ports == 0)
            nodes[i].connected_ports = static_cast<int>(incident_[i].size());
        bool has_link = !incident_[i].empty() || self_link_[i] >= 0;
        if (has_link && nodes[i].connected_ports < 1)
            throw ValidationError("node '" + nodes[i].id +
                                  "' has incident links but zero connected ports");
    }

    n_total_power = 0.0;
    s_total_power = 0.0;
    b_total = 0.0;
    for (const NodeSpec& n : nodes) n_total_power += n.p_max;
    for (LinkSpec& l : links) {
        const NodeSpec& nu = nodes[static_cast<std::size_t>(node_index(l.u))];
        const NodeSpec& nv = nodes[static_cast<std::size_t>(node_index(l.v))];
        l.power_weight = link_power_weight(l, nu, nv);
        s_total_power += l.power_weight;
        b_total += l.bandwidth_mbps;
    }
}

namespace {

double require_number(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(ctx + ": missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string())
        throw ParseError(ctx + ": missing or non-string field '" + key + "'");
    return j[key].get<std::string>();
}

} // namespace

Topology load_topology_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("topology document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw ParseError("topology document: expected object with a 'nodes' array");

    Topology topo;
    topo.name = doc.value("name", "");
    for (const json& jn : doc["nodes"]) {
        std::string ctx = "node #" + std::to_string(topo.nodes.size());
        NodeSpec n;
        n.id = require_string(jn, "id", ctx);
        n.capacity.cpu = require_number(jn, "cpu", ctx);
        n.capacity.ram = require_number(jn, "ram", ctx);
        n.capacity.storage = require_number(jn, "storage", ctx);
        n.p_max = require_number(jn, "p_max", ctx);
        n.p_idle = require_number(jn, "p_idle", ctx);
        n.switch_power = jn.value("switch_power", 0.0);
        if (jn.contains("port_power")) {
            if (!jn["port_power"].is_object())
                throw ParseError(ctx + ": 'port_power' must map rate class to watts");
            for (auto& [k, v] : jn["port_power"].items()) n.port_power[k] = v.get<double>();
        }
        n.connected_ports = jn.value("connected_ports", 0);
        topo.nodes.push_back(std::move(n));
    }
    if (doc.contains("links")) {
        if (!doc["links"].is_array()) throw ParseError("topology document: 'links' must be an array");
        for (const json& jl : doc["links"]) {
            std::string ctx = "link #" + std::to_string(topo.links.size());
            LinkSpec l;
            l.id = require_string(jl, "id", ctx);
            l.u = require_string(jl, "u", ctx);
            l.v = require_string(jl, "v", ctx);
            l.bandwidth_mbps = require_number(jl, "bandwidth_mbps", ctx);
            l.rate_class = jl.value("rate_class", "default");
            l.prop_delay_ms = jl.value("prop_delay_ms", l.is_self() ? 0.0 : 0.0);
            topo.links.push_back(std::move(l));
        }
    }
    topo.finalize();
    return topo;
}

Topology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open topology file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_topology_json(ss.str());
}

namespace {

struct AbileneNode {
    const char* id;
};

// SNDlib Abilene, 12 nodes and 15 inter-switch links. Per-link propagation
// delays are great-circle distance over 200 km/ms, precomputed from the
// source coordinates.
constexpr const char* kAbileneNodes[12] = {
    "ATLAM5", "ATLAng", "CHINng", "DNVRng", "HSTNng", "IPLSng",
    "KSCYng", "LOSAng", "NYCMng", "SNVAng", "STTLng", "WASHng",
};

struct AbileneLink {
    const char* u;
    const char* v;
    double delay_ms;
};

constexpr AbileneLink kAbileneLinks[15] = {
    {"ATLAM5", "ATLAng", 0.662}, {"ATLAng", "HSTNng", 5.396}, {"ATLAng", "IPLSng", 2.950},
    {"ATLAng", "WASHng", 4.496}, {"CHINng", "IPLSng", 1.295}, {"CHINng", "NYCMng", 5.724},
    {"DNVRng", "KSCYng", 3.720}, {"DNVRng", "SNVAng", 7.570}, {"DNVRng", "STTLng", 7.855},
    {"HSTNng", "KSCYng", 5.134}, {"HSTNng", "LOSAng", 10.965}, {"IPLSng", "KSCYng", 4.506},
    {"LOSAng", "SNVAng", 2.518}, {"NYCMng", "WASHng", 1.675}, {"SNVAng", "STTLng", 5.680},
};

// Reference server models; one is drawn per node at instance creation.
struct ServerType {
    double cpu, ram, storage, p_max, p_idle;
};
constexpr ServerType kServerTypes[2] = {
    {32.0, 192.0, 4000.0, 540.0, 170.0},
    {48.0, 768.0, 4000.0, 700.0, 180.0},
};

constexpr double kSwitchPower = 184.0;
constexpr double kPort10G = 4.3;
constexpr double kPort40G = 13.6;

Topology make_abilene(const std::vector<std::string>& node_ids, std::uint64_t seed,
                      const std::string& name) {
    Topology topo;
    topo.name = name;
    Rng rng(seed ^ 0x41b11e9eULL);
    for (const std::string& id : node_ids) {
        const ServerType& st = kServerTypes[rng.uniform_int(0, 1)];
        NodeSpec n;
        n.id = id;
        n.capacity = {st.cpu, st.ram, st.storage};
        n.p_max = st.p_max;
        n.p_idle = st.p_idle;
        n.switch_power = kSwitchPower;
        n.port_power = {{"10G", kPort10G}, {"40G", kPort40G}};
        topo.nodes.push_back(std::move(n));
    }
    auto has_node = [&](const char* id) {
        for (const std::string& s : node_ids)
            if (s == id) return true;
        return false;
    };
    for (const AbileneLink& al : kAbileneLinks) {
        if (!has_node(al.u) || !has_node(al.v)) continue;
        LinkSpec l;
        l.id = std::string(al.u) + "-" + al.v;
        l.u = al.u;
        l.v = al.v;
        l.bandwidth_mbps = 10000.0;
        l.rate_class = "10G";
        l.prop_delay_ms = al.delay_ms;
        topo.links.push_back(std::move(l));
    }
    // One self-link per node so co-located VMs can interconnect locally.
    for (const std::string& id : node_ids) {
        LinkSpec l;
        l.id = id + "-self";
        l.u = id;
        l.v = id;
        l.bandwidth_mbps = 40000.0;
        l.rate_class = "40G";
        l.prop_delay_ms = 0.0;
        topo.links.push_back(std::move(l));
    }
    topo.finalize();
    return topo;
}

// Induced 6-node subgraph around the ATLA/KSCY cycle; keeps multiple
// disjoint paths between several pairs.
const std::vector<std::string> kAbilene6Nodes = {
    "ATLAng", "DNVRng", "HSTNng", "IPLSng", "KSCYng", "WASHng",
};

} // namespace

bool is_builtin(const std::string& name) {
    return name == "abilene" || name == "abilene6";
}

Topology make_builtin(const std::string& name, std::uint64_t seed) {
    if (name == "abilene") {
        std::vector<std::string> ids(std::begin(kAbileneNodes), std::end(kAbileneNodes));
        return make_abilene(ids, seed, "abilene");
    }
    if (name == "abilene6") return make_abilene(kAbilene6Nodes, seed, "abilene6");
    throw ValidationError("unknown builtin topology '" + name + "'");
}

Topology resolve_topology(const std::string& name_or_path, std::uint64_t seed) {
    if (is_builtin(name_or_path)) return make_builtin(name_or_path, seed);
    return load_topology_file(name_or_path);
}

std::string topology_to_json(const Topology& topo) {
    json doc;
    doc["name"] = topo.name;
    doc["nodes"] = json::array();
    for (const NodeSpec& n : topo.nodes) {
        json jn{{"id", n.id},
                {"cpu", n.capacity.cpu},
                {"ram", n.capacity.ram},
                {"storage", n.capacity.storage},
                {"p_max", n.p_max},
                {"p_idle", n.p_idle},
                {"switch_power", n.switch_power},
                {"connected_ports", n.connected_ports}};
        jn["port_power"] = json::object();
        for (auto& [k, v] : n.port_power) jn["port_power"][k] = v;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["links"] = json::array();
    for (const LinkSpec& l : topo.links) {
        doc["links"].push_back(json{{"id", l.id},
                                    {"u", l.u},
                                    {"v", l.v},
                                    {"bandwidth_mbps", l.bandwidth_mbps},
                                    {"rate_class", l.rate_class},
                                    {"prop_delay_ms", l.prop_delay_ms}});
    }
    return doc.dump(2);
}

} // namespace onsu
