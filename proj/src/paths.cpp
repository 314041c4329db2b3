#include "onsu/paths.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "onsu/errors.hpp"

namespace onsu {

double path_delay(const std::vector<int>& links, const Topology& topo) {
    double total = 0.0;
    for (int l : links) {
        if (l < 0 || l >= static_cast<int>(topo.links.size()))
            throw ValidationError("path references unknown link index " + std::to_string(l));
        total += topo.links[static_cast<std::size_t>(l)].prop_delay_ms;
    }
    return total;
}

namespace {

// Orders candidate paths: delay first, then hop count, then the link id
// sequence. The same comparator drives both selection and final ordering so
// the k-table is always a prefix of the (k+1)-table.
struct PathLess {
    const Topology* topo;
    bool operator()(const Path& a, const Path& b) const {
        if (a.delay_ms != b.delay_ms) return a.delay_ms < b.delay_ms;
        if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
        auto ids = [&](const Path& p) {
            std::vector<std::string_view> v;
            v.reserve(p.links.size());
            for (int l : p.links) v.push_back(topo->links[static_cast<std::size_t>(l)].id);
            return v;
        };
        return ids(a) < ids(b);
    }
};

// Dijkstra with the composite path order, over the inter-switch links only,
// honoring banned nodes/links. Label-setting is valid because per-link
// delays are nonnegative and the comparator extends delay order.
std::optional<Path> best_path(const Topology& topo, int src, int dst,
                              const std::vector<char>& banned_node,
                              const std::vector<char>& banned_link) {
    const int n = static_cast<int>(topo.nodes.size());
    PathLess less{&topo};
    std::vector<std::optional<Path>> best(static_cast<std::size_t>(n));
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    best[static_cast<std::size_t>(src)] = Path{};

    for (;;) {
        int u = -1;
        for (int i = 0; i < n; ++i) {
            if (done[static_cast<std::size_t>(i)] || !best[static_cast<std::size_t>(i)]) continue;
            if (u < 0 || less(*best[static_cast<std::size_t>(i)], *best[static_cast<std::size_t>(u)]))
                u = i;
        }
        if (u < 0) break;
        done[static_cast<std::size_t>(u)] = 1;
        if (u == dst) break;
        for (int l : topo.incident_links(u)) {
            if (banned_link[static_cast<std::size_t>(l)]) continue;
            int w = topo.link_u(l) == u ? topo.link_v(l) : topo.link_u(l);
            if (done[static_cast<std::size_t>(w)] || banned_node[static_cast<std::size_t>(w)])
                continue;
            Path cand = *best[static_cast<std::size_t>(u)];
            cand.links.push_back(l);
            cand.delay_ms += topo.links[static_cast<std::size_t>(l)].prop_delay_ms;
            auto& slot = best[static_cast<std::size_t>(w)];
            if (!slot || less(cand, *slot)) slot = std::move(cand);
        }
    }
    return best[static_cast<std::size_t>(dst)];
}

std::vector<Path> yen_ksp(const Topology& topo, int src, int dst, int k) {
    PathLess less{&topo};
    std::vector<Path> accepted;
    std::vector<char> no_node(topo.nodes.size(), 0);
    std::vector<char> no_link(topo.links.size(), 0);
    // Keep self-links out of inter-node paths; they revisit their node.
    for (std::size_t i = 0; i < topo.links.size(); ++i)
        if (topo.links[i].is_self()) no_link[i] = 1;

    auto first = best_path(topo, src, dst, no_node, no_link);
    if (!first) return accepted;
    accepted.push_back(std::move(*first));

    auto node_seq = [&](const Path& p) {
        std::vector<int> seq{src};
        int at = src;
        for (int l : p.links) {
            at = topo.link_u(l) == at ? topo.link_v(l) : topo.link_u(l);
            seq.push_back(at);
        }
        return seq;
    };

    std::set<Path, PathLess> candidates(less);
    while (static_cast<int>(accepted.size()) < k) {
        const Path& prev = accepted.back();
        const std::vector<int> prev_nodes = node_seq(prev);
        for (std::size_t spur = 0; spur < prev.links.size(); ++spur) {
            const int spur_node = prev_nodes[spur];
            std::vector<int> root_links(prev.links.begin(),
                                        prev.links.begin() + static_cast<std::ptrdiff_t>(spur));

            std::vector<char> banned_node = no_node;
            std::vector<char> banned_link = no_link;
            // Nodes on the root path (except the spur node) may not repeat.
            for (std::size_t i = 0; i < spur; ++i)
                banned_node[static_cast<std::size_t>(prev_nodes[i])] = 1;
            // Ban the next link of every accepted path sharing this root.
            for (const Path& a : accepted) {
                if (a.links.size() <= spur) continue;
                if (std::equal(root_links.begin(), root_links.end(), a.links.begin()))
                    banned_link[static_cast<std::size_t>(a.links[spur])] = 1;
            }

            auto spur_path = best_path(topo, spur_node, dst, banned_node, banned_link);
            if (!spur_path) continue;
            Path total;
            total.links = root_links;
            total.links.insert(total.links.end(), spur_path->links.begin(),
                               spur_path->links.end());
            total.delay_ms = path_delay(total.links, topo);
            candidates.insert(std::move(total));
        }
        if (candidates.empty()) break;
        auto it = candidates.begin();
        accepted.push_back(*it);
        candidates.erase(it);
    }
    return accepted;
}

} // namespace

PathTable enumerate_paths(const Topology& topo, int k) {
    if (k < 1) throw ValidationError("path count k must be >= 1");
    const int n = static_cast<int>(topo.nodes.size());
    PathTable table(n, k);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) {
                int self = topo.self_link_of(a);
                if (self >= 0) {
                    Path p;
                    p.links = {self};
                    p.delay_ms = topo.links[static_cast<std::size_t>(self)].prop_delay_ms;
                    table.mutable_paths(a, b).push_back(std::move(p));
                }
            } else {
                table.mutable_paths(a, b) = yen_ksp(topo, a, b, k);
            }
        }
    }
    return table;
}

} // namespace onsu
