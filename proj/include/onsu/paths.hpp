#ifndef ONSU_PATHS_HPP
#define ONSU_PATHS_HPP

#include <vector>

#include "onsu/topology.hpp"

namespace onsu {

// One loopless physical path, stored as the ordered list of link indices.
struct Path {
    std::vector<int> links;
    double delay_ms = 0.0;
    int hops() const { return static_cast<int>(links.size()); }
};

// Precomputed candidate paths per ordered node pair. For distinct nodes the
// list holds up to k shortest loopless paths ordered by (delay, hops,
// lexicographic link ids); for a node paired with itself it holds exactly
// the self-link path when a self-link exists.
class PathTable {
public:
    PathTable() = default;
    PathTable(int node_count, int k) : k_(k), node_count_(node_count) {
        table_.resize(static_cast<std::size_t>(node_count) * node_count);
    }

    int k() const { return k_; }
    int node_count() const { return node_count_; }

    const std::vector<Path>& paths(int from, int to) const {
        return table_[static_cast<std::size_t>(from) * node_count_ + to];
    }
    std::vector<Path>& mutable_paths(int from, int to) {
        return table_[static_cast<std::size_t>(from) * node_count_ + to];
    }

private:
    int k_ = 0;
    int node_count_ = 0;
    std::vector<std::vector<Path>> table_;
};

// Yen's k-shortest loopless paths per ordered pair of distinct nodes, by
// total propagation delay. Self-links never appear on inter-node paths.
PathTable enumerate_paths(const Topology& topo, int k);

// Sum of prop_delay over the given link ids. Throws ValidationError on an
// unknown link.
double path_delay(const std::vector<int>& links, const Topology& topo);

} // namespace onsu

#endif
