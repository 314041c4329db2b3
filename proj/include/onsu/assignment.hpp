#ifndef ONSU_ASSIGNMENT_HPP
#define ONSU_ASSIGNMENT_HPP

#include <cstdint>
#include <map>
#include <set>
#include <utility>

#include "onsu/workload.hpp"

namespace onsu {

// Identifies one slice request globally. Tenants hold a single slice, but
// the pair is kept so logs and documents stay unambiguous.
struct SliceKey {
    std::uint64_t tenant = 0;
    std::uint32_t slice = 1;

    auto operator<=>(const SliceKey&) const = default;
    static SliceKey of(const SliceRequest& req) { return {req.tenant, req.slice}; }
};

struct VmKey {
    SliceKey slice;
    int vm = 0;
    auto operator<=>(const VmKey&) const = default;
};

struct VlKey {
    SliceKey slice;
    int vl = 0;
    auto operator<=>(const VlKey&) const = default;
};

// A chosen path: ordered pair of host nodes plus the index into that pair's
// path list.
struct PathRef {
    int from = 0;
    int to = 0;
    int index = 0;
    auto operator<=>(const PathRef&) const = default;
};

// The per-slot admission decision produced by either engine.
struct Assignment {
    std::set<SliceKey> accepted;
    std::map<VmKey, int> placements;       // VM -> node index
    std::map<VlKey, PathRef> embeddings;   // VL -> chosen path
    std::set<int> activated_nodes;         // turned on this slot (previously unused)
    std::set<int> activated_links;         // carrying at least one new VL
    double objective_value = 0.0;
    int eta = 0;                           // rejected count
};

} // namespace onsu

#endif
