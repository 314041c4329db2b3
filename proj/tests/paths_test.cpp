#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "onsu/errors.hpp"
#include "onsu/paths.hpp"

using namespace onsu;

namespace {

Topology triangle() {
    const char* doc = R"({
      "nodes": [
        {"id": "a", "cpu": 1, "ram": 1, "storage": 1, "p_max": 1, "p_idle": 0,
         "switch_power": 10, "port_power": {"default": 1}},
        {"id": "b", "cpu": 1, "ram": 1, "storage": 1, "p_max": 1, "p_idle": 0,
         "switch_power": 10, "port_power": {"default": 1}},
        {"id": "c", "cpu": 1, "ram": 1, "storage": 1, "p_max": 1, "p_idle": 0,
         "switch_power": 10, "port_power": {"default": 1}}
      ],
      "links": [
        {"id": "ab", "u": "a", "v": "b", "bandwidth_mbps": 10, "prop_delay_ms": 1},
        {"id": "bc", "u": "b", "v": "c", "bandwidth_mbps": 10, "prop_delay_ms": 1},
        {"id": "ac", "u": "a", "v": "c", "bandwidth_mbps": 10, "prop_delay_ms": 1},
        {"id": "aa", "u": "a", "v": "a", "bandwidth_mbps": 40, "prop_delay_ms": 0}
      ]
    })";
    return load_topology_json(doc);
}

// Exhaustive loopless path enumeration, the independent oracle for Yen.
void all_simple_paths(const Topology& topo, int at, int dst, std::vector<char>& seen,
                      std::vector<int>& links, std::vector<Path>& out) {
    if (at == dst) {
        Path p;
        p.links = links;
        p.delay_ms = path_delay(links, topo);
        out.push_back(std::move(p));
        return;
    }
    for (int l = 0; l < static_cast<int>(topo.links.size()); ++l) {
        const LinkSpec& spec = topo.links[static_cast<std::size_t>(l)];
        if (spec.is_self()) continue;
        int u = topo.link_u(l), v = topo.link_v(l);
        int next = -1;
        if (u == at && !seen[static_cast<std::size_t>(v)]) next = v;
        if (v == at && !seen[static_cast<std::size_t>(u)]) next = u;
        if (next < 0) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        links.push_back(l);
        all_simple_paths(topo, next, dst, seen, links, out);
        links.pop_back();
        seen[static_cast<std::size_t>(next)] = 0;
    }
}

std::vector<Path> oracle_k_shortest(const Topology& topo, int src, int dst, int k) {
    std::vector<char> seen(topo.nodes.size(), 0);
    seen[static_cast<std::size_t>(src)] = 1;
    std::vector<int> links;
    std::vector<Path> all;
    all_simple_paths(topo, src, dst, seen, links, all);
    auto ids = [&](const Path& p) {
        std::vector<std::string> v;
        for (int l : p.links) v.push_back(topo.links[static_cast<std::size_t>(l)].id);
        return v;
    };
    std::sort(all.begin(), all.end(), [&](const Path& a, const Path& b) {
        if (a.delay_ms != b.delay_ms) return a.delay_ms < b.delay_ms;
        if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
        return ids(a) < ids(b);
    });
    if (static_cast<int>(all.size()) > k) all.resize(static_cast<std::size_t>(k));
    return all;
}

} // namespace

TEST_CASE("triangle pair gets the direct link first, the detour second") {
    Topology topo = triangle();
    PathTable table = enumerate_paths(topo, 2);
    int a = topo.node_index("a"), b = topo.node_index("b");
    const auto& ps = table.paths(a, b);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].links == std::vector<int>{topo.link_index("ab")});
    CHECK(ps[0].delay_ms == 1.0);
    CHECK(ps[1].links.size() == 2);
    CHECK(ps[1].delay_ms == 2.0);
}

TEST_CASE("self pair holds exactly the self link path when one exists") {
    Topology topo = triangle();
    PathTable table = enumerate_paths(topo, 3);
    int a = topo.node_index("a"), b = topo.node_index("b");
    REQUIRE(table.paths(a, a).size() == 1);
    CHECK(table.paths(a, a)[0].links == std::vector<int>{topo.link_index("aa")});
    CHECK(table.paths(b, b).empty());  // b has no self link
}

TEST_CASE("path_delay sums link delays") {
    Topology topo = triangle();
    CHECK(path_delay({topo.link_index("ab"), topo.link_index("bc")}, topo) == 2.0);
    CHECK(path_delay({}, topo) == 0.0);
    CHECK_THROWS_AS(path_delay({99}, topo), ValidationError);
}

TEST_CASE("abilene paths match exhaustive enumeration at k = 5") {
    Topology topo = make_builtin("abilene", 5);
    PathTable table = enumerate_paths(topo, 5);
    const int n = static_cast<int>(topo.nodes.size());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const auto& got = table.paths(a, b);
            std::vector<Path> want = oracle_k_shortest(topo, a, b, 5);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].links == want[i].links);
                CHECK(got[i].delay_ms == doctest::Approx(want[i].delay_ms).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("paths are loopless, sorted by delay, and delays are consistent") {
    Topology topo = make_builtin("abilene", 2);
    PathTable table = enumerate_paths(topo, 5);
    const int n = static_cast<int>(topo.nodes.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double prev = -1.0;
            for (const Path& p : table.paths(a, b)) {
                CHECK(p.delay_ms == doctest::Approx(path_delay(p.links, topo)).epsilon(1e-12));
                CHECK(p.delay_ms >= prev);
                prev = p.delay_ms;
                // Looplessness: no node repeats along the walk.
                if (a != b) {
                    std::set<int> visited{a};
                    int at = a;
                    for (int l : p.links) {
                        at = topo.link_u(l) == at ? topo.link_v(l) : topo.link_u(l);
                        CHECK(visited.insert(at).second);
                    }
                    CHECK(at == b);
                }
            }
        }
}

TEST_CASE("the k-path table is a prefix of the (k+2)-path table") {
    Topology topo = make_builtin("abilene", 4);
    PathTable small = enumerate_paths(topo, 3);
    PathTable big = enumerate_paths(topo, 5);
    const int n = static_cast<int>(topo.nodes.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const auto& s = small.paths(a, b);
            const auto& g = big.paths(a, b);
            REQUIRE(s.size() <= g.size());
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].links == g[i].links);
        }
}

TEST_CASE("disconnected pairs get empty path lists") {
    const char* doc = R"({
      "nodes": [
        {"id": "a", "cpu": 1, "ram": 1, "storage": 1, "p_max": 1, "p_idle": 0},
        {"id": "b", "cpu": 1, "ram": 1, "storage": 1, "p_max": 1, "p_idle": 0}
      ],
      "links": []
    })";
    Topology topo = load_topology_json(doc);
    PathTable table = enumerate_paths(topo, 3);
    CHECK(table.paths(0, 1).empty());
    CHECK(table.paths(1, 0).empty());
}
