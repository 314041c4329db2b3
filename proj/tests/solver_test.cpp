#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "onsu/errors.hpp"
#include "onsu/sim.hpp"
#include "onsu/solver.hpp"
#include "test_instances.hpp"

using namespace onsu;

namespace {

SolverConfig tight_gap() {
    SolverConfig cfg;
    cfg.gap_tolerance = 1e-9;
    return cfg;
}

} // namespace

TEST_CASE("a fitting single-VM slice is accepted on the cheapest node") {
    testgen::TinyInstance inst = testgen::tiny_instance(11);
    // Overwrite with a deterministic 2-node scenario.
    Rng rng(3);
    inst.topo = testgen::random_topology(rng, 2);
    inst.paths = enumerate_paths(inst.topo, 2);
    inst.state = SimState::fresh(inst.topo);
    inst.cfg = RobustConfig{1, 1, 0.1, 0.1};
    inst.arrivals.clear();
    SliceRequest req;
    req.tenant = 1;
    VmSpec vm;
    vm.id = 1;
    vm.nominal = {2.0, 4.0, 120.0};
    vm.deviation = {0.2, 0.4, 12.0};
    req.vms = {vm};
    req.lifespan = 2;
    inst.arrivals.push_back(req);

    RobinsModel model = build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
    Solution sol = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                               tight_gap());
    REQUIRE(sol.status == SolveStatus::ProvenOptimal);
    CHECK(sol.assignment.eta == 0);
    CHECK(sol.assignment.accepted.size() == 1);
    Solution oracle =
        brute_force_optimum(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
    CHECK(sol.assignment.objective_value ==
          doctest::Approx(oracle.assignment.objective_value).epsilon(1e-6));
    CHECK(sol.assignment.placements == oracle.assignment.placements);
}

TEST_CASE("oversized demand forces rejection, never infeasibility") {
    Rng rng(5);
    Topology topo = testgen::random_topology(rng, 3);
    PathTable paths = enumerate_paths(topo, 2);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{0, 0, 0.0, 0.0};
    SliceRequest req;
    req.tenant = 1;
    VmSpec vm;
    vm.id = 1;
    vm.nominal = {100.0, 8.0, 120.0};  // no node has 100 cores
    req.vms = {vm};
    std::vector<SliceRequest> arrivals{req};
    RobinsModel model = build_model(state, arrivals, topo, paths, cfg);
    Solution sol = solve_exact(model, state, arrivals, topo, paths, cfg, tight_gap());
    REQUIRE(sol.status == SolveStatus::ProvenOptimal);
    CHECK(sol.assignment.eta == 1);
    CHECK(sol.assignment.accepted.empty());
    CHECK(sol.assignment.objective_value ==
          doctest::Approx(model.eta_weight).epsilon(1e-9));
}

TEST_CASE("two identical slices with room for one") {
    const char* doc = R"({
      "nodes": [{"id": "a", "cpu": 5, "ram": 64, "storage": 4000, "p_max": 540, "p_idle": 170,
                 "switch_power": 184, "port_power": {"40G": 13.6}, "connected_ports": 1}],
      "links": [{"id": "a-a", "u": "a", "v": "a", "bandwidth_mbps": 40000, "rate_class": "40G"}]
    })";
    Topology topo = load_topology_json(doc);
    PathTable paths = enumerate_paths(topo, 1);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{0, 0, 0.0, 0.0};
    std::vector<SliceRequest> arrivals;
    for (std::uint64_t t = 1; t <= 2; ++t) {
        SliceRequest req;
        req.tenant = t;
        VmSpec vm;
        vm.id = 1;
        vm.nominal = {4.0, 8.0, 120.0};  // two of these exceed 5 cores
        req.vms = {vm};
        arrivals.push_back(req);
    }
    RobinsModel model = build_model(state, arrivals, topo, paths, cfg);
    Solution sol = solve_exact(model, state, arrivals, topo, paths, cfg, tight_gap());
    REQUIRE(sol.status == SolveStatus::ProvenOptimal);
    CHECK(sol.assignment.eta == 1);
    Solution oracle = brute_force_optimum(state, arrivals, topo, paths, cfg);
    CHECK(sol.assignment.objective_value ==
          doctest::Approx(oracle.assignment.objective_value).epsilon(1e-6));
}

TEST_CASE("exactness against the brute-force oracle on random tiny instances") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        CAPTURE(seed);
        testgen::TinyInstance inst = testgen::tiny_instance(seed * 101);
        RobinsModel model =
            build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
        Solution exact = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths,
                                     inst.cfg, tight_gap());
        REQUIRE(exact.status == SolveStatus::ProvenOptimal);
        Solution oracle =
            brute_force_optimum(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
        CHECK(exact.assignment.objective_value ==
              doctest::Approx(oracle.assignment.objective_value).epsilon(1e-6));
        // Both engines' assignments satisfy the checker.
        auto v1 = check_solution(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                                 exact.assignment, model.eta_weight);
        auto v2 = check_solution(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                                 oracle.assignment, model.eta_weight);
        CHECK(v1.empty());
        CHECK(v2.empty());
    }
}

TEST_CASE("LP relaxation bounds the exact optimum from below") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        CAPTURE(seed);
        testgen::TinyInstance inst = testgen::tiny_instance(seed * 313 + 7);
        RobinsModel model =
            build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
        LpRelaxation lp = solve_lp_relaxation(model);
        REQUIRE(lp.ok);
        Solution exact = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths,
                                     inst.cfg, tight_gap());
        REQUIRE(exact.status == SolveStatus::ProvenOptimal);
        CHECK(lp.bound <= exact.assignment.objective_value + 1e-7);
    }
}

TEST_CASE("anytime behavior: incumbents fall, bounds rise") {
    testgen::TinyInstance inst = testgen::tiny_instance(4242);
    RobinsModel model = build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
    Solution sol = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                               tight_gap());
    for (std::size_t i = 1; i < sol.stats.incumbent_history.size(); ++i)
        CHECK(sol.stats.incumbent_history[i] <= sol.stats.incumbent_history[i - 1] + 1e-12);
    for (std::size_t i = 1; i < sol.stats.bound_history.size(); ++i)
        CHECK(sol.stats.bound_history[i] >= sol.stats.bound_history[i - 1] - 1e-9);
}

TEST_CASE("single-threaded solves are bit-reproducible") {
    testgen::TinyInstance inst = testgen::tiny_instance(987);
    RobinsModel model = build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
    Solution a = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                             tight_gap());
    Solution b = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg,
                             tight_gap());
    CHECK(a.assignment.objective_value == b.assignment.objective_value);
    CHECK(a.assignment.placements == b.assignment.placements);
    CHECK(a.assignment.embeddings == b.assignment.embeddings);
    CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("depth-first search agrees with best-first") {
    for (std::uint64_t seed = 3; seed <= 12; ++seed) {
        CAPTURE(seed);
        testgen::TinyInstance inst = testgen::tiny_instance(seed * 77);
        RobinsModel model =
            build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
        SolverConfig dfs = tight_gap();
        dfs.order = SearchOrder::DepthFirst;
        Solution a = solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths,
                                 inst.cfg, tight_gap());
        Solution b =
            solve_exact(model, inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg, dfs);
        REQUIRE(a.status == SolveStatus::ProvenOptimal);
        REQUIRE(b.status == SolveStatus::ProvenOptimal);
        CHECK(a.assignment.objective_value ==
              doctest::Approx(b.assignment.objective_value).epsilon(1e-9));
    }
}

TEST_CASE("brute force size guard trips on oversized instances") {
    Rng rng(1);
    Topology topo = make_builtin("abilene", 1);
    PathTable paths = enumerate_paths(topo, 5);
    SimState state = SimState::fresh(topo);
    std::vector<SliceRequest> arrivals;
    for (std::uint64_t t = 1; t <= 5; ++t)
        arrivals.push_back(testgen::random_slice(rng, t, 4, 0.1, 0.1));
    CHECK_THROWS_AS(brute_force_optimum(state, arrivals, topo, paths, RobustConfig{}),
                    SizeGuardError);
}

TEST_CASE("empty arrivals: zero objective, nothing activated") {
    Rng rng(9);
    Topology topo = testgen::random_topology(rng, 3);
    PathTable paths = enumerate_paths(topo, 2);
    SimState state = SimState::fresh(topo);
    Solution sol = brute_force_optimum(state, {}, topo, paths, RobustConfig{});
    CHECK(sol.assignment.objective_value == 0.0);
    CHECK(sol.assignment.eta == 0);
    RobinsModel model = build_model(state, {}, topo, paths, RobustConfig{});
    Solution ex = solve_exact(model, state, {}, topo, paths, RobustConfig{}, tight_gap());
    CHECK(ex.assignment.objective_value == doctest::Approx(0.0));
    CHECK(ex.status == SolveStatus::ProvenOptimal);
}

TEST_CASE("LP export is deterministic and structurally sound") {
    testgen::TinyInstance inst = testgen::tiny_instance(31);
    RobinsModel model = build_model(inst.state, inst.arrivals, inst.topo, inst.paths, inst.cfg);
    std::string a = export_lp(model);
    std::string b = export_lp(model);
    CHECK(a == b);
    CHECK(a.find("Minimize") != std::string::npos);
    CHECK(a.find("Subject To") != std::string::npos);
    CHECK(a.find("C1:") != std::string::npos);
    CHECK(a.find("Binaries") != std::string::npos);
    CHECK(a.find("End") != std::string::npos);

    // The degenerate no-arrival model exports without a Binaries section.
    RobinsModel empty = build_model(inst.state, {}, inst.topo, inst.paths, inst.cfg);
    std::string e = export_lp(empty);
    CHECK(e.find("Binaries") == std::string::npos);
    CHECK(e.find("C1:") != std::string::npos);
}
