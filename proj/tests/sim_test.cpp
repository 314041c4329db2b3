#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "onsu/sim.hpp"
#include "test_instances.hpp"

using namespace onsu;

namespace {

Topology one_node(double cpu = 10.0) {
    std::string doc = R"({
      "nodes": [{"id": "a", "cpu": )" + std::to_string(cpu) + R"(, "ram": 500,
                 "storage": 4000, "p_max": 540, "p_idle": 170, "switch_power": 184,
                 "port_power": {"40G": 13.6}, "connected_ports": 1}],
      "links": [{"id": "a-a", "u": "a", "v": "a", "bandwidth_mbps": 40000,
                 "rate_class": "40G"}]
    })";
    return load_topology_json(doc);
}

SliceRequest cpu_slice(std::uint64_t tenant, double cpu, int lifespan, bool permanent = false) {
    SliceRequest req;
    req.tenant = tenant;
    req.lifespan = lifespan;
    req.permanent = permanent;
    VmSpec vm;
    vm.id = 1;
    vm.nominal = {cpu, 4.0, 120.0};
    req.vms = {vm};
    return req;
}

Assignment accept_all(const SimState& state, const std::vector<SliceRequest>& arrivals,
                      const Topology& topo, const PathTable& paths, const RobustConfig& cfg) {
    return nea_onsu_admit(state, arrivals, topo, paths, cfg);
}

} // namespace

TEST_CASE("commit reserves nominal plus protection and records the ledger") {
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{1, 1, 0.1, 0.1};
    std::vector<SliceRequest> arrivals{cpu_slice(1, 2.0, 3)};
    Assignment a = accept_all(state, arrivals, topo, paths, cfg);
    REQUIRE(a.accepted.size() == 1);
    commit(state, a, arrivals, 1, topo, paths, cfg);
    // nominal 2 plus worst-case deviation 0.2
    CHECK(state.available[0].cpu == doctest::Approx(10.0 - 2.2).epsilon(1e-12));
    REQUIRE(state.node_reservations.contains(1));
    CHECK(state.node_reservations.at(1)[0].cpu == doctest::Approx(0.2).epsilon(1e-12));
    audit_state(state, topo);
}

TEST_CASE("gamma zero records no reservations") {
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{0, 0, 0.1, 0.1};
    std::vector<SliceRequest> arrivals{cpu_slice(1, 2.0, 3)};
    Assignment a = accept_all(state, arrivals, topo, paths, cfg);
    commit(state, a, arrivals, 1, topo, paths, cfg);
    CHECK(state.node_reservations.empty());
    CHECK(state.link_reservations.empty());
    CHECK(state.available[0].cpu == doctest::Approx(8.0));
}

TEST_CASE("empty assignment commit leaves holdings untouched") {
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{1, 1, 0.1, 0.1};
    Assignment empty;
    commit(state, empty, {}, 1, topo, paths, cfg);
    CHECK(state.available[0].cpu == 10.0);
    CHECK(state.active_slices.empty());
    CHECK(state.clock == 1);
}

TEST_CASE("three-slot scripted ledger scenario matches hand accounting") {
    // Slot 1: slice X (2 cores, phi=1). Slot 2: slice Y (4 cores, phi large).
    // gamma1=1, delta=0.1. Per-cohort ledgers: O^1 = 0.2, O^2 = 0.4.
    // X releases at the start of slot 3 (admission + phi + 1), freeing its
    // nominal and the slot-1 ledger; Y's 0.4 stays reserved.
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    RobustConfig cfg{1, 1, 0.1, 0.1};
    SimState state = SimState::fresh(topo);

    std::vector<SliceRequest> slot1{cpu_slice(1, 2.0, 1)};
    Assignment a1 = accept_all(state, slot1, topo, paths, cfg);
    REQUIRE(a1.accepted.size() == 1);
    commit(state, a1, slot1, 1, topo, paths, cfg);
    CHECK(state.available[0].cpu == doctest::Approx(10.0 - 2.2));

    release_expired(state, topo);  // start of slot 2: phi 1 -> 0
    std::vector<SliceRequest> slot2{cpu_slice(2, 4.0, 9)};
    Assignment a2 = accept_all(state, slot2, topo, paths, cfg);
    REQUIRE(a2.accepted.size() == 1);
    commit(state, a2, slot2, 2, topo, paths, cfg);
    // held: 2 + 0.2 + 4 + 0.4
    CHECK(state.available[0].cpu == doctest::Approx(10.0 - 6.6));
    CHECK(state.node_reservations.at(1)[0].cpu == doctest::Approx(0.2));
    CHECK(state.node_reservations.at(2)[0].cpu == doctest::Approx(0.4));
    audit_state(state, topo);

    ReleaseSummary rel = release_expired(state, topo);  // start of slot 3: X expires
    CHECK(rel.released.size() == 1);
    CHECK(rel.released[0].tenant == 1);
    CHECK(rel.ledger_slots_freed == std::vector<int>{1});
    // X's nominal and the whole slot-1 ledger return; Y keeps 4 + 0.4.
    CHECK(state.available[0].cpu == doctest::Approx(10.0 - 4.4));
    CHECK(!state.node_reservations.contains(1));
    CHECK(state.node_reservations.at(2)[0].cpu == doctest::Approx(0.4));
    audit_state(state, topo);

    // Adversary: the remaining VM deviating stays within capacity.
    double worst = 4.0 + 0.4;
    CHECK(worst <= topo.nodes[0].capacity.cpu - (10.0 - 4.4 - 4.4) + 1e-9);
}

TEST_CASE("permanent slices never expire") {
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    RobustConfig cfg{0, 0, 0.0, 0.0};
    SimState state = SimState::fresh(topo);
    std::vector<SliceRequest> slot1{cpu_slice(1, 2.0, 0, /*permanent=*/true)};
    Assignment a = accept_all(state, slot1, topo, paths, cfg);
    REQUIRE(a.accepted.size() == 1);
    commit(state, a, slot1, 1, topo, paths, cfg);
    for (int s = 0; s < 50; ++s) {
        ReleaseSummary rel = release_expired(state, topo);
        CHECK(rel.released.empty());
    }
    CHECK(state.active_slices.size() == 1);
    CHECK(state.available[0].cpu == doctest::Approx(8.0));
}

TEST_CASE("full drain restores capacities exactly and zeroes power") {
    WorkloadParams wp;
    wp.slots = 12;
    wp.delta1 = wp.delta2 = 0.1;
    for (std::uint64_t seed : {3ULL, 8ULL, 21ULL}) {
        CAPTURE(seed);
        Topology topo = make_builtin("abilene6", seed);
        PathTable paths = enumerate_paths(topo, 3);
        ArrivalSchedule schedule = generate_schedule(seed, wp);
        SimulationOptions opts;
        opts.mode = AdmitMode::Heuristic;
        opts.robust = RobustConfig{2, 2, 0.1, 0.1};
        opts.drain_after_schedule = true;
        SimulationResult res = run_simulation(topo, paths, schedule, opts);
        CHECK(res.end_state.active_slices.empty());
        for (std::size_t n = 0; n < topo.nodes.size(); ++n) {
            // Bit-exact restoration, not approximate.
            CHECK(res.end_state.available[n].cpu == topo.nodes[n].capacity.cpu);
            CHECK(res.end_state.available[n].ram == topo.nodes[n].capacity.ram);
            CHECK(res.end_state.available[n].storage == topo.nodes[n].capacity.storage);
        }
        for (std::size_t l = 0; l < topo.links.size(); ++l)
            CHECK(res.end_state.avail_bw[l] == topo.links[l].bandwidth_mbps);
        CHECK(res.end_state.power_used_nodes == 0.0);
        CHECK(res.end_state.power_used_switches == 0.0);
    }
}

TEST_CASE("run_simulation is deterministic") {
    WorkloadParams wp;
    wp.slots = 8;
    Topology topo = make_builtin("abilene6", 5);
    PathTable paths = enumerate_paths(topo, 3);
    ArrivalSchedule schedule = generate_schedule(5, wp);
    SimulationOptions opts;
    opts.mode = AdmitMode::Heuristic;
    opts.robust = RobustConfig{1, 1, 0.1, 0.1};
    SimulationResult a = run_simulation(topo, paths, schedule, opts);
    SimulationResult b = run_simulation(topo, paths, schedule, opts);
    REQUIRE(a.metrics.records.size() == b.metrics.records.size());
    for (std::size_t i = 0; i < a.metrics.records.size(); ++i) {
        CHECK(a.metrics.records[i].accepted == b.metrics.records[i].accepted);
        CHECK(a.metrics.records[i].node_power == b.metrics.records[i].node_power);
        CHECK(a.metrics.records[i].active_links == b.metrics.records[i].active_links);
    }
    CHECK(state_to_json(a.end_state, topo) == state_to_json(b.end_state, topo));
}

TEST_CASE("exhaustive adversary never breaches capacity on committed states") {
    WorkloadParams wp;
    wp.slots = 10;
    wp.delta1 = wp.delta2 = 0.1;
    Topology topo = make_builtin("abilene6", 11);
    PathTable paths = enumerate_paths(topo, 3);
    ArrivalSchedule schedule = generate_schedule(11, wp);
    RobustConfig cfg{2, 2, 0.1, 0.1};

    SimState state = SimState::fresh(topo);
    SolverConfig scfg;
    for (int slot = 1; slot <= wp.slots; ++slot) {
        if (slot > 1) release_expired(state, topo);
        const auto& arrivals = schedule.slots[static_cast<std::size_t>(slot - 1)];
        Assignment a = admit(state, arrivals, AdmitMode::Heuristic, topo, paths, cfg, scfg);
        commit(state, a, arrivals, slot, topo, paths, cfg);

        // Adversary: any subset of at most gamma hosted VMs at nominal +
        // deviation; exhaustive for populations up to 8, top-gamma beyond.
        for (std::size_t n = 0; n < topo.nodes.size(); ++n) {
            auto vms = state.vms_on_node(static_cast<int>(n));
            double base = 0.0;
            std::vector<double> devs;
            for (const VmSpec* vm : vms) {
                base += vm->nominal.cpu;
                devs.push_back(cfg.delta1 * vm->nominal.cpu);
            }
            double worst_dev = 0.0;
            if (devs.size() <= 8) {
                for (unsigned mask = 0; mask < (1u << devs.size()); ++mask) {
                    if (static_cast<int>(__builtin_popcount(mask)) > cfg.gamma1) continue;
                    double s = 0.0;
                    for (std::size_t i = 0; i < devs.size(); ++i)
                        if (mask & (1u << i)) s += devs[i];
                    worst_dev = std::max(worst_dev, s);
                }
            } else {
                std::sort(devs.rbegin(), devs.rend());
                for (int i = 0; i < cfg.gamma1 && i < static_cast<int>(devs.size()); ++i)
                    worst_dev += devs[static_cast<std::size_t>(i)];
            }
            CHECK(base + worst_dev <= topo.nodes[n].capacity.cpu + 1e-6);
        }
        for (std::size_t l = 0; l < topo.links.size(); ++l) {
            auto vls = state.vls_on_link(static_cast<int>(l));
            double base = 0.0;
            std::vector<double> devs;
            for (const VlSpec* vl : vls) {
                base += vl->nominal_rate;
                devs.push_back(cfg.delta2 * vl->nominal_rate);
            }
            std::sort(devs.rbegin(), devs.rend());
            double worst_dev = 0.0;
            for (int i = 0; i < cfg.gamma2 && i < static_cast<int>(devs.size()); ++i)
                worst_dev += devs[static_cast<std::size_t>(i)];
            CHECK(base + worst_dev <= topo.links[l].bandwidth_mbps + 1e-6);
        }
    }
}

TEST_CASE("per-slot objective dominance between engines on the same state") {
    WorkloadParams wp;
    wp.slots = 5;
    wp.lambda = 1.5;
    Topology topo = make_builtin("abilene6", 23);
    // Tiny k keeps exact solves fast here.
    PathTable paths = enumerate_paths(topo, 1);
    ArrivalSchedule schedule = generate_schedule(23, wp);
    RobustConfig cfg{1, 1, 0.1, 0.1};
    SolverConfig scfg;
    scfg.gap_tolerance = 1e-9;

    SimState state = SimState::fresh(topo);
    for (int slot = 1; slot <= wp.slots; ++slot) {
        if (slot > 1) release_expired(state, topo);
        const auto& arrivals = schedule.slots[static_cast<std::size_t>(slot - 1)];
        Assignment heur = admit(state, arrivals, AdmitMode::Heuristic, topo, paths, cfg, scfg);
        Assignment exact = admit(state, arrivals, AdmitMode::Exact, topo, paths, cfg, scfg);
        CHECK(heur.objective_value >= exact.objective_value - 1e-9);
        commit(state, exact, arrivals, slot, topo, paths, cfg);
        audit_state(state, topo);
    }
}

TEST_CASE("admit aborts on an engine-checker mismatch") {
    // Force an inconsistency by corrupting an assignment and committing it
    // through the public validation path.
    Topology topo = one_node();
    PathTable paths = enumerate_paths(topo, 1);
    SimState state = SimState::fresh(topo);
    RobustConfig cfg{0, 0, 0.0, 0.0};
    std::vector<SliceRequest> arrivals{cpu_slice(1, 2.0, 3)};
    Assignment bad = accept_all(state, arrivals, topo, paths, cfg);
    bad.eta = 5;  // corrupt
    auto violations = check_solution(state, arrivals, topo, paths, cfg, bad, 1.0);
    CHECK(!violations.empty());
}
