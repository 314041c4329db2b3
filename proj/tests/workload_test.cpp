#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "onsu/errors.hpp"
#include "onsu/workload.hpp"

using namespace onsu;

TEST_CASE("same seed and params give byte-identical schedules") {
    WorkloadParams p;
    p.slots = 20;
    ArrivalSchedule a = generate_schedule(123, p);
    ArrivalSchedule b = generate_schedule(123, p);
    CHECK(schedule_to_json(a) == schedule_to_json(b));
    ArrivalSchedule c = generate_schedule(124, p);
    CHECK(schedule_to_json(a) != schedule_to_json(c));
}

TEST_CASE("lambda zero gives empty slots") {
    WorkloadParams p;
    p.slots = 10;
    p.lambda = 0.0;
    ArrivalSchedule s = generate_schedule(7, p);
    CHECK(s.total_arrivals() == 0);
}

TEST_CASE("defaults: arrivals bounded, attributes within ranges") {
    WorkloadParams p;  // section-VI defaults: 40 slots, lambda 2 capped at 5
    int grand_total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ArrivalSchedule s = generate_schedule(seed, p);
        grand_total += s.total_arrivals();
        for (const auto& slot : s.slots) {
            CHECK(slot.size() <= 5);
            for (const SliceRequest& req : slot) {
                CHECK(req.vms.size() >= 2);
                CHECK(req.vms.size() <= 4);
                CHECK(req.vls.size() == req.vms.size() - 1);
                CHECK(req.lifespan >= 1);
                for (const VmSpec& vm : req.vms) {
                    bool known = (vm.nominal.cpu == 1 && vm.nominal.ram == 2) ||
                                 (vm.nominal.cpu == 2 && vm.nominal.ram == 4) ||
                                 (vm.nominal.cpu == 4 && vm.nominal.ram == 16);
                    CHECK(known);
                    CHECK(vm.nominal.storage == 120.0);
                    CHECK(vm.deviation.cpu == doctest::Approx(0.1 * vm.nominal.cpu));
                }
                for (const VlSpec& vl : req.vls) {
                    CHECK(vl.nominal_rate >= 100.0);
                    CHECK(vl.nominal_rate <= 1500.0);
                    CHECK(vl.max_delay_ms >= 4.0);
                    CHECK(vl.max_delay_ms <= 13.0);
                    CHECK(vl.rate_deviation == doctest::Approx(0.1 * vl.nominal_rate));
                    CHECK(vl.m != vl.m2);
                }
            }
        }
    }
    // 40 slots, Poisson(2) capped at 5: across 20 seeds the total stays well
    // inside [40, 200] per seed on average.
    CHECK(grand_total >= 20 * 40);
    CHECK(grand_total <= 20 * 200);
}

TEST_CASE("slice graphs are connected trees") {
    WorkloadParams p;
    ArrivalSchedule s = generate_schedule(99, p);
    for (const auto& slot : s.slots)
        for (const SliceRequest& req : slot) {
            // n-1 edges and connectivity make a tree.
            std::map<int, std::set<int>> adj;
            for (const VlSpec& vl : req.vls) {
                adj[vl.m].insert(vl.m2);
                adj[vl.m2].insert(vl.m);
            }
            std::set<int> seen;
            std::vector<int> stack{1};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (!seen.insert(v).second) continue;
                for (int w : adj[v]) stack.push_back(w);
            }
            CHECK(seen.size() == req.vms.size());
        }
}

TEST_CASE("ba_slice_graph basics") {
    Rng rng(5);
    CHECK(ba_slice_graph(rng, 2) == std::vector<std::pair<int, int>>{{1, 2}});
    auto edges = ba_slice_graph(rng, 4);
    CHECK(edges.size() == 3);
    CHECK_THROWS_AS(ba_slice_graph(rng, 1), ValidationError);
}

TEST_CASE("preferential attachment skews degree toward early vertices") {
    // With m = 1 over 4 vertices, vertex arriving third attaches to {1,2}
    // by degree; the expected degree of vertex 1 exceeds that of vertex 4
    // (always 1). Check the empirical skew over many graphs.
    Rng rng(2024);
    const int trials = 10000;
    double deg1 = 0.0, deg4 = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto edges = ba_slice_graph(rng, 4);
        int d1 = 0, d4 = 0;
        for (auto [a, b] : edges) {
            if (a == 1 || b == 1) ++d1;
            if (a == 4 || b == 4) ++d4;
        }
        deg1 += d1;
        deg4 += d4;
    }
    deg1 /= trials;
    deg4 /= trials;
    CHECK(deg4 == doctest::Approx(1.0));  // the last vertex only ever attaches once
    CHECK(deg1 > 1.3);                    // early vertices accumulate attachments
}

TEST_CASE("attribute marginals sit near the range midpoints") {
    WorkloadParams p;
    p.slots = 2500;
    p.lambda = 3.0;
    ArrivalSchedule s = generate_schedule(31337, p);
    double rate_sum = 0.0, delay_sum = 0.0;
    int n_vls = 0;
    for (const auto& slot : s.slots)
        for (const SliceRequest& req : slot)
            for (const VlSpec& vl : req.vls) {
                rate_sum += vl.nominal_rate;
                delay_sum += vl.max_delay_ms;
                ++n_vls;
            }
    REQUIRE(n_vls > 10000);
    CHECK(rate_sum / n_vls == doctest::Approx(800.0).epsilon(0.05));
    CHECK(delay_sum / n_vls == doctest::Approx(8.5).epsilon(0.05));
}

TEST_CASE("schedule export and import round trip") {
    WorkloadParams p;
    p.slots = 12;
    ArrivalSchedule a = generate_schedule(55, p);
    ArrivalSchedule b = schedule_from_json(schedule_to_json(a));
    CHECK(schedule_to_json(a) == schedule_to_json(b));
}

TEST_CASE("invalid params are rejected") {
    WorkloadParams p;
    p.lambda = -1.0;
    CHECK_THROWS_AS(generate_schedule(1, p), ValidationError);
    WorkloadParams q;
    q.vm_types.clear();
    CHECK_THROWS_AS(generate_schedule(1, q), ValidationError);
}
