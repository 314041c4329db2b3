#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "onsu/rng.hpp"
#include "onsu/robust.hpp"

using namespace onsu;

namespace {

// Independent oracle: enumerate every deviation subset of size <= gamma.
double subset_max_dev(const std::vector<double>& devs, int gamma) {
    const int n = static_cast<int>(devs.size());
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<int>(__builtin_popcount(mask)) > gamma) continue;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s += devs[static_cast<std::size_t>(i)];
        best = std::max(best, s);
    }
    return best;
}

VmSpec vm_cpu(double cores) {
    VmSpec vm;
    vm.nominal = {cores, 0.0, 0.0};
    return vm;
}

VlSpec vl_rate(double mbps) {
    VlSpec vl;
    vl.nominal_rate = mbps;
    return vl;
}

} // namespace

TEST_CASE("node load examples") {
    VmSpec a = vm_cpu(2.0), b = vm_cpu(4.0);
    std::vector<const VmSpec*> vms{&a, &b};
    // Subset oracle: 6 + max(0.2, 0.4) = 6.4
    CHECK(worst_case_node_load(vms, 1, 0.1).cpu == doctest::Approx(6.4).epsilon(1e-12));
    CHECK(worst_case_node_load(vms, 0, 0.1).cpu == doctest::Approx(6.0).epsilon(1e-12));
    // gamma beyond the population caps at everything deviating.
    CHECK(worst_case_node_load(vms, 5, 0.1).cpu == doctest::Approx(6.6).epsilon(1e-12));
}

TEST_CASE("link load examples") {
    VlSpec a = vl_rate(1000.0), b = vl_rate(500.0);
    std::vector<const VlSpec*> vls{&a, &b};
    CHECK(worst_case_link_load(vls, 1, 0.1) == doctest::Approx(1600.0).epsilon(1e-12));
    CHECK(worst_case_link_load(vls, 0, 0.1) == doctest::Approx(1500.0).epsilon(1e-12));
    CHECK(worst_case_link_load(vls, 2, 0.1) == doctest::Approx(1650.0).epsilon(1e-12));
}

TEST_CASE("matches the subset-enumeration oracle on random populations") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        int n = static_cast<int>(rng.uniform_int(0, 8));
        double delta = rng.uniform(0.0, 1.0);
        int gamma = static_cast<int>(rng.uniform_int(0, 10));
        std::vector<VmSpec> vms;
        std::vector<double> cpu_devs, ram_devs;
        for (int i = 0; i < n; ++i) {
            VmSpec vm;
            vm.nominal = {rng.uniform(0.0, 16.0), rng.uniform(0.0, 64.0), rng.uniform(0.0, 500.0)};
            cpu_devs.push_back(delta * vm.nominal.cpu);
            ram_devs.push_back(delta * vm.nominal.ram);
            vms.push_back(vm);
        }
        std::vector<const VmSpec*> ptrs;
        double cpu_nom = 0.0, ram_nom = 0.0;
        for (const VmSpec& vm : vms) {
            ptrs.push_back(&vm);
            cpu_nom += vm.nominal.cpu;
            ram_nom += vm.nominal.ram;
        }
        ResourceVector wc = worst_case_node_load(ptrs, gamma, delta);
        CHECK(wc.cpu == doctest::Approx(cpu_nom + subset_max_dev(cpu_devs, gamma)).epsilon(1e-9));
        CHECK(wc.ram == doctest::Approx(ram_nom + subset_max_dev(ram_devs, gamma)).epsilon(1e-9));
    }
}

TEST_CASE("monotone in gamma and delta, constant beyond the population") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        int n = static_cast<int>(rng.uniform_int(1, 6));
        std::vector<VmSpec> vms;
        for (int i = 0; i < n; ++i) {
            VmSpec vm;
            vm.nominal = {rng.uniform(0.0, 8.0), rng.uniform(0.0, 32.0), 120.0};
            vms.push_back(vm);
        }
        std::vector<const VmSpec*> ptrs;
        for (const VmSpec& vm : vms) ptrs.push_back(&vm);

        double prev = -1.0;
        for (int g = 0; g <= n + 2; ++g) {
            double v = worst_case_node_load(ptrs, g, 0.3).cpu;
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        CHECK(worst_case_node_load(ptrs, n, 0.3).cpu ==
              doctest::Approx(worst_case_node_load(ptrs, n + 5, 0.3).cpu));

        prev = -1.0;
        for (double d : {0.0, 0.1, 0.2, 0.5, 1.0}) {
            double v = worst_case_node_load(ptrs, 2, d).ram;
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("robust config validation") {
    CHECK_THROWS(RobustConfig{-1, 0, 0.1, 0.1}.validate());
    CHECK_THROWS(RobustConfig{0, 0, 1.5, 0.1}.validate());
    CHECK_NOTHROW(RobustConfig{4, 4, 1.0, 0.0}.validate());
}
