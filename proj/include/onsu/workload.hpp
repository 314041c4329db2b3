#ifndef ONSU_WORKLOAD_HPP
#define ONSU_WORKLOAD_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "onsu/resources.hpp"
#include "onsu/rng.hpp"

namespace onsu {

struct VmSpec {
    int id = 0;                // unique within its slice
    ResourceVector nominal;    // requested capacities
    ResourceVector deviation;  // maximum demand deviation (delta1 * nominal)
};

struct VlSpec {
    int id = 0;
    int m = 0;  // endpoint VM ids, distinct
    int m2 = 0;
    double nominal_rate = 0.0;    // Mbps
    double rate_deviation = 0.0;  // delta2 * nominal_rate
    double max_delay_ms = 0.0;    // tolerable propagation delay
};

// One tenant-owned virtual network. Tenants carry a single slice each, so
// (tenant, slice) identifies a request globally.
struct SliceRequest {
    std::uint64_t tenant = 0;
    std::uint32_t slice = 1;
    std::vector<VmSpec> vms;
    std::vector<VlSpec> vls;
    int lifespan = 0;  // remaining full slots; ignored when permanent
    bool permanent = false;
    int arrival_slot = 0;

    const VmSpec& vm(int id) const;
    std::string key() const {
        return std::to_string(tenant) + "." + std::to_string(slice);
    }
};

struct WorkloadParams {
    int slots = 40;
    double lambda = 2.0;       // mean arrivals per slot
    int max_arrivals = 5;      // truncation cap
    double lifespan_mean = 10.0;
    int vm_count_min = 2;
    int vm_count_max = 4;
    std::vector<ResourceVector> vm_types = {
        {1.0, 2.0, 120.0}, {2.0, 4.0, 120.0}, {4.0, 16.0, 120.0}};
    double rate_min_mbps = 100.0;   // VL rate drawn as an integer in range
    double rate_max_mbps = 1500.0;
    double delay_min_ms = 4.0;
    double delay_max_ms = 13.0;
    double delta1 = 0.1;  // relative VM demand deviation
    double delta2 = 0.1;  // relative VL rate deviation

    void validate() const;
};

struct ArrivalSchedule {
    std::uint64_t seed = 0;
    WorkloadParams params;
    std::vector<std::vector<SliceRequest>> slots;  // slots[i] = arrivals of slot i+1

    int total_arrivals() const;
};

// Barabasi-Albert preferential attachment with one edge per new vertex:
// returns a connected tree over VM ids 1..n_vms as (m, m') pairs.
std::vector<std::pair<int, int>> ba_slice_graph(Rng& rng, int n_vms);

// Deterministic function of (seed, params).
ArrivalSchedule generate_schedule(std::uint64_t seed, const WorkloadParams& params);

std::string schedule_to_json(const ArrivalSchedule& sched);
ArrivalSchedule schedule_from_json(const std::string& text);

} // namespace onsu

#endif
