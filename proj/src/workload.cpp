#include "onsu/workload.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "onsu/errors.hpp"

namespace onsu {

using nlohmann::json;

const VmSpec& SliceRequest::vm(int id) const {
    for (const VmSpec& v : vms)
        if (v.id == id) return v;
    throw ValidationError("slice " + key() + " has no VM " + std::to_string(id));
}

int ArrivalSchedule::total_arrivals() const {
    int total = 0;
    for (const auto& s : slots) total += static_cast<int>(s.size());
    return total;
}

void WorkloadParams::validate() const {
    if (slots < 1) throw ValidationError("workload: slots must be >= 1");
    if (lambda < 0.0) throw ValidationError("workload: lambda must be >= 0");
    if (max_arrivals < 0) throw ValidationError("workload: max_arrivals must be >= 0");
    if (lifespan_mean <= 0.0) throw ValidationError("workload: lifespan mean must be > 0");
    if (vm_count_min < 2 || vm_count_max < vm_count_min)
        throw ValidationError("workload: VM count range must satisfy 2 <= min <= max");
    if (vm_types.empty()) throw ValidationError("workload: VM type table must be nonempty");
    if (rate_min_mbps <= 0.0 || rate_max_mbps < rate_min_mbps)
        throw ValidationError("workload: bad VL rate range");
    if (delay_min_ms < 0.0 || delay_max_ms < delay_min_ms)
        throw ValidationError("workload: bad VL delay range");
    if (delta1 < 0.0 || delta1 > 1.0 || delta2 < 0.0 || delta2 > 1.0)
        throw ValidationError("workload: delta values must lie in [0, 1]");
}

std::vector<std::pair<int, int>> ba_slice_graph(Rng& rng, int n_vms) {
    if (n_vms < 2) throw ValidationError("ba_slice_graph requires at least 2 VMs");
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(static_cast<std::size_t>(n_vms) + 1, 0);
    edges.emplace_back(1, 2);
    degree[1] = degree[2] = 1;
    for (int v = 3; v <= n_vms; ++v) {
        // Attach to an existing vertex with probability proportional to degree.
        int total = 2 * static_cast<int>(edges.size());
        int pick = static_cast<int>(rng.uniform_int(1, total));
        int target = 0;
        for (int u = 1; u < v; ++u) {
            pick -= degree[static_cast<std::size_t>(u)];
            if (pick <= 0) {
                target = u;
                break;
            }
        }
        edges.emplace_back(target, v);
        ++degree[static_cast<std::size_t>(target)];
        degree[static_cast<std::size_t>(v)] = 1;
    }
    return edges;
}

ArrivalSchedule generate_schedule(std::uint64_t seed, const WorkloadParams& params) {
    params.validate();
    ArrivalSchedule sched;
    sched.seed = seed;
    sched.params = params;
    sched.slots.resize(static_cast<std::size_t>(params.slots));

    Rng rng(seed);
    std::uint64_t next_tenant = 1;
    for (int slot = 1; slot <= params.slots; ++slot) {
        int count = std::min(rng.poisson(params.lambda), params.max_arrivals);
        for (int i = 0; i < count; ++i) {
            SliceRequest req;
            req.tenant = next_tenant++;
            req.slice = 1;
            req.arrival_slot = slot;
            int n_vms = static_cast<int>(rng.uniform_int(params.vm_count_min, params.vm_count_max));
            for (int m = 1; m <= n_vms; ++m) {
                const ResourceVector& type = params.vm_types[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(params.vm_types.size()) - 1))];
                VmSpec vm;
                vm.id = m;
                vm.nominal = type;
                vm.deviation = params.delta1 * type;
                req.vms.push_back(vm);
            }
            int vl_id = 1;
            for (auto [a, b] : ba_slice_graph(rng, n_vms)) {
                VlSpec vl;
                vl.id = vl_id++;
                vl.m = a;
                vl.m2 = b;
                vl.nominal_rate = static_cast<double>(rng.uniform_int(
                    static_cast<std::int64_t>(params.rate_min_mbps),
                    static_cast<std::int64_t>(params.rate_max_mbps)));
                vl.rate_deviation = params.delta2 * vl.nominal_rate;
                vl.max_delay_ms = rng.uniform(params.delay_min_ms, params.delay_max_ms);
                req.vls.push_back(vl);
            }
            req.lifespan = std::max(1, static_cast<int>(std::lround(
                                           rng.exponential(params.lifespan_mean))));
            sched.slots[static_cast<std::size_t>(slot - 1)].push_back(std::move(req));
        }
    }
    return sched;
}

namespace {

json params_to_json(const WorkloadParams& p) {
    json types = json::array();
    for (const ResourceVector& t : p.vm_types)
        types.push_back(json{{"cpu", t.cpu}, {"ram", t.ram}, {"storage", t.storage}});
    return json{{"slots", p.slots},
                {"lambda", p.lambda},
                {"max_arrivals", p.max_arrivals},
                {"lifespan_mean", p.lifespan_mean},
                {"vm_count_min", p.vm_count_min},
                {"vm_count_max", p.vm_count_max},
                {"vm_types", types},
                {"rate_min_mbps", p.rate_min_mbps},
                {"rate_max_mbps", p.rate_max_mbps},
                {"delay_min_ms", p.delay_min_ms},
                {"delay_max_ms", p.delay_max_ms},
                {"delta1", p.delta1},
                {"delta2", p.delta2}};
}

WorkloadParams params_from_json(const json& j) {
    WorkloadParams p;
    p.slots = j.at("slots").get<int>();
    p.lambda = j.at("lambda").get<double>();
    p.max_arrivals = j.at("max_arrivals").get<int>();
    p.lifespan_mean = j.at("lifespan_mean").get<double>();
    p.vm_count_min = j.at("vm_count_min").get<int>();
    p.vm_count_max = j.at("vm_count_max").get<int>();
    p.vm_types.clear();
    for (const json& t : j.at("vm_types"))
        p.vm_types.push_back({t.at("cpu").get<double>(), t.at("ram").get<double>(),
                              t.at("storage").get<double>()});
    p.rate_min_mbps = j.at("rate_min_mbps").get<double>();
    p.rate_max_mbps = j.at("rate_max_mbps").get<double>();
    p.delay_min_ms = j.at("delay_min_ms").get<double>();
    p.delay_max_ms = j.at("delay_max_ms").get<double>();
    p.delta1 = j.at("delta1").get<double>();
    p.delta2 = j.at("delta2").get<double>();
    return p;
}

json rv_to_json(const ResourceVector& v) {
    return json{{"cpu", v.cpu}, {"ram", v.ram}, {"storage", v.storage}};
}

ResourceVector rv_from_json(const json& j) {
    return {j.at("cpu").get<double>(), j.at("ram").get<double>(), j.at("storage").get<double>()};
}

} // namespace

std::string schedule_to_json(const ArrivalSchedule& sched) {
    json doc;
    doc["seed"] = sched.seed;
    doc["params"] = params_to_json(sched.params);
    doc["slots"] = json::array();
    for (const auto& slot : sched.slots) {
        json arr = json::array();
        for (const SliceRequest& req : slot) {
            json vms = json::array();
            for (const VmSpec& vm : req.vms)
                vms.push_back(json{{"id", vm.id},
                                   {"nominal", rv_to_json(vm.nominal)},
                                   {"deviation", rv_to_json(vm.deviation)}});
            json vls = json::array();
            for (const VlSpec& vl : req.vls)
                vls.push_back(json{{"id", vl.id},
                                   {"m", vl.m},
                                   {"m2", vl.m2},
                                   {"nominal_rate", vl.nominal_rate},
                                   {"rate_deviation", vl.rate_deviation},
                                   {"max_delay_ms", vl.max_delay_ms}});
            arr.push_back(json{{"tenant", req.tenant},
                               {"slice", req.slice},
                               {"arrival_slot", req.arrival_slot},
                               {"lifespan", req.lifespan},
                               {"permanent", req.permanent},
                               {"vms", vms},
                               {"vls", vls}});
        }
        doc["slots"].push_back(std::move(arr));
    }
    return doc.dump(2);
}

ArrivalSchedule schedule_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schedule document: ") + e.what());
    }
    ArrivalSchedule sched;
    try {
        sched.seed = doc.at("seed").get<std::uint64_t>();
        sched.params = params_from_json(doc.at("params"));
        for (const json& slot : doc.at("slots")) {
            std::vector<SliceRequest> arrivals;
            for (const json& jr : slot) {
                SliceRequest req;
                req.tenant = jr.at("tenant").get<std::uint64_t>();
                req.slice = jr.at("slice").get<std::uint32_t>();
                req.arrival_slot = jr.at("arrival_slot").get<int>();
                req.lifespan = jr.at("lifespan").get<int>();
                req.permanent = jr.at("permanent").get<bool>();
                for (const json& jv : jr.at("vms")) {
                    VmSpec vm;
                    vm.id = jv.at("id").get<int>();
                    vm.nominal = rv_from_json(jv.at("nominal"));
                    vm.deviation = rv_from_json(jv.at("deviation"));
                    req.vms.push_back(vm);
                }
                for (const json& jv : jr.at("vls")) {
                    VlSpec vl;
                    vl.id = jv.at("id").get<int>();
                    vl.m = jv.at("m").get<int>();
                    vl.m2 = jv.at("m2").get<int>();
                    vl.nominal_rate = jv.at("nominal_rate").get<double>();
                    vl.rate_deviation = jv.at("rate_deviation").get<double>();
                    vl.max_delay_ms = jv.at("max_delay_ms").get<double>();
                    req.vls.push_back(vl);
                }
                arrivals.push_back(std::move(req));
            }
            sched.slots.push_back(std::move(arrivals));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("schedule document: ") + e.what());
    }
    return sched;
}

} // namespace onsu
