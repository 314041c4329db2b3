#include "onsu/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "onsu/errors.hpp"

namespace onsu {

using nlohmann::json;
namespace fs = std::filesystem;

std::string mode_name(AdmitMode mode) {
    return mode == AdmitMode::Exact ? "exact" : "heuristic";
}

std::vector<ScenarioPoint> gamma_sweep_points(double delta) {
    std::vector<ScenarioPoint> pts;
    for (int g = 0; g <= 4; ++g) {
        ScenarioPoint p;
        p.label = "gamma" + std::to_string(g);
        p.robust = RobustConfig{g, g, delta, delta};
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<ScenarioPoint> delta_sweep_points(int gamma) {
    std::vector<ScenarioPoint> pts;
    for (double d : {0.0, 0.1, 0.3}) {
        ScenarioPoint p;
        char buf[32];
        std::snprintf(buf, sizeof buf, "delta%02d", static_cast<int>(std::lround(d * 100)));
        p.label = buf;
        p.robust = RobustConfig{gamma, gamma, d, d};
        pts.push_back(std::move(p));
    }
    return pts;
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ValidationError("experiment: seed list must be nonempty");
    if (modes.empty()) throw ValidationError("experiment: at least one mode required");
    if (k_paths < 1) throw ValidationError("experiment: k_paths must be >= 1");
    workload.validate();
    solver.validate();
    if (scenario == Scenario::Custom && custom_points.empty())
        throw ValidationError("experiment: custom scenario needs points");
    for (const ScenarioPoint& p : points()) p.robust.validate();
}

std::vector<ScenarioPoint> ExperimentConfig::points() const {
    switch (scenario) {
        case Scenario::GammaSweep: return gamma_sweep_points(0.1);
        case Scenario::DeltaSweep: return delta_sweep_points(1);
        default: return custom_points;
    }
}

namespace {

struct Agg {
    std::vector<double> acceptance, node_power, switch_power, total_power, servers, links,
        admit_time;
};

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

json summary_json(const ExperimentConfig& config, const ScenarioPoint& point, AdmitMode mode,
                  std::uint64_t seed, const Topology& topo, const MetricsSeries& metrics) {
    json doc;
    doc["version"] = "onsu 1.0.0";
    doc["topology"] = config.topology;
    doc["seed"] = seed;
    doc["mode"] = mode_name(mode);
    doc["scenario_point"] = point.label;
    doc["robust"] = {{"gamma1", point.robust.gamma1},
                     {"gamma2", point.robust.gamma2},
                     {"delta1", point.robust.delta1},
                     {"delta2", point.robust.delta2}};
    doc["k_paths"] = config.k_paths;
    doc["slots"] = config.workload.slots;
    doc["acceptance_ratio_convention"] = "100 when no slice arrived";
    // The per-seed server draw, so power figures can be interpreted.
    doc["server_draw"] = json::array();
    for (const NodeSpec& n : topo.nodes)
        doc["server_draw"].push_back(
            json{{"id", n.id}, {"cpu", n.capacity.cpu}, {"p_max", n.p_max}});
    doc["total_arrived"] = metrics.total_arrived;
    doc["total_accepted"] = metrics.total_accepted;
    doc["final_acceptance_ratio"] = metrics.final_acceptance_ratio;
    double mean_total = 0.0, mean_prot_cpu = 0.0, mean_prot_bw = 0.0;
    for (const SlotRecord& r : metrics.records) mean_total += r.total_power;
    for (const ProtectionRecord& p : metrics.protection) {
        mean_prot_cpu += p.node_cpu;
        mean_prot_bw += p.link_mbps;
    }
    if (!metrics.records.empty()) {
        mean_total /= static_cast<double>(metrics.records.size());
        mean_prot_cpu /= static_cast<double>(metrics.protection.size());
        mean_prot_bw /= static_cast<double>(metrics.protection.size());
    }
    doc["mean_total_power"] = mean_total;
    doc["mean_reserved_cpu"] = mean_prot_cpu;
    doc["mean_reserved_mbps"] = mean_prot_bw;
    return doc;
}

} // namespace

std::string aggregate_csv(const std::vector<RunOutcome>& outcomes) {
    // Keyed by (point label, mode); seed order does not affect the result
    // because every statistic is symmetric in its samples.
    std::map<std::pair<std::string, std::string>, Agg> groups;
    for (const RunOutcome& run : outcomes) {
        Agg& g = groups[{run.point.label, mode_name(run.mode)}];
        g.acceptance.push_back(run.metrics.final_acceptance_ratio);
        double np = 0.0, sp = 0.0, tp = 0.0, sv = 0.0, ln = 0.0, at = 0.0;
        for (const SlotRecord& r : run.metrics.records) {
            np += r.node_power;
            sp += r.switch_power;
            tp += r.total_power;
            sv += r.active_servers;
            ln += r.active_links;
            at += r.admit_wall_time;
        }
        double slots = std::max<std::size_t>(run.metrics.records.size(), 1);
        g.node_power.push_back(np / slots);
        g.switch_power.push_back(sp / slots);
        g.total_power.push_back(tp / slots);
        g.servers.push_back(sv / slots);
        g.links.push_back(ln / slots);
        g.admit_time.push_back(at / slots);
    }
    std::string out =
        "scenario_point,mode,seeds,acceptance_ratio_mean,acceptance_ratio_std,node_power_mean,"
        "node_power_std,switch_power_mean,switch_power_std,total_power_mean,total_power_std,"
        "active_servers_mean,active_servers_std,active_links_mean,active_links_std,"
        "admit_time_mean,admit_time_std\n";
    for (const auto& [key, g] : groups) {
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,"
                      "%.6f,%.6f\n",
                      key.first.c_str(), key.second.c_str(), g.acceptance.size(),
                      mean(g.acceptance), stddev(g.acceptance), mean(g.node_power),
                      stddev(g.node_power), mean(g.switch_power), stddev(g.switch_power),
                      mean(g.total_power), stddev(g.total_power), mean(g.servers),
                      stddev(g.servers), mean(g.links), stddev(g.links), mean(g.admit_time),
                      stddev(g.admit_time));
        out += buf;
    }
    return out;
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    std::vector<RunOutcome> outcomes;

    for (const ScenarioPoint& point : config.points()) {
        for (std::uint64_t seed : config.seeds) {
            Topology topo = resolve_topology(config.topology, seed);
            PathTable paths = enumerate_paths(topo, config.k_paths);
            WorkloadParams wp = config.workload;
            wp.delta1 = point.robust.delta1;
            wp.delta2 = point.robust.delta2;
            ArrivalSchedule schedule = generate_schedule(seed, wp);
            for (AdmitMode mode : config.modes) {
                SimulationOptions opts;
                opts.mode = mode;
                opts.robust = point.robust;
                opts.solver = config.solver;
                opts.model = config.model;
                SimulationResult res;
                try {
                    res = run_simulation(topo, paths, schedule, opts);
                } catch (const std::exception& e) {
                    throw InternalError("experiment " + point.label + " mode " +
                                        mode_name(mode) + " seed " + std::to_string(seed) +
                                        ": " + e.what());
                }

                std::string stem = point.label + "_" + mode_name(mode) + "_seed" +
                                   std::to_string(seed);
                {
                    std::ofstream csv(fs::path(config.out_dir) / ("slots_" + stem + ".csv"));
                    csv << slot_csv_header() << "\n";
                    for (const SlotRecord& r : res.metrics.records)
                        csv << slot_csv_row(r) << "\n";
                }
                {
                    std::ofstream js(fs::path(config.out_dir) / ("summary_" + stem + ".json"));
                    js << summary_json(config, point, mode, seed, topo, res.metrics).dump(2)
                       << "\n";
                }
                RunOutcome run;
                run.point = point;
                run.mode = mode;
                run.seed = seed;
                run.metrics = std::move(res.metrics);
                outcomes.push_back(std::move(run));
            }
        }
    }
    std::ofstream agg(fs::path(config.out_dir) / "aggregate.csv");
    agg << aggregate_csv(outcomes);
    return outcomes;
}

} // namespace onsu
