// onsu: admission-control and resource-allocation simulator for network
// slices under demand uncertainty. Subcommands: simulate, experiment,
// export-lp, validate.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "onsu/errors.hpp"
#include "onsu/experiment.hpp"
#include "onsu/sim.hpp"
#include "onsu/solver.hpp"

namespace fs = std::filesystem;
using namespace onsu;

namespace {

struct CommonArgs {
    std::string topology = "abilene";
    std::uint64_t seed = 1;
    int slots = 40;
    std::string mode = "heuristic";
    int gamma = 0, gamma1 = -1, gamma2 = -1;
    double delta = 0.1, delta1 = -1.0, delta2 = -1.0;
    int k_paths = 5;
    double time_limit = 60.0;
    std::string eta_weight = "auto";
    bool paper_faithful = false;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--topology", a.topology, "builtin name (abilene, abilene6) or document path");
    cmd->add_option("--seed", a.seed, "workload and server-draw seed");
    cmd->add_option("--slots", a.slots, "number of time slots");
    cmd->add_option("--mode", a.mode, "exact | heuristic | both");
    cmd->add_option("--gamma", a.gamma, "protection level for both VMs and VLs");
    cmd->add_option("--gamma1", a.gamma1, "VM protection level (overrides --gamma)");
    cmd->add_option("--gamma2", a.gamma2, "VL protection level (overrides --gamma)");
    cmd->add_option("--delta", a.delta, "relative deviation for both demands");
    cmd->add_option("--delta1", a.delta1, "VM demand deviation (overrides --delta)");
    cmd->add_option("--delta2", a.delta2, "VL rate deviation (overrides --delta)");
    cmd->add_option("--k-paths", a.k_paths, "candidate paths per node pair");
    cmd->add_option("--time-limit", a.time_limit, "exact solver time limit per slot, seconds");
    cmd->add_option("--eta-weight", a.eta_weight, "rejection weight, a number or 'auto'");
    cmd->add_flag("--paper-faithful-objective", a.paper_faithful,
                  "weight the rejected count by 1, exactly as printed");
    cmd->add_option("--out", a.out, "output directory");
}

RobustConfig robust_of(const CommonArgs& a) {
    RobustConfig cfg;
    cfg.gamma1 = a.gamma1 >= 0 ? a.gamma1 : a.gamma;
    cfg.gamma2 = a.gamma2 >= 0 ? a.gamma2 : a.gamma;
    cfg.delta1 = a.delta1 >= 0.0 ? a.delta1 : a.delta;
    cfg.delta2 = a.delta2 >= 0.0 ? a.delta2 : a.delta;
    return cfg;
}

ModelOptions model_of(const CommonArgs& a) {
    ModelOptions m;
    m.paper_faithful_objective = a.paper_faithful;
    if (a.eta_weight != "auto") m.eta_weight = std::stod(a.eta_weight);
    return m;
}

std::vector<AdmitMode> modes_of(const std::string& mode) {
    if (mode == "exact") return {AdmitMode::Exact};
    if (mode == "heuristic") return {AdmitMode::Heuristic};
    if (mode == "both") return {AdmitMode::Exact, AdmitMode::Heuristic};
    throw ValidationError("unknown mode '" + mode + "' (expected exact|heuristic|both)");
}

int cmd_simulate(const CommonArgs& a) {
    Topology topo = resolve_topology(a.topology, a.seed);
    PathTable paths = enumerate_paths(topo, a.k_paths);
    WorkloadParams wp;
    wp.slots = a.slots;
    RobustConfig cfg = robust_of(a);
    wp.delta1 = cfg.delta1;
    wp.delta2 = cfg.delta2;
    ArrivalSchedule schedule = generate_schedule(a.seed, wp);

    fs::create_directories(a.out);
    for (AdmitMode mode : modes_of(a.mode)) {
        SimulationOptions opts;
        opts.mode = mode;
        opts.robust = cfg;
        opts.solver.time_limit_s = a.time_limit;
        opts.model = model_of(a);
        SimulationResult res = run_simulation(topo, paths, schedule, opts);
        std::string stem = mode_name(mode) + "_seed" + std::to_string(a.seed);
        std::ofstream csv(fs::path(a.out) / ("slots_" + stem + ".csv"));
        csv << slot_csv_header() << "\n";
        for (const SlotRecord& r : res.metrics.records) csv << slot_csv_row(r) << "\n";
        std::ofstream end(fs::path(a.out) / ("end_state_" + stem + ".json"));
        end << state_to_json(res.end_state, topo) << "\n";
        std::cout << mode_name(mode) << ": arrived " << res.metrics.total_arrived
                  << ", accepted " << res.metrics.total_accepted << ", acceptance "
                  << res.metrics.final_acceptance_ratio << "%\n";
    }
    return 0;
}

int cmd_experiment(const CommonArgs& a, const std::string& scenario, int n_seeds,
                   const std::string& custom_file) {
    ExperimentConfig cfg;
    cfg.topology = a.topology;
    cfg.workload.slots = a.slots;
    for (int i = 0; i < n_seeds; ++i) cfg.seeds.push_back(a.seed + static_cast<std::uint64_t>(i));
    cfg.modes = modes_of(a.mode);
    cfg.solver.time_limit_s = a.time_limit;
    cfg.model = model_of(a);
    cfg.k_paths = a.k_paths;
    cfg.out_dir = a.out;
    if (scenario == "gamma-sweep") {
        cfg.scenario = Scenario::GammaSweep;
    } else if (scenario == "delta-sweep") {
        cfg.scenario = Scenario::DeltaSweep;
    } else if (scenario == "custom") {
        cfg.scenario = Scenario::Custom;
        std::ifstream in(custom_file);
        if (!in) throw ParseError("cannot open scenario file '" + custom_file + "'");
        nlohmann::json doc = nlohmann::json::parse(in);
        for (const auto& jp : doc.at("points")) {
            ScenarioPoint p;
            p.label = jp.at("label").get<std::string>();
            p.robust.gamma1 = jp.at("gamma1").get<int>();
            p.robust.gamma2 = jp.at("gamma2").get<int>();
            p.robust.delta1 = jp.at("delta1").get<double>();
            p.robust.delta2 = jp.at("delta2").get<double>();
            cfg.custom_points.push_back(std::move(p));
        }
    } else {
        throw ValidationError("unknown scenario '" + scenario + "'");
    }
    auto outcomes = run_experiment(cfg);
    std::cout << "wrote " << outcomes.size() << " runs to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_export_lp(const CommonArgs& a, int slot, const std::string& out_file) {
    Topology topo = resolve_topology(a.topology, a.seed);
    PathTable paths = enumerate_paths(topo, a.k_paths);
    WorkloadParams wp;
    wp.slots = std::max(a.slots, slot);
    RobustConfig cfg = robust_of(a);
    wp.delta1 = cfg.delta1;
    wp.delta2 = cfg.delta2;
    ArrivalSchedule schedule = generate_schedule(a.seed, wp);

    // Advance the state to the requested slot with the chosen engine.
    SimState state = SimState::fresh(topo);
    SimulationOptions opts;
    opts.mode = a.mode == "exact" ? AdmitMode::Exact : AdmitMode::Heuristic;
    opts.robust = cfg;
    opts.solver.time_limit_s = a.time_limit;
    opts.model = model_of(a);
    for (int s = 1; s < slot; ++s) {
        if (s > 1) release_expired(state, topo);
        const auto& arrivals = schedule.slots[static_cast<std::size_t>(s - 1)];
        Assignment assignment = admit(state, arrivals, opts.mode, topo, paths, cfg, opts.solver,
                                      opts.model);
        commit(state, assignment, arrivals, s, topo, paths, cfg);
    }
    if (slot > 1) release_expired(state, topo);
    RobinsModel model = build_model(state, schedule.slots[static_cast<std::size_t>(slot - 1)],
                                    topo, paths, cfg, opts.model);
    std::string text = export_lp(model);
    if (out_file.empty() || out_file == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_file);
        out << text;
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& topology_file, const std::string& schedule_file) {
    if (topology_file.empty() && schedule_file.empty())
        throw ValidationError("validate: pass --topology-file and/or --schedule-file");
    if (!topology_file.empty()) {
        Topology topo = load_topology_file(topology_file);
        std::cout << "topology ok: " << topo.nodes.size() << " nodes, " << topo.links.size()
                  << " links\n";
    }
    if (!schedule_file.empty()) {
        std::ifstream in(schedule_file);
        if (!in) throw ParseError("cannot open schedule file '" + schedule_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        ArrivalSchedule sched = schedule_from_json(ss.str());
        sched.params.validate();
        std::cout << "schedule ok: " << sched.slots.size() << " slots, "
                  << sched.total_arrivals() << " arrivals\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"online network slicing under demand uncertainty"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "run one seeded simulation");
    add_common(sim, sim_args);

    CommonArgs exp_args;
    std::string scenario = "gamma-sweep";
    int n_seeds = 20;
    std::string custom_file;
    CLI::App* exp = app.add_subcommand("experiment", "run scenario sweeps across seeds");
    add_common(exp, exp_args);
    exp->add_option("--scenario", scenario, "gamma-sweep | delta-sweep | custom");
    exp->add_option("--seeds", n_seeds, "number of consecutive seeds starting at --seed");
    exp->add_option("--scenario-file", custom_file, "JSON points file for --scenario custom");

    CommonArgs lp_args;
    int lp_slot = 1;
    std::string lp_out;
    CLI::App* lp = app.add_subcommand("export-lp", "dump one slot's model as LP text");
    add_common(lp, lp_args);
    lp->add_option("--slot", lp_slot, "slot whose model to export");
    lp->add_option("--lp-out", lp_out, "output file ('-' for stdout)");

    std::string v_topo, v_sched;
    CLI::App* val = app.add_subcommand("validate", "check a topology/schedule document");
    val->add_option("--topology-file", v_topo, "topology document to validate");
    val->add_option("--schedule-file", v_sched, "schedule document to validate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (exp->parsed()) return cmd_experiment(exp_args, scenario, n_seeds, custom_file);
        if (lp->parsed()) return cmd_export_lp(lp_args, lp_slot, lp_out);
        if (val->parsed()) return cmd_validate(v_topo, v_sched);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
