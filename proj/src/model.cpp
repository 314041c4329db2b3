#include "onsu/model.hpp"

#include <algorithm>

#include "onsu/errors.hpp"

namespace onsu {

double ModelOptions::resolve_eta_weight(const Topology& topo) const {
    if (paper_faithful_objective) return 1.0;
    if (eta_weight >= 0.0) return eta_weight;
    return static_cast<double>(topo.nodes.size() + topo.links.size()) + 4.0;
}

int VarCatalog::add(std::string name, VarKind kind, double lb, double ub, VarClass cls) {
    defs.push_back(VarDef{std::move(name), kind, lb, ub, 0.0});
    clazz.push_back(cls);
    return static_cast<int>(defs.size()) - 1;
}

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '-' || c == '.' || c == ' ') c = '_';
    return s;
}

std::string slice_tag(const SliceKey& k) {
    return "t" + std::to_string(k.tenant) + "_d" + std::to_string(k.slice);
}

constexpr double kInf = 1e30;

} // namespace

RobinsModel build_model(const SimState& state, const std::vector<SliceRequest>& arrivals,
                        const Topology& topo, const PathTable& paths, const RobustConfig& cfg,
                        const ModelOptions& options) {
    cfg.validate();
    const int n_nodes = static_cast<int>(topo.nodes.size());
    const int n_links = static_cast<int>(topo.links.size());
    if (static_cast<int>(state.available.size()) != n_nodes ||
        static_cast<int>(state.avail_bw.size()) != n_links)
        throw ValidationError("state is not consistent with the topology");
    for (int n = 0; n < n_nodes; ++n)
        if (!state.available[static_cast<std::size_t>(n)].nonnegative(1e-6) ||
            !state.available[static_cast<std::size_t>(n)].all_leq(
                topo.nodes[static_cast<std::size_t>(n)].capacity, 1e-6))
            throw ValidationError("state availability out of range on node " +
                                  topo.nodes[static_cast<std::size_t>(n)].id);

    RobinsModel model;
    model.arrival_count = static_cast<int>(arrivals.size());
    model.eta_weight = options.resolve_eta_weight(topo);
    VarCatalog& cat = model.vars;

    const double n_slices = static_cast<double>(arrivals.size());
    cat.eta = cat.add("eta", VarKind::Continuous, 0.0, n_slices, VarClass::Aux);
    cat.defs[static_cast<std::size_t>(cat.eta)].obj = model.eta_weight;

    auto node_name = [&](int n) { return sanitize(topo.nodes[static_cast<std::size_t>(n)].id); };
    auto link_name = [&](int l) { return sanitize(topo.links[static_cast<std::size_t>(l)].id); };

    auto row = [&](std::string tag, Sense sense, double rhs) -> ModelRow& {
        model.rows.push_back(ModelRow{std::move(tag), sense, rhs, {}});
        return model.rows.back();
    };

    // With no arrivals the model degenerates to "eta = 0".
    if (arrivals.empty()) {
        row("C1", Sense::EQ, 0.0).terms.push_back({cat.eta, 1.0});
        return model;
    }

    // ---- decision variables -------------------------------------------------
    for (const SliceRequest& req : arrivals) {
        SliceVars sv;
        sv.key = SliceKey::of(req);
        sv.delta =
            cat.add("delta_" + slice_tag(sv.key), VarKind::Binary, 0.0, 1.0, VarClass::Delta);
        for (const VmSpec& vm : req.vms) {
            VmVars vv;
            vv.key = VmKey{sv.key, vm.id};
            vv.nominal = vm.nominal;
            vv.deviation = cfg.delta1 * vm.nominal;
            for (int n = 0; n < n_nodes; ++n)
                vv.pi.push_back(cat.add("pi_" + slice_tag(sv.key) + "_m" +
                                            std::to_string(vm.id) + "_n" + node_name(n),
                                        VarKind::Binary, 0.0, 1.0, VarClass::Pi));
            sv.vms.push_back(std::move(vv));
        }
        for (const VlSpec& vl : req.vls) {
            VlVars ev;
            ev.key = VlKey{sv.key, vl.id};
            ev.local_m = vl.m;
            ev.local_m2 = vl.m2;
            ev.nominal_rate = vl.nominal_rate;
            ev.rate_dev = cfg.delta2 * vl.nominal_rate;
            ev.max_delay_ms = vl.max_delay_ms;
            for (int from = 0; from < n_nodes; ++from)
                for (int to = 0; to < n_nodes; ++to) {
                    const auto& plist = paths.paths(from, to);
                    for (int b = 0; b < static_cast<int>(plist.size()); ++b) {
                        XiEntry xe;
                        xe.from = from;
                        xe.to = to;
                        xe.path_index = b;
                        xe.delay_ms = plist[static_cast<std::size_t>(b)].delay_ms;
                        xe.links = plist[static_cast<std::size_t>(b)].links;
                        xe.var = cat.add("xi_" + slice_tag(sv.key) + "_e" +
                                             std::to_string(vl.id) + "_p" + node_name(from) +
                                             "_" + node_name(to) + "_b" +
                                             std::to_string(b + 1),
                                         VarKind::Binary, 0.0, 1.0, VarClass::Xi);
                        ev.xi.push_back(std::move(xe));
                    }
                }
            sv.vls.push_back(std::move(ev));
        }
        cat.slices.push_back(std::move(sv));
    }

    cat.beta.assign(static_cast<std::size_t>(n_nodes), -1);
    for (int n = 0; n < n_nodes; ++n)
        if (!state.used_node[static_cast<std::size_t>(n)])
            cat.beta[static_cast<std::size_t>(n)] = cat.add(
                "beta_n" + node_name(n), VarKind::Binary, 0.0, 1.0, VarClass::Beta);
    for (int l = 0; l < n_links; ++l)
        cat.theta.push_back(
            cat.add("theta_l" + link_name(l), VarKind::Binary, 0.0, 1.0, VarClass::Theta));

    // ---- auxiliaries ---------------------------------------------------------
    for (int n = 0; n < n_nodes; ++n) {
        std::array<int, 3> u{};
        for (Res r : kAllRes)
            u[static_cast<std::size_t>(r)] =
                cat.add("U_n" + node_name(n) + "_" + std::string(res_name(r)),
                        VarKind::Continuous, 0.0, kInf, VarClass::Aux);
        cat.u_node.push_back(u);
    }
    for (int l = 0; l < n_links; ++l)
        cat.u_link.push_back(
            cat.add("Up_l" + link_name(l), VarKind::Continuous, 0.0, kInf, VarClass::Aux));
    cat.n_c = cat.add("N_c", VarKind::Continuous, 0.0, kInf, VarClass::Aux);
    cat.s_c = cat.add("S_c", VarKind::Continuous, 0.0, kInf, VarClass::Aux);

    // Robustness duals, instantiated per resource dimension. They are
    // integral in any optimal corner, so relaxing them to continuous keeps
    // the worst-case protection value.
    if (cfg.gamma1 > 0) {
        for (SliceVars& sv : cat.slices)
            for (VmVars& vv : sv.vms) {
                vv.rho1.resize(static_cast<std::size_t>(n_nodes));
                for (int n = 0; n < n_nodes; ++n)
                    for (Res r : kAllRes)
                        vv.rho1[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] =
                            cat.add("rho1_" + slice_tag(sv.key) + "_m" +
                                        std::to_string(vv.key.vm) + "_n" + node_name(n) + "_" +
                                        std::string(res_name(r)),
                                    VarKind::Continuous, 0.0, kInf, VarClass::Aux);
            }
        for (int n = 0; n < n_nodes; ++n) {
            std::array<int, 3> z{};
            for (Res r : kAllRes)
                z[static_cast<std::size_t>(r)] =
                    cat.add("z1_n" + node_name(n) + "_" + std::string(res_name(r)),
                            VarKind::Continuous, 0.0, kInf, VarClass::Aux);
            cat.z1.push_back(z);
        }
    } else {
        for (SliceVars& sv : cat.slices)
            for (VmVars& vv : sv.vms)
                vv.rho1.assign(static_cast<std::size_t>(n_nodes), {-1, -1, -1});
        cat.z1.assign(static_cast<std::size_t>(n_nodes), {-1, -1, -1});
    }
    if (cfg.gamma2 > 0) {
        for (SliceVars& sv : cat.slices)
            for (VlVars& ev : sv.vls)
                for (XiEntry& xe : ev.xi)
                    xe.rho2_var =
                        cat.add("rho2_" + slice_tag(sv.key) + "_e" +
                                    std::to_string(ev.key.vl) + "_p" + node_name(xe.from) + "_" +
                                    node_name(xe.to) + "_b" + std::to_string(xe.path_index + 1),
                                VarKind::Continuous, 0.0, kInf, VarClass::Aux);
        for (int l = 0; l < n_links; ++l)
            cat.z2.push_back(
                cat.add("z2_l" + link_name(l), VarKind::Continuous, 0.0, kInf, VarClass::Aux));
    } else {
        cat.z2.assign(static_cast<std::size_t>(n_links), -1);
    }

    // ---- constraint rows ------------------------------------------------------

    // C1: rejected-slice count.
    {
        ModelRow& r = row("C1", Sense::EQ, n_slices);
        for (const SliceVars& sv : cat.slices) r.terms.push_back({sv.delta, 1.0});
        r.terms.push_back({cat.eta, 1.0});
    }

    // C2: each VM of an accepted slice sits on exactly one node.
    for (const SliceVars& sv : cat.slices)
        for (const VmVars& vv : sv.vms) {
            ModelRow& r = row("C2_" + slice_tag(sv.key) + "_m" + std::to_string(vv.key.vm),
                              Sense::EQ, 0.0);
            for (int n = 0; n < n_nodes; ++n)
                r.terms.push_back({vv.pi[static_cast<std::size_t>(n)], 1.0});
            r.terms.push_back({sv.delta, -1.0});
        }

    // C3: each VL of an accepted slice rides exactly one path.
    for (const SliceVars& sv : cat.slices)
        for (const VlVars& ev : sv.vls) {
            ModelRow& r =
                row("C3_" + slice_tag(sv.key) + "_e" + std::to_string(ev.key.vl), Sense::EQ, 0.0);
            for (const XiEntry& xe : ev.xi) r.terms.push_back({xe.var, 1.0});
            r.terms.push_back({sv.delta, -1.0});
        }

    // C4 linking, amended: the chosen path must start and end at the hosts
    // of the VL's endpoint VMs. Emitted in aggregated form (sum of xi per
    // endpoint node vs. pi), which has the same binary solutions as the
    // per-path inequalities and a tighter relaxation.
    for (const SliceVars& sv : cat.slices)
        for (const VlVars& ev : sv.vls) {
            const VmVars* vm_a = nullptr;
            const VmVars* vm_b = nullptr;
            for (const VmVars& vv : sv.vms) {
                if (vv.key.vm == ev.local_m) vm_a = &vv;
                if (vv.key.vm == ev.local_m2) vm_b = &vv;
            }
            if (!vm_a || !vm_b)
                throw ValidationError("slice " + slice_tag(sv.key) + " VL e" +
                                      std::to_string(ev.key.vl) + " references unknown VMs");
            const std::string base = slice_tag(sv.key) + "_e" + std::to_string(ev.key.vl);
            // C4-1: paths leaving n require m on n.
            for (int n = 0; n < n_nodes; ++n) {
                ModelRow& r = row("C4_1_" + base + "_n" + node_name(n), Sense::LE, 0.0);
                for (const XiEntry& xe : ev.xi)
                    if (xe.from == n) r.terms.push_back({xe.var, 1.0});
                r.terms.push_back({vm_a->pi[static_cast<std::size_t>(n)], -1.0});
            }
            // C4-3: paths arriving at n' require m' on n'.
            for (int n = 0; n < n_nodes; ++n) {
                ModelRow& r = row("C4_3_" + base + "_n" + node_name(n), Sense::LE, 0.0);
                for (const XiEntry& xe : ev.xi)
                    if (xe.to == n) r.terms.push_back({xe.var, 1.0});
                r.terms.push_back({vm_b->pi[static_cast<std::size_t>(n)], -1.0});
            }
            // C4-2: hosting both endpoints on (n, n') demands a path there;
            // pairs without any path thus exclude that co-placement.
            for (int from = 0; from < n_nodes; ++from)
                for (int to = 0; to < n_nodes; ++to) {
                    ModelRow& r = row("C4_2_" + base + "_p" + node_name(from) + "_" +
                                          node_name(to),
                                      Sense::GE, -1.0);
                    for (const XiEntry& xe : ev.xi)
                        if (xe.from == from && xe.to == to) r.terms.push_back({xe.var, 1.0});
                    r.terms.push_back({vm_a->pi[static_cast<std::size_t>(from)], -1.0});
                    r.terms.push_back({vm_b->pi[static_cast<std::size_t>(to)], -1.0});
                }
        }

    // C5: robust node usage. With gamma1 = 0 this is the base model's
    // nominal usage row; otherwise the Gamma-robust counterpart with its
    // rho/z duals and the C5-2 deviation covers.
    for (int n = 0; n < n_nodes; ++n)
        for (Res r_dim : kAllRes) {
            const char* fam = cfg.gamma1 > 0 ? "C5_1_n" : "C5_n";
            ModelRow& r = row(fam + node_name(n) + "_" + std::string(res_name(r_dim)),
                              Sense::EQ, 0.0);
            for (const SliceVars& sv : cat.slices)
                for (const VmVars& vv : sv.vms) {
                    if (vv.nominal[r_dim] != 0.0)
                        r.terms.push_back(
                            {vv.pi[static_cast<std::size_t>(n)], vv.nominal[r_dim]});
                    if (cfg.gamma1 > 0)
                        r.terms.push_back(
                            {vv.rho1[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)],
                             1.0});
                }
            if (cfg.gamma1 > 0)
                r.terms.push_back(
                    {cat.z1[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)],
                     static_cast<double>(cfg.gamma1)});
            r.terms.push_back(
                {cat.u_node[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)], -1.0});
        }
    if (cfg.gamma1 > 0)
        for (const SliceVars& sv : cat.slices)
            for (const VmVars& vv : sv.vms)
                for (int n = 0; n < n_nodes; ++n)
                    for (Res r_dim : kAllRes) {
                        ModelRow& r = row("C5_2_" + slice_tag(sv.key) + "_m" +
                                              std::to_string(vv.key.vm) + "_n" + node_name(n) +
                                              "_" + std::string(res_name(r_dim)),
                                          Sense::LE, 0.0);
                        r.terms.push_back(
                            {vv.pi[static_cast<std::size_t>(n)], vv.deviation[r_dim]});
                        r.terms.push_back(
                            {vv.rho1[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)],
                             -1.0});
                        r.terms.push_back(
                            {cat.z1[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)],
                             -1.0});
                    }

    // C6: usage within the remaining (not total) capacity.
    for (int n = 0; n < n_nodes; ++n)
        for (Res r_dim : kAllRes) {
            ModelRow& r = row("C6_n" + node_name(n) + "_" + std::string(res_name(r_dim)),
                              Sense::LE,
                              state.available[static_cast<std::size_t>(n)][r_dim]);
            r.terms.push_back(
                {cat.u_node[static_cast<std::size_t>(n)][static_cast<std::size_t>(r_dim)], 1.0});
        }

    // C7: robust link usage, mirroring C5 on the path indicators.
    for (int l = 0; l < n_links; ++l) {
        const char* fam = cfg.gamma2 > 0 ? "C7_1_l" : "C7_l";
        ModelRow& r = row(fam + link_name(l), Sense::EQ, 0.0);
        for (const SliceVars& sv : cat.slices)
            for (const VlVars& ev : sv.vls)
                for (const XiEntry& xe : ev.xi) {
                    if (std::find(xe.links.begin(), xe.links.end(), l) == xe.links.end())
                        continue;
                    r.terms.push_back({xe.var, ev.nominal_rate});
                    if (cfg.gamma2 > 0) r.terms.push_back({xe.rho2_var, 1.0});
                }
        if (cfg.gamma2 > 0)
            r.terms.push_back(
                {cat.z2[static_cast<std::size_t>(l)], static_cast<double>(cfg.gamma2)});
        r.terms.push_back({cat.u_link[static_cast<std::size_t>(l)], -1.0});
    }
    if (cfg.gamma2 > 0)
        for (const SliceVars& sv : cat.slices)
            for (const VlVars& ev : sv.vls)
                for (const XiEntry& xe : ev.xi)
                    for (int l : xe.links) {
                        ModelRow& r =
                            row("C7_2_" + slice_tag(sv.key) + "_e" + std::to_string(ev.key.vl) +
                                    "_p" + node_name(xe.from) + "_" + node_name(xe.to) + "_b" +
                                    std::to_string(xe.path_index + 1) + "_l" + link_name(l),
                                Sense::LE, 0.0);
                        r.terms.push_back({xe.var, ev.rate_dev});
                        r.terms.push_back({xe.rho2_var, -1.0});
                        r.terms.push_back({cat.z2[static_cast<std::size_t>(l)], -1.0});
                    }

    // C8: bandwidth within the remaining capacity, gated by link activation.
    for (int l = 0; l < n_links; ++l) {
        ModelRow& r = row("C8_l" + link_name(l), Sense::LE, 0.0);
        r.terms.push_back({cat.u_link[static_cast<std::size_t>(l)], 1.0});
        r.terms.push_back(
            {cat.theta[static_cast<std::size_t>(l)], -state.avail_bw[static_cast<std::size_t>(l)]});
    }

    // C9: per-path propagation delay cap.
    for (const SliceVars& sv : cat.slices)
        for (const VlVars& ev : sv.vls)
            for (const XiEntry& xe : ev.xi) {
                ModelRow& r = row("C9_" + slice_tag(sv.key) + "_e" + std::to_string(ev.key.vl) +
                                      "_p" + node_name(xe.from) + "_" + node_name(xe.to) + "_b" +
                                      std::to_string(xe.path_index + 1),
                                  Sense::LE, ev.max_delay_ms);
                r.terms.push_back({xe.var, xe.delay_ms});
            }

    // C10: node power added by this slot: utilization share plus idle power
    // for nodes turned on now.
    {
        ModelRow& r = row("C10", Sense::EQ, 0.0);
        for (int n = 0; n < n_nodes; ++n) {
            const NodeSpec& spec = topo.nodes[static_cast<std::size_t>(n)];
            if (spec.capacity.cpu > 0.0)
                r.terms.push_back({cat.u_node[static_cast<std::size_t>(n)][0],
                                   (spec.p_max - spec.p_idle) / spec.capacity.cpu});
            if (cat.beta[static_cast<std::size_t>(n)] >= 0 && spec.p_idle != 0.0)
                r.terms.push_back({cat.beta[static_cast<std::size_t>(n)], spec.p_idle});
        }
        r.terms.push_back({cat.n_c, -1.0});
    }

    // C11/C12: placement only on turned-on nodes. For previously used nodes
    // alpha is 1 and the row is a tautology kept for provenance; for unused
    // nodes beta gates the placement.
    for (const SliceVars& sv : cat.slices)
        for (const VmVars& vv : sv.vms)
            for (int n = 0; n < n_nodes; ++n) {
                if (state.used_node[static_cast<std::size_t>(n)]) {
                    ModelRow& r = row("C11_" + slice_tag(sv.key) + "_m" +
                                          std::to_string(vv.key.vm) + "_n" + node_name(n),
                                      Sense::LE, 1.0);
                    r.terms.push_back({vv.pi[static_cast<std::size_t>(n)], 1.0});
                } else {
                    ModelRow& r = row("C12_" + slice_tag(sv.key) + "_m" +
                                          std::to_string(vv.key.vm) + "_n" + node_name(n),
                                      Sense::LE, 0.0);
                    r.terms.push_back({vv.pi[static_cast<std::size_t>(n)], 1.0});
                    r.terms.push_back({cat.beta[static_cast<std::size_t>(n)], -1.0});
                }
            }

    // C13: switch power added by this slot; links already active (gamma = 1)
    // contribute no new power.
    {
        ModelRow& r = row("C13", Sense::EQ, 0.0);
        for (int l = 0; l < n_links; ++l)
            if (!state.used_link[static_cast<std::size_t>(l)]) {
                double zeta = topo.links[static_cast<std::size_t>(l)].power_weight;
                if (zeta != 0.0)
                    r.terms.push_back({cat.theta[static_cast<std::size_t>(l)], zeta});
            }
        r.terms.push_back({cat.s_c, -1.0});
    }

    // ---- objective ------------------------------------------------------------
    auto& defs = cat.defs;
    if (topo.n_total_power > 0.0)
        defs[static_cast<std::size_t>(cat.n_c)].obj = 1.0 / topo.n_total_power;
    if (topo.s_total_power > 0.0)
        defs[static_cast<std::size_t>(cat.s_c)].obj = 1.0 / topo.s_total_power;
    for (int n = 0; n < n_nodes; ++n) {
        const NodeSpec& spec = topo.nodes[static_cast<std::size_t>(n)];
        if (spec.capacity.ram > 0.0)
            defs[static_cast<std::size_t>(cat.u_node[static_cast<std::size_t>(n)][1])].obj =
                1.0 / spec.capacity.ram;
        if (spec.capacity.storage > 0.0)
            defs[static_cast<std::size_t>(cat.u_node[static_cast<std::size_t>(n)][2])].obj =
                1.0 / spec.capacity.storage;
    }
    if (topo.b_total > 0.0)
        for (int l = 0; l < n_links; ++l)
            defs[static_cast<std::size_t>(cat.u_link[static_cast<std::size_t>(l)])].obj =
                1.0 / topo.b_total;

    return model;
}

} // namespace onsu
