#include <cmath>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicvm/config.hpp"
#include "cubicvm/plots.hpp"
#include "cubicvm/variational.hpp"

using namespace cubicvm;
using nlohmann::ordered_json;

namespace {

ordered_json cjson(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

void emit(const RunConfig& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw DomainError("cannot write " + c.out);
    f << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_curve_info(const RunConfig& c) {
    CurveParam p = make_param(c.tau);
    BranchPointSet bp = branch_points(p);
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tau"] = p.tau;
    j["alpha"] = p.alpha;
    j["c"] = p.c;
    j["a1"] = bp.a1;
    j["b1"] = bp.b1;
    j["a2"] = cjson(bp.a2);
    j["b2"] = cjson(bp.b2);
    j["b_star"] = bp.b_star;
    j["degenerate_merge"] = bp.degenerate_merge;
    j["regime"] = regime_name(classify_regime_local(p));
    std::cout << dump(j);
    return 0;
}

std::vector<double> tau_grid(int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = 0.25 * (i + 1) / (n + 1);
    return t;
}

int cmd_widths(const RunConfig& c) {
    auto rows = width_sweep(tau_grid(c.n), c.m, c.threads, true);
    if (c.format == "json") {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["m"] = c.m;
        j["rows"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json row{{"tau", r.tau}, {"omega1", r.omega[0]}, {"omega2", r.omega[1]},
                             {"omega3", r.omega[2]}};
            row["omega4"] = r.has_omega4 ? ordered_json(r.omega[3]) : ordered_json(nullptr);
            j["rows"].push_back(row);
        }
        emit(c, dump(j));
    } else {
        emit(c, csv_widths(rows));
    }
    return 0;
}

int cmd_critical_taus(const RunConfig& c) {
    ScanOptions opt;
    opt.m = c.m;
    opt.threads = c.threads;
    CriticalTaus t = critical_taus(1e-9, opt);
    const double paper[3] = {0.12487351, 0.1913565, 0.2289555};
    const double got[3] = {t.tau1, t.tau_c, t.tau2};
    const char* names[3] = {"tau1", "tau_c", "tau2"};
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["m"] = c.m;
    for (int k = 0; k < 3; ++k)
        j[names[k]] = {{"value", got[k]}, {"printed", paper[k]}, {"difference", got[k] - paper[k]}};
    emit(c, dump(j));
    return 0;
}

CutSystem cuts_for(const RunConfig& c) {
    CurveParam p = make_param(c.tau);
    return build_cuts(p, trace_config(c));
}

ordered_json traj_json(const CriticalGraph* g, const Trajectory& t) {
    ordered_json e;
    if (g && t.seed.vertex >= 0) {
        e["from"] = point_name(g->vertices[t.seed.vertex].kind);
        e["sheet"] = t.seed.sheet;
        e["index"] = t.seed.index;
    }
    e["termination"] = termination_name(t.termination);
    switch (t.termination) {
    case Termination::HitCriticalPoint:
        e["to"] = point_name(t.end_point);
        e["to_sheet"] = t.points.empty() ? 0 : t.points.back().sheet;
        e["gap"] = t.end_gap;
        break;
    case Termination::HitRadiusBound:
        e["theta"] = t.end_theta;
        e["to_sheet"] = t.end_sheet;
        break;
    case Termination::HitRealAxis:
        e["x"] = t.real_axis_x;
        break;
    default:
        break;
    }
    e["real_axis_hits"] = t.real_axis_hits;
    e["drift"] = t.conservation_drift;
    return e;
}

int cmd_graph(const RunConfig& c) {
    CutSystem cuts = cuts_for(c);
    CriticalGraph g = critical_graph(cuts, trace_config(c), c.threads);
    if (c.format == "svg" && c.out.empty()) {
        std::cout << svg_graph(g, cuts);
    } else {
        if (!c.out.empty()) write_file(c.out, svg_graph(g, cuts));
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["tau"] = c.tau;
        j["regime"] = regime_name(cuts.regime);
        j["a_star"] = cuts.a_star;
        j["degree_law"] = g.degree_law;
        j["conjugation_symmetric"] = g.conjugation_symmetric;
        j["vertices"] = ordered_json::array();
        for (const auto& v : g.vertices) j["vertices"].push_back({{"label", v.label()}, {"order", v.order}});
        j["edges"] = ordered_json::array();
        for (const auto& e : g.edges) j["edges"].push_back(traj_json(&g, e.traj));
        j["warnings"] = g.warnings;
        std::cout << dump(j);
    }
    return g.degree_law && g.conjugation_symmetric ? 0 : 1;
}

int cmd_supports(const RunConfig& c) {
    CutSystem cuts = cuts_for(c);
    FamilyMeasure fm = family_measure(cuts, c.nodes);
    Masses m = masses(fm);
    std::string prefix = c.out.empty() ? "supports" : c.out;
    for (int k = 0; k < 3; ++k)
        write_file(prefix + "_mu" + std::to_string(k + 1) + ".csv", csv_density(fm.mu[k]));
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tau"] = c.tau;
    j["regime"] = regime_name(cuts.regime);
    j["masses"] = {m.m1, m.m2, m.m3};
    j["alpha_recovered"] = m.alpha_recovered;
    j["delta1"] = {cuts.delta1.lo, cuts.delta1.hi};
    j["delta3"] = cuts.delta3.empty() ? ordered_json(nullptr) : ordered_json({cuts.delta3.lo, cuts.delta3.hi});
    j["delta2"] = {{"a_star", cuts.a_star}, {"b2", cjson(cuts.bp.b2)}};
    j["endpoint_exponents"] = ordered_json::array();
    for (int k = 0; k < 3; ++k) j["endpoint_exponents"].push_back(fm.mu[k].endpoint_exponents);
    j["files"] = ordered_json::array();
    for (int k = 0; k < 3; ++k) j["files"].push_back(prefix + "_mu" + std::to_string(k + 1) + ".csv");
    std::cout << dump(j);
    return 0;
}

int cmd_trace(const RunConfig& c) {
    CutSystem cuts = cuts_for(c);
    TraceConfig tc = trace_config(c);
    std::vector<std::string> specs = c.seeds.empty() ? std::vector<std::string>{"a2:2:1"} : c.seeds;
    std::vector<Vertex> verts = critical_vertices(cuts, tc);
    std::string csv;
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tau"] = c.tau;
    j["trajectories"] = ordered_json::array();
    for (const auto& s : specs) {
        SeedSpec sp = parse_seed(s);
        int vi = -1;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (verts[i].kind == sp.point && verts[i].has_sheet(sp.sheet)) vi = int(i);
        if (vi < 0) throw DomainError("trace: no critical point " + s);
        auto seeds = seed_directions(cuts, verts[vi].z, sp.sheet, tc);
        const Seed* seed = nullptr;
        for (const auto& sd : seeds)
            if (sd.index == sp.index) seed = &sd;
        if (!seed) throw DomainError("trace: no seed " + s);
        Seed sd = *seed;
        sd.vertex = vi;
        Trajectory t = trace_seed(cuts, sd, verts, tc);
        csv += "# seed " + s + "\n" + csv_trajectory(t);
        ordered_json e = traj_json(nullptr, t);
        e["seed"] = s;
        j["trajectories"].push_back(e);
    }
    if (c.format == "csv") emit(c, csv);
    else emit(c, dump(j));
    return 0;
}

int cmd_verify(const RunConfig& c) {
    CutSystem cuts = cuts_for(c);
    FamilyMeasure fm = family_measure(cuts, c.nodes);
    ExternalField field = ExternalField::cubic();
    Masses m = masses(fm);
    double alpha = cuts.param.alpha;
    double mass_err = std::max(std::abs(m.m1 + m.m2 - 1.0), std::abs(m.m1 + m.m3 - alpha));

    // off-support test points, fixed seed
    std::mt19937 rng(20240601);
    std::uniform_real_distribution<double> ur(-2.5, 2.5);
    double dhz = 0.0, cauchy = 0.0;
    int used = 0;
    while (used < 20) {
        cplx z(ur(rng), ur(rng));
        bool near = false;
        for (const auto& mu : fm.mu)
            if (!mu.empty() && support_distance(mu, z) < 0.1) near = true;
        if (near || std::abs(z - cuts.bp.b_star) < 0.1) continue;
        dhz = std::max(dhz, std::abs(variation_Dhz(fm.mu, field, z)));
        XiTriple lab = xi_labels(cuts, z);
        auto xi = xi_from_measures(fm.mu, field, z);
        for (int k = 0; k < 3; ++k) cauchy = std::max(cauchy, std::abs(xi[k] - lab[k]));
        ++used;
    }

    EquilibriumReport eq = verify_equilibrium(fm);
    SPropertyReport sp = s_property_check(fm.mu, field, s_property_points(fm));

    bool ok = mass_err < 1e-5 && cauchy < 1e-5 && dhz < 5e-4 && eq.ok(c.tol) && sp.max_defect < 1e-3;
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tau"] = c.tau;
    j["regime"] = regime_name(cuts.regime);
    j["masses"] = {m.m1, m.m2, m.m3};
    j["mass_constraint_error"] = mass_err;
    j["cauchy_identity_residual"] = cauchy;
    j["variation_Dhz_max"] = dhz;
    j["l1"] = eq.l1;
    j["l2"] = eq.l2;
    j["l3_defect"] = eq.l3_defect;
    j["max_equality_deviation"] = {{"delta1", eq.dev1}, {"delta2", eq.dev2}, {"delta3", eq.dev3}};
    ordered_json mg{{"gamma1", eq.margin1}, {"gamma2", eq.margin2}, {"gamma3", eq.margin3}};
    if (!eq.supercritical) mg["a_star"] = eq.margin_astar;
    j["min_inequality_margin"] = mg;
    j["s_property_defects"] = ordered_json::array();
    for (const auto& p : sp.points) j["s_property_defects"].push_back({{"component", p.component}, {"defect", p.defect}});
    j["failures"] = eq.failures;
    j["ok"] = ok;
    emit(c, dump(j));
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubic vector equilibrium toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    double tau = 0.0, step = 0.0, tol = 0.0;
    int grid_n = 0, nodes_m = 0, nodes = 0;
    std::string out, format;
    std::vector<std::string> seeds;
    app.add_option("--config", config_path, "flat key = value file");
    auto* o_tau = app.add_option("--tau", tau, "curve parameter tau");
    auto* o_n = app.add_option("--grid-n", grid_n, "tau grid size");
    auto* o_m = app.add_option("--nodes-m", nodes_m, "quadrature nodes per segment");
    auto* o_nodes = app.add_option("--nodes", nodes, "density nodes per support arc");
    auto* o_step = app.add_option("--step", step, "tracer step (relative)");
    auto* o_out = app.add_option("--out", out, "output path or prefix");
    auto* o_fmt = app.add_option("--format", format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    auto* o_tol = app.add_option("--tol", tol, "equality tolerance");
    auto* o_seed = app.add_option("--seed", seeds, "point:sheet:index, repeatable");

    std::map<std::string, std::function<int(const RunConfig&)>> cmds = {
        {"curve-info", cmd_curve_info}, {"widths", cmd_widths}, {"critical-taus", cmd_critical_taus},
        {"graph", cmd_graph},           {"supports", cmd_supports}, {"trace", cmd_trace},
        {"verify", cmd_verify}};
    const std::map<std::string, std::string> help = {
        {"curve-info", "c, branch points, b_star and regime as JSON"},
        {"widths", "omega1..omega4 over a tau grid"},
        {"critical-taus", "tau1, tau_c, tau2 as JSON"},
        {"graph", "critical graph; SVG to --out, JSON summary to stdout"},
        {"supports", "density CSV per component and a JSON summary"},
        {"trace", "trajectories from --seed points"},
        {"verify", "equilibrium, S-property and identity checks"}};
    for (const auto& [name, fn] : cmds) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig c;
        c.format = "";
        if (!config_path.empty()) c = load_config(config_path, c);
        if (*o_tau) c.tau = tau;
        if (*o_n) set_config_value(c, "n", std::to_string(grid_n));
        if (*o_m) set_config_value(c, "m", std::to_string(nodes_m));
        if (*o_nodes) set_config_value(c, "nodes", std::to_string(nodes));
        if (*o_step) set_config_value(c, "step", fmt_num(step));
        if (*o_out) c.out = out;
        if (*o_fmt) c.format = format;
        if (*o_tol) set_config_value(c, "tol", fmt_num(tol));
        if (*o_seed) c.seeds = seeds;
        for (const auto& s : c.seeds) parse_seed(s);
        std::string name = app.get_subcommands().front()->get_name();
        if (c.format.empty()) c.format = name == "widths" ? "csv" : "json";
        return cmds.at(name)(c);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
