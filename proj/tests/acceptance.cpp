// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "cubicvm/variational.hpp"
#include "cubicvm/widths.hpp"
#include "golden_match.hpp"

using namespace cubicvm;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %s  %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string f(const char* fmt, double a) {
    char b[128];
    std::snprintf(b, sizeof b, fmt, a);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// off-support sample points, fixed seed
std::vector<cplx> test_points(const FamilyMeasure& fm, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    std::vector<cplx> out;
    while (int(out.size()) < n) {
        cplx z(u(rng), u(rng));
        bool near = std::abs(z - fm.cuts.bp.b_star) < 0.05;
        for (const auto& m : fm.mu)
            if (!m.empty() && support_distance(m, z) < 0.05) near = true;
        if (!near) out.push_back(z);
    }
    return out;
}

void critical_parameters() {
    auto t0 = std::chrono::steady_clock::now();
    CriticalTaus t = critical_taus(1e-9, ScanOptions{512, 10000, 1});
    double secs = seconds_since(t0);
    double d1 = std::abs(t.tau1 - 0.12487351), dc = std::abs(t.tau_c - 0.1913565), d2 = std::abs(t.tau2 - 0.2289555);
    bool ok = d1 < 1e-4 && dc < 1e-4 && d2 < 1e-4 && secs < 60.0;
    report(ok, "critical-taus",
           f("tau1=%.8f", t.tau1) + f(" (|d|=%.2e)", d1) + f(" tau_c=%.7f", t.tau_c) + f(" (|d|=%.2e)", dc) +
               f(" tau2=%.7f", t.tau2) + f(" (|d|=%.2e)", d2) + f(" tol 1e-4, single core %.1fs", secs));
}

void tau_zero_geometry() {
    BranchPointSet bp = branch_points(make_param(0.0));
    double e = std::max({std::abs(bp.a1 - std::pow(3.0, 2.0 / 3.0) / 4), std::abs(bp.b1 - std::pow(3.0, 2.0 / 3.0) / 4),
                         std::abs(bp.b_star - std::pow(3.0, -1.0 / 3.0)),
                         std::abs(bp.b2 - std::pow(3.0, -1.0 / 3.0) * cplx(-1, std::sqrt(2.0)))});
    Delta2Trace d = trace_delta2(make_param(0.0), Regime::Precritical);
    double da = std::abs(d.a_star - (-0.441782));
    report(e < 1e-10 && da < 1e-4, "tau0-geometry",
           f("branch point error %.1e (tol 1e-10)", e) + f(", Delta2 crosses R at %.6f", d.a_star) +
               f(" (|d|=%.1e, tol 1e-4)", da));
}

void short_trajectories() {
    bool ok = true;
    std::string detail;
    for (double tau : {0.04, 0.10, 0.15}) {
        CutSystem cuts = build_cuts(make_param(tau));
        TraceConfig cfg;
        auto verts = critical_vertices(cuts, cfg);
        int vi = -1;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (verts[i].kind == PointKind::A2 && verts[i].has_sheet(2)) vi = int(i);
        double best = 1e300;
        if (vi >= 0)
            for (Seed s : seed_directions(cuts, verts[vi].z, 2, cfg)) {
                s.vertex = vi;
                Trajectory t = trace_seed(cuts, s, verts, cfg);
                if (t.termination == Termination::HitCriticalPoint && t.end_point == PointKind::B2 &&
                    !t.points.empty() && t.points.back().sheet == 2)
                    best = std::min(best, t.end_gap);
            }
        ok = ok && best < 5e-3;
        detail += f("tau=%.2f ", tau) + (best < 1e300 ? f("a2->b2 gap %.1e; ", best) : std::string("no a2->b2 edge; "));
    }
    for (double tau : {0.20, 0.227}) {
        CurveParam p = make_param(tau);
        double a_star = find_a_star_supercritical(p, 10000);
        Delta2Trace from_b2 = trace_delta2(p, Regime::Supercritical);
        CutSystem cuts = build_cuts(p, Regime::Supercritical);
        TraceConfig cfg;
        cfg.stop_on_real_axis = true;
        auto verts = critical_vertices(cuts, cfg);
        double x_a2 = NAN;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (verts[i].kind != PointKind::A2 || !verts[i].has_sheet(2)) continue;
            for (Seed s : seed_directions(cuts, verts[i].z, 2, cfg)) {
                s.vertex = int(i);
                Trajectory t = trace_seed(cuts, s, verts, cfg);
                if (t.termination == Termination::HitRealAxis && t.real_axis_x > cuts.bp.a1 &&
                    t.real_axis_x < cuts.bp.b1)
                    if (std::isnan(x_a2) || std::abs(t.real_axis_x - a_star) < std::abs(x_a2 - a_star))
                        x_a2 = t.real_axis_x;
            }
        }
        double e1 = std::abs(from_b2.a_star - a_star), e2 = std::isnan(x_a2) ? 1.0 : std::abs(x_a2 - a_star);
        ok = ok && e1 < 1e-4 && e2 < 1e-4;
        detail += f("tau=%.3f ", tau) + f("a*=%.7f b2-side ", a_star) + f("%.1e ", e1) + f("a2-side %.1e; ", e2);
    }
    report(ok, "short-trajectory", detail + "(gap tol 5e-3, a* tol 1e-4)");
}

void algebraic_invariants() {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> t(0.0, 0.2499), u(-4, 4);
    double vs = 0, vq = 0, vp = 0, disc = 0;
    for (int i = 0; i < 1000; ++i) {
        CurveParam p = make_param(t(rng));
        cplx z(u(rng), u(rng));
        XiTriple xi = solve_xi_unlabeled(p, z);
        VietaResidual v = vieta_residuals(p, z, xi);
        double mx = std::max({std::abs(xi[0]), std::abs(xi[1]), std::abs(xi[2])});
        vs = std::max(vs, v.sum / mx);
        vq = std::max(vq, v.sumsq / std::max(std::abs(eval_R(p, z)), 1e-300));
        vp = std::max(vp, v.prod / std::max(std::abs(eval_D(p, z)), 1e-300));
        Discriminant d = eval_discriminant(p, z);
        cplx R = eval_R(p, z), D = eval_D(p, z);
        double scale = std::max({std::abs(4.0 * R * R * R), std::abs(27.0 * D * D), std::abs(d.value)});
        disc = std::max(disc, std::abs(d.value - d.factored()) / scale);
    }
    bool ok = vs < 1e-8 && vq < 1e-8 && vp < 1e-8 && disc < 1e-9;
    report(ok, "algebraic-invariants",
           f("Vieta rel: sum %.1e", vs) + f(" sumsq %.1e", vq) + f(" prod %.1e (tol 1e-8)", vp) +
               f(", discriminant rel to max(|4R^3|,|27D^2|) %.1e (tol 1e-9), 1000 samples", disc));
}

struct FamilyCache {
    std::map<double, std::unique_ptr<FamilyMeasure>> m;
    const FamilyMeasure& get(double tau) {
        auto& s = m[tau];
        if (!s) s = std::make_unique<FamilyMeasure>(family_measure(build_cuts(make_param(tau)), 2000));
        return *s;
    }
} families;

const double kSampled[10] = {0.02, 0.05, 0.08, 0.11, 0.14, 0.17, 0.195, 0.21, 0.227, 0.24};

void mass_constraints() {
    double e12 = 0, e13 = 0;
    bool mu3_ok = true;
    int sup = 0;
    for (double tau : kSampled) {
        const FamilyMeasure& fm = families.get(tau);
        Masses m = masses(fm);
        e12 = std::max(e12, std::abs(m.m1 + m.m2 - 1));
        e13 = std::max(e13, std::abs(m.m1 + m.m3 - fm.cuts.param.alpha));
        if (fm.cuts.regime == Regime::Precritical) mu3_ok = mu3_ok && fm.mu[2].empty() && m.m3 == 0.0;
        else ++sup;
    }
    report(e12 < 1e-5 && e13 < 1e-5 && mu3_ok && sup > 0 && sup < 10, "mass-constraints",
           f("max |m1+m2-1| %.1e", e12) + f(", max |m1+m3-alpha| %.1e (tol 1e-5)", e13) +
               ", mu3 = 0 below tau_c: " + (mu3_ok ? "yes" : "no") + f(", %g supercritical of 10", sup));
}

void cauchy_identities() {
    double worst = 0;
    for (double tau : {0.05, 0.11, 0.17, 0.21, 0.227}) {
        const FamilyMeasure& fm = families.get(tau);
        for (cplx z : test_points(fm, 20, 77)) {
            auto x = xi_from_measures(fm.mu, ExternalField::cubic(), z);
            XiTriple l = xi_labels(fm.cuts, z);
            for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(x[k] - l[k]));
        }
    }
    report(worst < 1e-5, "cauchy-identities", f("max residual %.1e over 5 tau x 20 points (tol 1e-5)", worst));
}

void criticality() {
    double worst = 0, dh = 0;
    for (double tau : {0.05, 0.11, 0.17, 0.21, 0.227}) {
        const FamilyMeasure& fm = families.get(tau);
        for (cplx z : test_points(fm, 20, 99)) {
            auto x = xi_from_measures(fm.mu, ExternalField::cubic(), z);
            cplx d = variation_Dhz(fm.mu, ExternalField::cubic(), z);
            cplx lhs = 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            worst = std::max(worst, std::abs(lhs - eval_R(fm.cuts.param, z) - d));
            dh = std::max(dh, std::abs(d));
        }
    }
    report(worst < 5e-4 && dh < 5e-4, "criticality-identity",
           f("max |sum xi^2/2 - R - D_hz| %.1e", worst) + f(", max |D_hz| %.1e (tol 5e-4)", dh));
}

void equilibrium() {
    bool ok = true;
    std::string detail;
    for (double tau : {0.11, 0.17, 0.21, 0.227}) {
        const FamilyMeasure& fm = families.get(tau);
        EquilibriumReport r = verify_equilibrium(fm);
        double dev = std::max({r.dev1, r.dev2, r.dev3});
        double margin = std::min({r.margin1, r.margin2, r.margin3});
        if (!r.supercritical) margin = std::min(margin, r.margin_astar);
        ok = ok && r.ok(1e-4);
        detail += f("tau=%.3f", tau) + f(" dev %.1e", dev) + f(" margin %.3f", margin);
        if (r.supercritical) detail += f(" l3 defect %.1e", r.l3_defect);
        detail += "; ";
    }
    report(ok, "equilibrium", detail + "(dev tol 1e-4, margins > 0)");
}

void fixture_exponents() {
    Fixture a = example_fixture(FixtureName::Angelesco);
    Fixture n = example_fixture(FixtureName::Nikishin);
    double ea = std::abs(a.blowup_exponent - 1.0 / 3), en = std::abs(n.blowup_exponent - 2.0 / 3);
    double ma = std::max(std::abs(a.masses[0] - 0.5), std::abs(a.masses[1] - 0.5));
    double mn = std::max(std::abs(n.masses[0] - 1.0), std::abs(n.masses[1] - 1.0));
    report(ea < 0.03 && en < 0.03 && ma < 1e-5 && mn < 1e-5, "fixture-exponents",
           f("Angelesco nu=%.4f", a.blowup_exponent) + f(" mass err %.1e", ma) +
               f(", Nikishin nu=%.4f", n.blowup_exponent) + f(" mass err %.1e (tol 0.03, 1e-5)", mn));
}

void phase_diagram() {
    auto gold = golden::load(std::string(CUBICVM_GOLDEN_DIR) + "/topology.json");
    bool ok = true;
    std::string detail;
    for (const auto& cs : gold["cases"]) {
        double tau = cs["tau"];
        CutSystem cuts = build_cuts(make_param(tau));
        CriticalGraph g = critical_graph(cuts);
        auto miss = golden::missing(g, cs);
        bool good = miss.empty() && g.degree_law && g.conjugation_symmetric;
        ok = ok && good;
        detail += f("tau=%.2f ", tau) + cs["interval"].get<std::string>() + (good ? " ok" : " MISMATCH");
        if (!miss.empty()) detail += f(" (%g fixture edges missing)", double(miss.size()));
        if (!g.degree_law) detail += " degree law broken";
        if (!g.conjugation_symmetric) detail += " asymmetric";
        detail += "; ";
    }
    report(ok, "phase-diagram", detail);
}

} // namespace

int main() {
    critical_parameters();
    tau_zero_geometry();
    short_trajectories();
    algebraic_invariants();
    mass_constraints();
    cauchy_identities();
    criticality();
    equilibrium();
    fixture_exponents();
    phase_diagram();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures ? 1 : 0;
}
