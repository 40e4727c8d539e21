#include "cubicvm/tracer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace cubicvm {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I1(0.0, 1.0);

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

double angle_gap(double a, double b) {
    double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, 2.0 * kPi - d);
}
} // namespace

const char* point_name(PointKind k) {
    switch (k) {
    case PointKind::A1: return "a1";
    case PointKind::B1: return "b1";
    case PointKind::A2: return "a2";
    case PointKind::B2: return "b2";
    case PointKind::BStar: return "b*";
    }
    return "?";
}

const char* termination_name(Termination t) {
    switch (t) {
    case Termination::HitCriticalPoint: return "critical_point";
    case Termination::HitRadiusBound: return "radius_bound";
    case Termination::HitRealAxis: return "real_axis";
    case Termination::StepLimit: return "step_limit";
    case Termination::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

cplx point_position(const BranchPointSet& bp, PointKind k) {
    switch (k) {
    case PointKind::A1: return bp.a1;
    case PointKind::B1: return bp.b1;
    case PointKind::A2: return bp.a2;
    case PointKind::B2: return bp.b2;
    case PointKind::BStar: return bp.b_star;
    }
    return 0.0;
}

std::string Vertex::label() const {
    std::string s = point_name(kind);
    s += "^(";
    for (std::size_t i = 0; i < sheets.size(); ++i) {
        if (i) s += "=";
        s += std::to_string(sheets[i]);
    }
    return s + ")";
}

bool Vertex::has_sheet(int s) const {
    return std::find(sheets.begin(), sheets.end(), s) != sheets.end();
}

cplx q_squared(const CurveParam& p, cplx z, cplx e) { return 4.0 * eval_R(p, z) - 3.0 * e * e; }

namespace {

struct CycleSeeds {
    int length = 1;
    std::vector<double> angles;  // in [0, 2 pi)
    std::vector<cplx> points;
    std::vector<cplx> roots;
};

// follows the roots once around |z-p| = r and extracts, per monodromy cycle, the directions
// where Q^2 dz^2 is negative (trajectories) or positive (orthogonal trajectories)
std::vector<CycleSeeds> circle_seeds(const CurveParam& prm, cplx p, double r, TrajKind kind) {
    const int N = 1440;
    const double phi0 = 0.01234;
    std::vector<XiTriple> T(N + 1);
    std::vector<cplx> Z(N + 1);
    for (int k = 0; k <= N; ++k) Z[k] = p + std::polar(r, phi0 + 2.0 * kPi * k / N);
    T[0] = solve_xi_unlabeled(prm, Z[0]);
    for (int k = 1; k <= N; ++k) T[k] = continue_to(prm, Z[k - 1], T[k - 1], Z[k]);
    int perm[3];
    for (int i = 0; i < 3; ++i) {
        int best = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(T[N][i] - T[0][j]) < std::abs(T[N][i] - T[0][best])) best = j;
        perm[i] = best;
    }
    std::vector<CycleSeeds> out;
    bool seen[3] = {false, false, false};
    for (int i0 = 0; i0 < 3; ++i0) {
        if (seen[i0]) continue;
        std::vector<int> cyc;
        for (int i = i0; !seen[i]; i = perm[i]) {
            seen[i] = true;
            cyc.push_back(i);
            if (cyc.size() > 3) break;
        }
        CycleSeeds cs;
        cs.length = int(cyc.size());
        auto g = [&](int turn, int k) {
            int idx = cyc[turn];
            cplx dz = std::polar(1.0, phi0 + 2.0 * kPi * k / N);
            return q_squared(prm, Z[k], T[k][idx]) * dz * dz;
        };
        for (int turn = 0; turn < cs.length; ++turn) {
            for (int k = 0; k < N; ++k) {
                cplx g0 = g(turn, k), g1 = g(turn, k + 1);
                if ((g0.imag() < 0.0) == (g1.imag() < 0.0)) continue;
                double s = g0.imag() / (g0.imag() - g1.imag());
                double re = g0.real() + s * (g1.real() - g0.real());
                bool want = kind == TrajKind::Trajectory ? re < 0.0 : re > 0.0;
                if (!want) continue;
                double phi = phi0 + 2.0 * kPi * (k + s) / N;
                cplx z = p + std::polar(r, phi);
                cplx e0 = T[k][cyc[turn]];
                XiTriple here = solve_xi_unlabeled(prm, z);
                int best = 0;
                for (int j = 1; j < 3; ++j)
                    if (std::abs(here[j] - e0) < std::abs(here[best] - e0)) best = j;
                cs.angles.push_back(wrap_angle(phi));
                cs.points.push_back(z);
                cs.roots.push_back(here[best]);
            }
        }
        out.push_back(cs);
    }
    return out;
}

int label_of(const CutSystem& cuts, cplx z, cplx e) {
    XiTriple lab;
    try {
        lab = xi_labels(cuts, z);
    } catch (const DomainError&) {
        lab = xi_labels(cuts, z, Side::Plus);
    }
    int best = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(lab[j] - e) < std::abs(lab[best] - e)) best = j;
    return best + 1;
}

std::vector<std::pair<PointKind, cplx>> critical_positions(const BranchPointSet& bp) {
    return {{PointKind::A1, bp.a1},
            {PointKind::B1, bp.b1},
            {PointKind::A2, bp.a2},
            {PointKind::B2, bp.b2},
            {PointKind::BStar, bp.b_star}};
}

// whether e is the root that stays apart from the coinciding pair at b*
bool odd_at_bstar(const CurveParam& p, double bs, cplx e) {
    XiTriple r = solve_xi_unlabeled(p, bs);
    int odd = 0;
    double far = -1.0;
    for (int i = 0; i < 3; ++i) {
        double d = std::min(std::abs(r[i] - r[(i + 1) % 3]), std::abs(r[i] - r[(i + 2) % 3]));
        if (d > far) {
            far = d;
            odd = i;
        }
    }
    int near = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(r[i] - e) < std::abs(r[near] - e)) near = i;
    return near == odd;
}

struct Stepper {
    const CurveParam& p;
    TrajKind kind;
    cplx heading;

    cplx direction(cplx q2) const {
        cplx q = std::sqrt(q2);
        double aq = std::abs(q);
        if (aq == 0.0) return heading;
        cplx d = kind == TrajKind::Trajectory ? I1 * std::conj(q) / aq : std::conj(q) / aq;
        if ((d * std::conj(heading)).real() < 0.0) d = -d;
        return d;
    }
};

} // namespace

std::vector<Seed> seed_directions(const CutSystem& cuts, cplx p, int sheet, const TraceConfig& cfg,
                                  int* order) {
    auto cycles = circle_seeds(cuts.param, p, cfg.seed_eps, cfg.kind);
    std::vector<Seed> seeds;
    int ord = -100;
    for (const auto& cs : cycles) {
        int n = int(cs.angles.size()) - 2;
        if (n < 1) continue;
        std::vector<Seed> local;
        bool match = sheet == 0;
        for (std::size_t k = 0; k < cs.angles.size(); ++k) {
            Seed s;
            s.angle = cs.angles[k];
            s.z = cs.points[k];
            s.excluded = cs.roots[k];
            s.sheet = label_of(cuts, s.z, s.excluded);
            if (s.sheet == sheet) match = true;
            local.push_back(s);
        }
        if (!match) continue;
        ord = n;
        for (auto& s : local)
            if (sheet == 0 || s.sheet == sheet) seeds.push_back(s);
    }
    if (ord == -100) throw ClassificationError("seed_directions: not a zero of Q^2 on this sheet");
    if (order) *order = ord;
    std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        return a.sheet != b.sheet ? a.sheet < b.sheet : a.angle < b.angle;
    });
    int idx = 0, cur = -1;
    for (auto& s : seeds) {
        if (s.sheet != cur) {
            cur = s.sheet;
            idx = 0;
        }
        s.index = ++idx;
    }
    return seeds;
}

namespace {

Trajectory run_trace(const CutSystem& cuts, cplx z0, cplx e0, int sheet0, double heading0,
                     const std::vector<Vertex>* vertices, int seed_vertex, const TraceConfig& cfg) {
    const CurveParam& prm = cuts.param;
    const BranchPointSet& bp = cuts.bp;
    auto crit = critical_positions(bp);

    Trajectory tr;
    tr.kind = cfg.kind;
    tr.seed.z = z0;
    tr.seed.excluded = e0;
    tr.seed.sheet = sheet0;
    tr.seed.angle = heading0;
    tr.seed.vertex = seed_vertex;

    XiTriple t = solve_xi_unlabeled(prm, z0);
    int ex = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(t[j] - e0) < std::abs(t[ex] - e0)) ex = j;

    cplx z = z0;
    int sheet = sheet0;
    Stepper st{prm, cfg.kind, std::polar(1.0, heading0)};
    cplx qprev = std::sqrt(q_squared(prm, z, t[ex]));
    cplx ups = 0.0;
    double arc = 0.0;
    tr.points.push_back({z, sheet, Side::Interior});
    tr.t.push_back(0.0);

    bool d2_active = !cuts.provisional && cuts.delta2.size() > 1;
    double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
    for (cplx w : cuts.delta2) {
        bx0 = std::min(bx0, w.real());
        bx1 = std::max(bx1, w.real());
        by0 = std::min(by0, w.imag());
        by1 = std::max(by1, w.imag());
    }

    auto eval_dir = [&](cplx zs, const XiTriple& base, cplx zb) {
        XiTriple ts = continue_to(prm, zb, base, zs);
        return st.direction(q_squared(prm, zs, ts[ex]));
    };

    std::vector<bool> armed(crit.size());
    for (std::size_t k = 0; k < crit.size(); ++k) armed[k] = std::abs(z0 - crit[k].second) >= cfg.snap_radius;
    auto snap_target = [&](cplx zc, cplx e) -> int {
        for (std::size_t k = 0; k < crit.size(); ++k)
            if (!armed[k] && std::abs(zc - crit[k].second) > 1.5 * cfg.snap_radius) armed[k] = true;
        for (std::size_t k = 0; k < crit.size(); ++k) {
            cplx c = crit[k].second;
            if (std::abs(zc - c) >= cfg.snap_radius) continue;
            if (!armed[k]) continue;
            if (crit[k].first == PointKind::BStar) {
                bool at_b1 = std::abs(bp.b_star - bp.b1) < 1e-9;
                if (!at_b1 && !odd_at_bstar(prm, bp.b_star, e)) continue;
            }
            return int(k);
        }
        return -1;
    };

    try {
        for (long step = 0; step < cfg.max_steps; ++step) {
            double dcrit = 1e300;
            for (auto& c : crit) dcrit = std::min(dcrit, std::abs(z - c.second));
            double h = cfg.step_rel * std::max(1.0, std::abs(z));
            h = std::min(h, std::max(dcrit / 4.0, cfg.min_step));

            cplx k1 = st.direction(q_squared(prm, z, t[ex]));
            cplx k2 = eval_dir(z + 0.5 * h * k1, t, z);
            cplx k3 = eval_dir(z + 0.5 * h * k2, t, z);
            cplx k4 = eval_dir(z + h * k3, t, z);
            cplx zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            XiTriple tn = continue_to(prm, z, t, zn);
            cplx qn = std::sqrt(q_squared(prm, zn, tn[ex]));
            if ((qn * std::conj(qprev)).real() < 0.0) qn = -qn;
            ups += 0.5 * (qprev + qn) * (zn - z);
            double cons = cfg.kind == TrajKind::Trajectory ? std::abs(ups.real()) : std::abs(ups.imag());
            tr.max_upsilon = std::max(tr.max_upsilon, std::abs(ups));
            tr.conservation_drift = std::max(tr.conservation_drift, cons);
            st.heading = (zn - z) / std::abs(zn - z);

            // real axis
            double y0 = z.imag(), y1 = zn.imag();
            bool crossed_real = (y0 < 0.0) != (y1 < 0.0) && std::max(std::abs(y0), std::abs(y1)) > 1e-9;
            double xr = 0.0;
            if (crossed_real) {
                double s = y0 / (y0 - y1);
                xr = z.real() + s * (zn.real() - z.real());
                tr.real_axis_hits.push_back(xr);
                if (cfg.stop_on_real_axis && arc > 2.0 * cfg.seed_eps) {
                    cplx zr(xr, 0.0);
                    tr.points.push_back({zr, sheet, Side::Interior});
                    tr.t.push_back(arc + std::abs(zr - z));
                    tr.termination = Termination::HitRealAxis;
                    tr.real_axis_x = xr;
                    tr.upsilon_end = ups;
                    return tr;
                }
            }
            int new_sheet = sheet;
            std::optional<CutId> crossed;
            if (crossed_real) {
                if (cuts.delta1.contains(xr) && cuts.borders(sheet, CutId::D1)) crossed = CutId::D1;
                else if (cuts.delta3.contains(xr) && cuts.borders(sheet, CutId::D3)) crossed = CutId::D3;
            }
            if (!crossed && d2_active && cuts.borders(sheet, CutId::D2)) {
                double lx = std::min(z.real(), zn.real()), hx = std::max(z.real(), zn.real());
                double ly = std::min(z.imag(), zn.imag()), hy = std::max(z.imag(), zn.imag());
                if (hx >= bx0 && lx <= bx1 && hy >= by0 && ly <= by1) {
                    for (std::size_t k = 0; k + 1 < cuts.delta2.size(); ++k)
                        if (segment_intersection(z, zn, cuts.delta2[k], cuts.delta2[k + 1])) {
                            crossed = CutId::D2;
                            break;
                        }
                }
            }
            if (crossed) {
                new_sheet = cross_cut(sheet, *crossed);
                if (cfg.verify_crossings && !cuts.provisional) {
                    try {
                        int lab = label_of(cuts, zn, tn[ex]);
                        if (lab != new_sheet) {
                            tr.note += std::string("relabel at ") + cut_name(*crossed) + "; ";
                            new_sheet = lab;
                        }
                    } catch (const std::exception&) {
                    }
                }
                if (new_sheet != sheet) tr.crossings.push_back({tr.points.size(), *crossed, sheet, new_sheet});
                sheet = new_sheet;
            }

            arc += std::abs(zn - z);
            z = zn;
            t = tn;
            qprev = qn;
            tr.points.push_back({z, sheet, Side::Interior});
            tr.t.push_back(arc);

            if (std::abs(z) > cfg.r_max) {
                tr.termination = Termination::HitRadiusBound;
                tr.end_angle = wrap_angle(std::arg(z));
                int j = int(std::lround((6.0 * tr.end_angle / kPi + 1.0) / 2.0));
                tr.end_theta = j < 1 ? 6 : (j > 6 ? 1 : j);
                double far = std::max(far_radius(bp), std::abs(z));
                cplx zf = z / std::abs(z) * far;
                XiTriple tf = continue_to(prm, z, t, zf);
                XiTriple lab = label_at_infinity(prm, zf, tf);
                int s = 0;
                for (int k = 1; k < 3; ++k)
                    if (std::abs(lab[k] - tf[ex]) < std::abs(lab[s] - tf[ex])) s = k;
                tr.end_sheet = s + 1;
                if (tr.end_sheet != sheet) tr.note += "asymptotic sheet differs from tracked sheet; ";
                tr.upsilon_end = ups;
                return tr;
            }

            int target = snap_target(z, t[ex]);
            if (target >= 0) {
                cplx c = crit[target].second;
                double gap = std::abs(z - c);
                for (int it = 0; it < 400 && gap > 1e-12; ++it) {
                    double hh = gap / 4.0;
                    cplx d = st.direction(q_squared(prm, z, t[ex]));
                    cplx zt = z + hh * d;
                    double g2 = std::abs(zt - c);
                    if (g2 >= gap) break;
                    XiTriple tt = continue_to(prm, z, t, zt);
                    arc += hh;
                    z = zt;
                    t = tt;
                    gap = g2;
                    st.heading = d;
                    tr.points.push_back({z, sheet, Side::Interior});
                    tr.t.push_back(arc);
                }
                tr.termination = Termination::HitCriticalPoint;
                tr.end_point = crit[target].first;
                tr.end_gap = gap;
                if (vertices) {
                    for (std::size_t v = 0; v < vertices->size(); ++v) {
                        const Vertex& vx = (*vertices)[v];
                        if (vx.kind == tr.end_point && vx.has_sheet(sheet)) tr.end_vertex = int(v);
                    }
                }
                tr.upsilon_end = ups;
                return tr;
            }
        }
        tr.termination = Termination::StepLimit;
    } catch (const ContinuationError& e) {
        tr.termination = Termination::NumericalFailure;
        tr.note += e.what();
    }
    tr.upsilon_end = ups;
    return tr;
}

} // namespace

Trajectory trace(const CutSystem& cuts, const SheetPoint& seed, double heading,
                 const TraceConfig& cfg) {
    cplx e = xi_on_sheet(cuts, seed);
    return run_trace(cuts, seed.z, e, seed.sheet, heading, nullptr, -1, cfg);
}

Trajectory trace_seed(const CutSystem& cuts, const Seed& seed, const std::vector<Vertex>& vertices,
                      const TraceConfig& cfg) {
    Trajectory tr = run_trace(cuts, seed.z, seed.excluded, seed.sheet, seed.angle, &vertices,
                              seed.vertex, cfg);
    tr.seed = seed;
    return tr;
}

std::vector<Vertex> critical_vertices(const CutSystem& cuts, const TraceConfig& cfg) {
    std::vector<Vertex> out;
    TraceConfig c = cfg;
    c.kind = TrajKind::Trajectory;
    for (auto [kind, pos] : critical_positions(cuts.bp)) {
        if (kind == PointKind::BStar && std::abs(cuts.bp.b_star - cuts.bp.b1) < 1e-9) continue;
        auto cycles = circle_seeds(cuts.param, pos, c.seed_eps, TrajKind::Trajectory);
        for (const auto& cs : cycles) {
            int n = int(cs.angles.size()) - 2;
            if (n < 1) continue;
            Vertex v;
            v.kind = kind;
            v.z = pos;
            v.order = n;
            for (std::size_t k = 0; k < cs.angles.size(); ++k) {
                int s = label_of(cuts, cs.points[k], cs.roots[k]);
                if (!v.has_sheet(s)) v.sheets.push_back(s);
            }
            std::sort(v.sheets.begin(), v.sheets.end());
            out.push_back(v);
        }
    }
    return out;
}

const GraphEdge* CriticalGraph::find(PointKind k, int sheet, int index) const {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const Seed& s = seeds[i];
        if (s.vertex < 0) continue;
        if (vertices[s.vertex].kind == k && s.sheet == sheet && s.index == index) return &edges[i];
    }
    return nullptr;
}

int CriticalGraph::vertex_of(PointKind k, int sheet) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].kind == k && vertices[i].has_sheet(sheet)) return int(i);
    return -1;
}

namespace {

PointKind conj_kind(PointKind k) {
    if (k == PointKind::A2) return PointKind::B2;
    if (k == PointKind::B2) return PointKind::A2;
    return k;
}

double hausdorff_conj(const std::vector<SheetPoint>& a, const std::vector<SheetPoint>& b) {
    auto sample = [](const std::vector<SheetPoint>& v) {
        std::vector<cplx> s;
        std::size_t stride = std::max<std::size_t>(1, v.size() / 300);
        for (std::size_t i = 0; i < v.size(); i += stride) s.push_back(v[i].z);
        if (!v.empty()) s.push_back(v.back().z);
        return s;
    };
    auto sa = sample(a), sb = sample(b);
    for (auto& z : sb) z = std::conj(z);
    auto one = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        double h = 0.0;
        for (cplx p : x) {
            double m = 1e300;
            for (cplx q : y) m = std::min(m, std::abs(p - q));
            h = std::max(h, m / std::max(1.0, std::abs(p)));
        }
        return h;
    };
    return std::max(one(sa, sb), one(sb, sa));
}

} // namespace

CriticalGraph critical_graph(const CutSystem& cuts, const TraceConfig& cfg, int threads) {
    CriticalGraph g;
    g.tau = cuts.param.tau;
    g.vertices = critical_vertices(cuts, cfg);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const Vertex& vx = g.vertices[v];
        for (int s : vx.sheets) {
            auto seeds = seed_directions(cuts, vx.z, s, cfg);
            for (auto& sd : seeds) {
                sd.vertex = int(v);
                g.seeds.push_back(sd);
            }
        }
        if (vx.sheets.size() == 2) {
            // a glued vertex lists each seed once under the sheet of its own root
            int count = 0;
            for (const auto& sd : g.seeds)
                if (sd.vertex == int(v)) ++count;
            if (count != vx.order + 2)
                g.warnings.push_back(vx.label() + ": seed count " + std::to_string(count));
        }
    }

    g.edges.resize(g.seeds.size());
    std::atomic<std::size_t> next{0};
    int nt = std::max(1, std::min<int>(thread_count(threads), int(g.seeds.size())));
    auto work = [&]() {
        for (std::size_t i = next++; i < g.seeds.size(); i = next++) {
            try {
                g.edges[i].traj = trace_seed(cuts, g.seeds[i], g.vertices, cfg);
            } catch (const std::exception& e) {
                g.edges[i].error = e.what();
                g.edges[i].traj.termination = Termination::NumericalFailure;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    // mates: an edge arriving at a vertex pairs with the seed leaving in that direction
    bool law = true;
    std::vector<int> claimed(g.seeds.size(), -1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Trajectory& tr = g.edges[i].traj;
        if (tr.termination != Termination::HitCriticalPoint) continue;
        int v = tr.end_vertex;
        if (v < 0) {
            law = false;
            g.warnings.push_back("edge " + std::to_string(i) + " ends at an unlisted vertex");
            continue;
        }
        const cplx c = g.vertices[v].z;
        cplx probe = tr.points.back().z;
        for (auto it = tr.points.rbegin(); it != tr.points.rend(); ++it) {
            if (std::abs(it->z - c) >= 10.0 * cfg.seed_eps) {
                probe = it->z;
                break;
            }
        }
        double ang = std::arg(probe - c);
        int sheet = tr.points.back().sheet;
        int best = -1;
        double bd = 1e300;
        for (std::size_t j = 0; j < g.seeds.size(); ++j) {
            if (g.seeds[j].vertex != v || g.seeds[j].sheet != sheet) continue;
            double d = angle_gap(ang, g.seeds[j].angle);
            if (d < bd) {
                bd = d;
                best = int(j);
            }
        }
        if (best < 0 || bd > 0.35) {
            law = false;
            g.warnings.push_back("edge " + std::to_string(i) + " arrival not matched at " +
                                 g.vertices[v].label());
            continue;
        }
        g.edges[i].mate = best;
        if (claimed[best] >= 0 && claimed[best] != int(i) && best != int(i)) {
            // closed loops claim their own seed pair twice
            if (g.edges[best].mate != int(i)) {
                law = false;
                g.warnings.push_back("seed " + std::to_string(best) + " claimed twice");
            }
        }
        claimed[best] = int(i);
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        int count = 0;
        for (const auto& sd : g.seeds)
            if (sd.vertex == int(v)) ++count;
        if (count != g.vertices[v].order + 2) law = false;
    }
    g.degree_law = law;

    // conjugation symmetry
    bool sym = true;
    double defect = 0.0;
    for (std::size_t i = 0; i < g.seeds.size(); ++i) {
        const Seed& s = g.seeds[i];
        PointKind ck = conj_kind(g.vertices[s.vertex].kind);
        int best = -1;
        double bd = 1e300;
        for (std::size_t j = 0; j < g.seeds.size(); ++j) {
            const Seed& o = g.seeds[j];
            if (g.vertices[o.vertex].kind != ck || o.sheet != s.sheet) continue;
            double d = angle_gap(o.angle, -s.angle);
            if (d < bd) {
                bd = d;
                best = int(j);
            }
        }
        if (best < 0 || bd > 1e-3) {
            sym = false;
            continue;
        }
        const Trajectory& a = g.edges[i].traj;
        const Trajectory& b = g.edges[best].traj;
        if (a.termination != b.termination) {
            sym = false;
            g.warnings.push_back("conjugate edges terminate differently at seed " + std::to_string(i));
            continue;
        }
        double h = hausdorff_conj(a.points, b.points);
        defect = std::max(defect, h);
        if (h > 10.0 * cfg.step_rel) sym = false;
    }
    g.conjugation_symmetric = sym;
    g.symmetry_defect = defect;
    return g;
}

Delta2Trace trace_delta2(const CurveParam& p, Regime regime, const TraceConfig& cfg) {
    CutSystem prov = provisional_cut_system(p, regime);
    auto cycles = circle_seeds(p, prov.bp.b2, cfg.seed_eps, TrajKind::Trajectory);
    const CycleSeeds* distinct = nullptr;
    for (const auto& cs : cycles)
        if (cs.length == 1 && cs.angles.size() == 3) distinct = &cs;
    if (!distinct) throw ClassificationError("trace_delta2: b2 is not a simple zero on sheet 2");

    std::vector<int> order(3);
    for (int k = 0; k < 3; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return distinct->angles[a] < distinct->angles[b]; });

    TraceConfig c = cfg;
    c.kind = TrajKind::Trajectory;
    c.stop_on_real_axis = true;
    c.verify_crossings = false;
    Delta2Trace best;
    double best_len = 1e300;
    for (int rank = 0; rank < 3; ++rank) {
        int k = order[rank];
        Trajectory tr = run_trace(prov, distinct->points[k], distinct->roots[k], 2,
                                  distinct->angles[k], nullptr, -1, c);
        if (tr.termination != Termination::HitRealAxis) continue;
        double x = tr.real_axis_x;
        bool ok = regime == Regime::Supercritical ? (x > prov.bp.a1 && x < prov.bp.b1)
                                                  : (x < prov.bp.a1);
        if (!ok) continue;
        if (tr.t.back() < best_len) {
            best_len = tr.t.back();
            best.traj = tr;
            best.seed_index = rank + 1;
            best.a_star = x;
        }
    }
    if (best_len == 1e300) throw GeometryError("trace_delta2: no trajectory from b2 reaches the axis");
    best.upper.push_back(cplx(best.a_star, 0.0));
    for (auto it = best.traj.points.rbegin(); it != best.traj.points.rend(); ++it)
        if (it->z.imag() > 0.0) best.upper.push_back(it->z);
    best.upper.push_back(prov.bp.b2);
    return best;
}

CutSystem build_cuts(const CurveParam& p, Regime regime, const TraceConfig& cfg) {
    if (regime == Regime::Boundary) regime = Regime::Precritical;
    Delta2Trace d = trace_delta2(p, regime, cfg);
    double a_star = d.a_star;
    if (regime == Regime::Supercritical) a_star = find_a_star_supercritical(p, 10000);
    std::vector<cplx> upper(d.upper.begin() + 1, d.upper.end());
    return make_cut_system(p, regime, upper, a_star);
}

CutSystem build_cuts(const CurveParam& p, const TraceConfig& cfg) {
    return build_cuts(p, classify_regime_local(p), cfg);
}

OrthogonalExtension orthogonal_extension(const CutSystem& cuts, const TraceConfig& cfg) {
    TraceConfig c = cfg;
    c.kind = TrajKind::Orthogonal;
    c.stop_on_real_axis = false;
    auto cycles = circle_seeds(cuts.param, cuts.bp.b2, c.seed_eps, TrajKind::Orthogonal);
    const CycleSeeds* distinct = nullptr;
    for (const auto& cs : cycles)
        if (cs.length == 1 && cs.angles.size() == 3) distinct = &cs;
    if (!distinct) throw ClassificationError("orthogonal_extension: b2 is not a simple zero");
    OrthogonalExtension out;
    double best = 1e300;
    const double target = 2.0 * kPi / 3.0;
    for (std::size_t k = 0; k < 3; ++k) {
        Trajectory tr = run_trace(cuts, distinct->points[k], distinct->roots[k], 2,
                                  distinct->angles[k], nullptr, -1, c);
        if (tr.termination != Termination::HitRadiusBound) continue;
        double err = angle_gap(tr.end_angle, target);
        if (err < best) {
            best = err;
            out.gamma1 = tr;
        }
    }
    for (const auto& sp : out.gamma1.points) out.gamma2.push_back(std::conj(sp.z));
    out.heading_error = best;
    if (out.gamma1.points.size() > 2) {
        cplx a = out.gamma1.points[out.gamma1.points.size() - 2].z;
        cplx b = out.gamma1.points.back().z;
        out.heading_error = angle_gap(std::arg(b - a), target);
    }
    out.direction_ok = best < 0.2 && out.gamma1.end_sheet == 2;
    return out;
}

} // namespace cubicvm
