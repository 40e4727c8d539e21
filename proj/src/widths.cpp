#include "cubicvm/widths.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace cubicvm {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Precritical: return "precritical";
    case Regime::Supercritical: return "supercritical";
    case Regime::Boundary: return "boundary";
    }
    return "?";
}

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CUBICVM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

namespace {

int distinct_index(const XiTriple& r) {
    double d01 = std::abs(r[0] - r[1]), d02 = std::abs(r[0] - r[2]), d12 = std::abs(r[1] - r[2]);
    if (d01 <= d02 && d01 <= d12) return 2;
    if (d02 <= d12) return 1;
    return 0;
}

// distance from c to the open segment [a,b]
double seg_distance(cplx a, cplx b, cplx c) {
    cplx e = b - a;
    double t = std::clamp(((c - a) * std::conj(e)).real() / std::norm(e), 0.0, 1.0);
    return std::abs(a + t * e - c);
}

} // namespace

SegmentTracks segment_tracks(const CurveParam& p, cplx za, cplx zb, int m,
                             const std::vector<cplx>& avoid) {
    if (m < 2) throw DomainError("segment_tracks: m < 2");
    SegmentTracks t;
    t.nodes.resize(m + 1);
    for (int k = 0; k <= m; ++k) t.nodes[k] = za + (zb - za) * (double(k) / m);
    t.nodes[m] = zb;

    const double bend = 1e-3;
    for (cplx c : avoid) {
        if (std::abs(c - za) < 1e-9 || std::abs(c - zb) < 1e-9) continue;
        if (seg_distance(za, zb, c) >= 1e-6) continue;
        cplx e = (zb - za) / std::abs(zb - za);
        for (auto& z : t.nodes) {
            double s = ((z - c) * std::conj(e)).real();
            if (std::abs(s) < bend) {
                double phi = std::acos(-s / bend);
                z = c + bend * e * std::polar(1.0, std::numbers::pi - phi);
            }
        }
    }

    t.roots.resize(m + 1);
    int mid = m / 2;
    t.roots[mid] = solve_xi_unlabeled(p, t.nodes[mid]);
    for (int k = mid + 1; k <= m; ++k) {
        try {
            t.roots[k] = continue_to(p, t.nodes[k - 1], t.roots[k - 1], t.nodes[k]);
        } catch (const ContinuationError&) {
            throw QuadratureError("segment_tracks: continuation failed at node " +
                                  std::to_string(k));
        }
    }
    for (int k = mid - 1; k >= 0; --k) {
        try {
            t.roots[k] = continue_to(p, t.nodes[k + 1], t.roots[k + 1], t.nodes[k]);
        } catch (const ContinuationError&) {
            throw QuadratureError("segment_tracks: continuation failed at node " +
                                  std::to_string(k));
        }
    }
    t.distinct_first = distinct_index(t.roots.front());
    t.distinct_last = distinct_index(t.roots.back());
    return t;
}

cplx track_integral(const SegmentTracks& t, int i, int j) {
    cplx s = 0.0;
    for (std::size_t k = 0; k + 1 < t.nodes.size(); ++k) {
        cplx f0 = t.roots[k][i] - t.roots[k][j];
        cplx f1 = t.roots[k + 1][i] - t.roots[k + 1][j];
        s += 0.5 * (f0 + f1) * (t.nodes[k + 1] - t.nodes[k]);
    }
    return s;
}

Regime regime_from_widths(const WidthReport& r) {
    if (r.W[1] < 0.0) return Regime::Precritical;
    if (r.W[1] > 0.0) return Regime::Supercritical;
    return Regime::Boundary;
}

WidthReport widths(const CurveParam& p, int m, bool with_omega4) {
    BranchPointSet bp = branch_points(p);
    WidthReport r;
    r.tau = p.tau;
    r.m = m;
    std::vector<cplx> avoid = {bp.b1, cplx(bp.b_star), bp.a2};
    SegmentTracks t = segment_tracks(p, bp.b2, bp.a1, m, avoid);
    int u = t.distinct_first;
    int v = t.distinct_last;
    if (u == v) throw QuadratureError("widths: degenerate track identification");
    int w = 3 - u - v;
    r.W[0] = track_integral(t, u, v).real();
    r.W[1] = track_integral(t, w, v).real();
    r.W[2] = track_integral(t, w, u).real();
    r.regime = regime_from_widths(r);
    if (r.regime == Regime::Supercritical) {
        // a1 now joins xi_2 and xi_3, so v carries xi_1 and w carries xi_3
        r.omega[0] = -r.W[2];
        r.omega[1] = r.W[1];
        r.omega[2] = -r.W[0];
    } else {
        r.omega[0] = r.W[0];
        r.omega[1] = r.W[1];
        r.omega[2] = r.W[2];
    }
    if (with_omega4 && p.tau >= 1.0 / 12.0) {
        std::vector<cplx> avoid4 = {bp.b1, bp.a1, bp.a2};
        SegmentTracks t4 = segment_tracks(p, bp.b2, cplx(bp.b_star), m, avoid4);
        int u4 = t4.distinct_first;
        const XiTriple& end = t4.roots.back();
        int x = -1;
        double best = 1e300;
        for (int k = 0; k < 3; ++k) {
            if (k == u4) continue;
            double d = std::abs(end[k] - end[u4]);
            if (d < best) {
                best = d;
                x = k;
            }
        }
        r.omega[3] = track_integral(t4, u4, x).real();
        r.has_omega4 = true;
    }
    return r;
}

double width_omega(const CurveParam& p, int k, int m) {
    if (k < 1 || k > 4) throw DomainError("width_omega: k must be 1..4");
    if (k == 4 && p.tau < 1.0 / 12.0) throw DomainError("width_omega: omega4 needs tau >= 1/12");
    return widths(p, m).omega[k - 1];
}

Regime classify_regime_local(const CurveParam& p, int m) {
    return regime_from_widths(widths(p, m, false));
}

std::vector<WidthReport> width_sweep(const std::vector<double>& taus, int m, int threads,
                                     bool with_omega4) {
    std::vector<WidthReport> out(taus.size());
    std::atomic<std::size_t> next{0};
    int nt = std::max(1, std::min<int>(thread_count(threads), int(taus.size())));
    auto work = [&]() {
        for (std::size_t i = next++; i < taus.size(); i = next++)
            out[i] = widths(make_param(taus[i]), m, with_omega4);
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return out;
}

CriticalTaus critical_taus(double tol, const ScanOptions& opt) {
    if (!(tol >= 1e-9)) throw DomainError("critical_taus: tol must be >= 1e-9");
    const double lo = 1.0 / 12.0 + 1e-4, hi = 0.25 - 1e-4;
    std::vector<double> grid(opt.grid);
    for (int i = 0; i < opt.grid; ++i) grid[i] = lo + (hi - lo) * i / (opt.grid - 1);
    auto rows = width_sweep(grid, opt.m, opt.threads, false);

    std::vector<std::pair<double, double>> om1, om2;
    for (int i = 0; i + 1 < opt.grid; ++i) {
        if ((rows[i].omega[0] < 0) != (rows[i + 1].omega[0] < 0))
            om1.emplace_back(grid[i], grid[i + 1]);
        if ((rows[i].W[1] < 0) != (rows[i + 1].W[1] < 0)) om2.emplace_back(grid[i], grid[i + 1]);
    }
    if (om1.size() != 2 || om2.size() != 1)
        throw ScanError("critical_taus: expected two sign changes of omega1 and one of omega2");

    auto solve = [&](std::pair<double, double> br, int which) {
        auto f = [&](double tau) { return widths(make_param(tau), opt.m, false).W[which]; };
        std::uintmax_t it = 100;
        auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
        auto res = boost::math::tools::toms748_solve(f, br.first, br.second, stop, it);
        return 0.5 * (res.first + res.second);
    };
    CriticalTaus c;
    c.tau1 = solve(om1[0], 0);
    c.tau_c = solve(om2[0], 1);
    // past tau_c omega1 = -W[2]
    c.tau2 = solve(om1[1], 2);
    return c;
}

double h_width(const CurveParam& p, double x, double y, RealCut cut, double lo, double hi, int m) {
    if (x < lo || x > hi || y < lo || y > hi) throw DomainError("h_width: point outside cut");
    if (x == y) return 0.0;
    auto f = [&](double s) {
        XiTriple r = solve_xi_unlabeled(p, s);
        int ir = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(r[k].imag()) < std::abs(r[ir].imag())) ir = k;
        double real_root = r[ir].real();
        double re_c = r[(ir + 1) % 3].real();
        return cut == RealCut::D1 ? re_c - real_root : real_root - re_c;
    };
    double h = (y - x) / m;
    double s = 0.5 * (f(x) + f(y));
    for (int k = 1; k < m; ++k) s += f(x + k * h);
    return s * h;
}

double loop_period_real_part(const CurveParam& p, int sheet, double radius, int nodes) {
    if (sheet < 1 || sheet > 3) throw DomainError("loop_period_real_part: sheet must be 1..3");
    BranchPointSet bp = branch_points(p);
    double far = std::max(far_radius(bp), radius);
    XiTriple t = label_at_infinity(p, far, solve_xi_unlabeled(p, far));
    t = continue_to(p, far, t, radius);
    int i = sheet == 1 ? 1 : 0;
    int j = sheet == 3 ? 1 : 2;
    cplx s = 0.0;
    cplx zprev = radius;
    for (int k = 1; k <= nodes; ++k) {
        cplx z = std::polar(radius, 2.0 * std::numbers::pi * k / nodes);
        t = continue_to(p, zprev, t, z);
        s += (t[i] - t[j]) * cplx(0.0, 1.0) * z;
        zprev = z;
    }
    return s.real() * 2.0 * std::numbers::pi / nodes;
}

} // namespace cubicvm
