#include "cubicvm/sheets.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>

namespace cubicvm {

const char* cut_name(CutId c) {
    switch (c) {
    case CutId::D1: return "D1";
    case CutId::D2: return "D2";
    case CutId::D3: return "D3";
    }
    return "?";
}

std::vector<cplx> CutSystem::delta2_upper() const {
    std::vector<cplx> up;
    bool on = false;
    for (cplx z : delta2) {
        if (!on && z.imag() >= 0.0) on = true;
        if (on) up.push_back(z);
    }
    return up;
}

bool CutSystem::borders(int sheet, CutId cut) const {
    switch (cut) {
    case CutId::D1: return sheet == 1 || sheet == 2;
    case CutId::D2: return sheet == 1 || sheet == 3;
    case CutId::D3: return sheet == 2 || sheet == 3;
    }
    return false;
}

Regime classify_regime(const CurveParam& p, double tau_c, double tol) {
    if (std::abs(p.tau - tau_c) <= tol) return Regime::Boundary;
    return p.tau < tau_c ? Regime::Precritical : Regime::Supercritical;
}

int cross_cut(int sheet, CutId cut) {
    switch (cut) {
    case CutId::D1:
        if (sheet == 1) return 2;
        if (sheet == 2) return 1;
        break;
    case CutId::D2:
        if (sheet == 1) return 3;
        if (sheet == 3) return 1;
        break;
    case CutId::D3:
        if (sheet == 2) return 3;
        if (sheet == 3) return 2;
        break;
    }
    throw TopologyError("cross_cut: sheet " + std::to_string(sheet) + " does not border " +
                        cut_name(cut));
}

namespace {

struct PairRef {
    cplx k;
    bool set = false;
};

double condition_with(const CurveParam& p, const BranchPointSet& bp, double x, int m,
                      PairRef& ref) {
    SegmentTracks t = segment_tracks(p, bp.b2, cplx(x), m);
    int u = t.distinct_first;
    int i = (u + 1) % 3, j = (u + 2) % 3;
    cplx d = t.roots[1][i] - t.roots[1][j];
    cplx kappa = d / std::sqrt(t.nodes[1] - bp.b2);
    if (!ref.set) {
        ref.k = kappa;
        ref.set = true;
    }
    if ((kappa * std::conj(ref.k)).real() < 0.0) std::swap(i, j);
    return track_integral(t, i, j).real();
}

} // namespace

double a_star_condition(const CurveParam& p, double x, int m) {
    BranchPointSet bp = branch_points(p);
    PairRef ref;
    return condition_with(p, bp, x, m, ref);
}

double find_a_star_supercritical(const CurveParam& p, int m) {
    BranchPointSet bp = branch_points(p);
    PairRef ref;
    auto f = [&](double x) { return condition_with(p, bp, x, m, ref); };
    double fa = f(bp.a1), fb = f(bp.b1);
    if ((fa < 0.0) == (fb < 0.0))
        throw RegimeError("find_a_star_supercritical: no sign change on (a1, b1)");
    std::uintmax_t it = 200;
    auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-13; };
    auto res = boost::math::tools::toms748_solve(f, bp.a1, bp.b1, fa, fb, stop, it);
    return 0.5 * (res.first + res.second);
}

double find_a_star_from_trajectory(const std::vector<cplx>& delta2) {
    for (std::size_t k = 0; k + 1 < delta2.size(); ++k) {
        double y0 = delta2[k].imag(), y1 = delta2[k + 1].imag();
        if (y0 == 0.0) return delta2[k].real();
        if ((y0 < 0.0) != (y1 < 0.0)) {
            double t = y0 / (y0 - y1);
            return delta2[k].real() + t * (delta2[k + 1].real() - delta2[k].real());
        }
    }
    if (!delta2.empty() && delta2.back().imag() == 0.0) return delta2.back().real();
    throw GeometryError("find_a_star_from_trajectory: polyline does not cross the real axis");
}

CutSystem make_cut_system(const CurveParam& p, Regime regime, const std::vector<cplx>& upper,
                          double a_star) {
    CutSystem c;
    c.param = p;
    c.bp = branch_points(p);
    c.regime = regime;
    c.a_star = a_star;
    std::vector<cplx> up;
    up.push_back(cplx(a_star, 0.0));
    for (cplx z : upper)
        if (z.imag() > 0.0) up.push_back(z);
    if (std::abs(up.back() - c.bp.b2) > 0.0) up.push_back(c.bp.b2);
    for (auto it = up.rbegin(); it != up.rend(); ++it)
        if (it->imag() > 0.0) c.delta2.push_back(std::conj(*it));
    for (cplx z : up) c.delta2.push_back(z);
    if (regime == Regime::Supercritical) {
        c.delta1 = {a_star, c.bp.b1};
        c.delta3 = {c.bp.a1, a_star};
    } else {
        c.delta1 = {c.bp.a1, c.bp.b1};
        c.delta3 = {};
    }
    return c;
}

CutSystem provisional_cut_system(const CurveParam& p, Regime regime) {
    BranchPointSet bp = branch_points(p);
    double a_star = regime == Regime::Supercritical ? find_a_star_supercritical(p)
                                                    : bp.b2.real();
    CutSystem c = make_cut_system(p, regime, {bp.b2}, a_star);
    c.provisional = true;
    return c;
}

std::optional<double> segment_intersection(cplx p0, cplx p1, cplx q0, cplx q1) {
    cplx r = p1 - p0, s = q1 - q0;
    double den = r.real() * s.imag() - r.imag() * s.real();
    if (den == 0.0) return std::nullopt;
    cplx w = q0 - p0;
    double t = (w.real() * s.imag() - w.imag() * s.real()) / den;
    double u = (w.real() * r.imag() - w.imag() * r.real()) / den;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

namespace {

double polyline_distance(const std::vector<cplx>& pl, cplx z, std::size_t* seg = nullptr) {
    double best = 1e300;
    for (std::size_t k = 0; k + 1 < pl.size(); ++k) {
        cplx e = pl[k + 1] - pl[k];
        double n = std::norm(e);
        double t = n > 0.0 ? std::clamp(((z - pl[k]) * std::conj(e)).real() / n, 0.0, 1.0) : 0.0;
        double d = std::abs(pl[k] + t * e - z);
        if (d < best) {
            best = d;
            if (seg) *seg = k;
        }
    }
    return best;
}

bool path_clear(const std::vector<cplx>& path, const std::vector<cplx>& cut) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        for (std::size_t k = 0; k + 1 < cut.size(); ++k)
            if (segment_intersection(path[i], path[i + 1], cut[k], cut[k + 1])) return false;
    return true;
}

} // namespace

std::optional<CutId> cut_at(const CutSystem& cuts, cplx z, double snap_rel) {
    double tol = snap_rel * (1.0 + std::abs(z));
    if (std::abs(z.imag()) <= tol) {
        if (cuts.delta1.contains(z.real())) return CutId::D1;
        if (cuts.delta3.contains(z.real())) return CutId::D3;
    }
    if (!cuts.delta2.empty() && polyline_distance(cuts.delta2, z) <= tol) return CutId::D2;
    return std::nullopt;
}

XiTriple xi_labels(const CutSystem& cuts, cplx z, Side side, const SheetOptions& opt) {
    const CurveParam& p = cuts.param;
    const BranchPointSet& bp = cuts.bp;
    for (cplx b : {cplx(bp.a1), cplx(bp.b1), bp.a2, bp.b2})
        if (std::abs(z - b) <= opt.singular_radius * (1.0 + std::abs(b)))
            throw SingularPointError("xi_labels: point at a branch point");

    auto on = cut_at(cuts, z, opt.snap_rel);
    if (on && side == Side::Interior) throw DomainError("xi_labels: point on a cut needs a side");
    if (!on) side = Side::Interior;

    bool real_cut = on && (*on == CutId::D1 || *on == CutId::D3) && z.imag() == 0.0;
    if (z.imag() < 0.0 || (real_cut && side == Side::Minus)) {
        Side s = real_cut ? Side::Plus : side;
        XiTriple t = xi_labels(cuts, std::conj(z), s, opt);
        for (auto& x : t) x = std::conj(x);
        return t;
    }

    double scale = 1.0 + std::abs(z);
    cplx start = z;
    if (on && *on == CutId::D2 && !real_cut) {
        std::size_t k = 0;
        polyline_distance(cuts.delta2, z, &k);
        cplx t = cuts.delta2[k + 1] - cuts.delta2[k];
        t /= std::abs(t);
        cplx n = cplx(0.0, 1.0) * t;
        start = z + (side == Side::Plus ? 1.0 : -1.0) * 1e-7 * scale * n;
    } else if (z.imag() == 0.0) {
        start = z + cplx(0.0, 1e-7 * scale);
    }

    double H = std::max(far_radius(bp), start.imag() + 1.0);
    double xr = start.real(), xl = start.real();
    for (cplx w : cuts.delta2) {
        xr = std::max(xr, w.real());
        xl = std::min(xl, w.real());
    }
    xr += 1.0;
    xl -= 1.0;
    std::vector<std::vector<cplx>> candidates = {
        {start, cplx(start.real(), H)},
        {start, cplx(xl, start.imag()), cplx(xl, H)},
        {start, cplx(xr, start.imag()), cplx(xr, H)},
    };
    const std::vector<cplx>* path = nullptr;
    for (const auto& c : candidates) {
        if (path_clear(c, cuts.delta2)) {
            path = &c;
            break;
        }
    }
    if (!path) throw GeometryError("xi_labels: no cut-free continuation path");

    cplx far = path->back();
    XiTriple t = label_at_infinity(p, far, solve_xi_unlabeled(p, far));
    for (std::size_t i = path->size() - 1; i > 0; --i)
        t = continue_to(p, (*path)[i], t, (*path)[i - 1]);
    if (start != z) t = continue_to(p, start, t, z);
    return t;
}

cplx xi_on_sheet(const CutSystem& cuts, const SheetPoint& sp, const SheetOptions& opt) {
    if (sp.sheet < 1 || sp.sheet > 3) throw DomainError("xi_on_sheet: sheet must be 1..3");
    return xi_labels(cuts, sp.z, sp.side, opt)[sp.sheet - 1];
}

} // namespace cubicvm
