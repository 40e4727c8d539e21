#include "cubicvm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cubicvm {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I1(0.0, 1.0);

// 8-point Gauss-Legendre on [0,1]
constexpr std::array<double, 8> kGx = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                       0.4082826787521751,   0.5917173212478249,  0.7627662049581645,
                                       0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kGw = {0.050614268145188129, 0.11119051722668724, 0.15685332293894364,
                                       0.18134189168918099,  0.18134189168918099, 0.15685332293894364,
                                       0.11119051722668724,  0.050614268145188129};

int nearest(const XiTriple& t, cplx v) {
    int b = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(t[j] - v) < std::abs(t[b] - v)) b = j;
    return b;
}

double ulogu(double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)); }

// centroid offset and mass of a power-law end piece rho(x1) (d/L)^(-nu) on [0, L]
struct EndPiece {
    cplx at;
    double mass;
};

EndPiece end_piece(cplx end, cplx next, double rho_next, double nu) {
    double L = std::abs(next - end);
    return {end + (next - end) * ((1.0 - nu) / (2.0 - nu)), rho_next * L / (1.0 - nu)};
}

// linear pieces near a blow-up end carry the mass of the power law through their end values
void power_scale(cplx end, cplx near, cplx far, double& r_near, double& r_far) {
    double s0 = std::abs(near - end), s1 = std::abs(far - end);
    if (!(r_near > 0.0) || !(r_far > 0.0) || s0 <= 0.0 || s1 <= s0) return;
    double p = std::log(r_far / r_near) / std::log(s1 / s0);
    if (std::abs(p + 1.0) < 1e-6) return;
    double exact = r_near * s0 / (p + 1.0) * (std::pow(s1 / s0, p + 1.0) - 1.0);
    double lin = 0.5 * (r_near + r_far) * (s1 - s0);
    r_near *= exact / lin;
    r_far *= exact / lin;
}

template <class SegFn, class PointFn>
void for_each_piece(const MeasureComponent& m, SegFn seg, PointFn point) {
    for (const Arc& a : m.arcs) {
        std::size_t n = a.z.size();
        if (n < 2) continue;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (k == 0 && a.nu_first != 0.0) {
                auto e = end_piece(a.z[0], a.z[1], a.rho[1], a.nu_first);
                point(e.at, e.mass);
                continue;
            }
            if (k + 2 == n && a.nu_last != 0.0) {
                auto e = end_piece(a.z[n - 1], a.z[n - 2], a.rho[n - 2], a.nu_last);
                point(e.at, e.mass);
                continue;
            }
            double r0 = a.rho[k], r1 = a.rho[k + 1];
            if (k < n / 2 && a.nu_first > 0.1) power_scale(a.z[0], a.z[k], a.z[k + 1], r0, r1);
            else if (k >= n / 2 && a.nu_last > 0.1) power_scale(a.z[n - 1], a.z[k + 1], a.z[k], r1, r0);
            seg(a.z[k], a.z[k + 1], r0, r1);
        }
    }
}

std::vector<double> cheb_unit(int n) {
    std::vector<double> u(n + 1);
    for (int k = 0; k <= n; ++k) u[k] = 0.5 * (1.0 - std::cos(kPi * k / n));
    u[0] = 0.0;
    u[n] = 1.0;
    return u;
}

// positions at arc-length fractions u along a polyline
std::vector<cplx> resample(const std::vector<cplx>& pl, const std::vector<double>& u) {
    std::vector<double> s(pl.size(), 0.0);
    for (std::size_t k = 1; k < pl.size(); ++k) s[k] = s[k - 1] + std::abs(pl[k] - pl[k - 1]);
    double L = s.back();
    std::vector<cplx> out;
    out.reserve(u.size());
    std::size_t seg = 0;
    for (double f : u) {
        double t = f * L;
        while (seg + 2 < pl.size() && s[seg + 1] < t) ++seg;
        double len = s[seg + 1] - s[seg];
        double r = len > 0.0 ? std::clamp((t - s[seg]) / len, 0.0, 1.0) : 0.0;
        out.push_back(pl[seg] + r * (pl[seg + 1] - pl[seg]));
    }
    out.front() = pl.front();
    out.back() = pl.back();
    return out;
}

void fill_exponents(MeasureComponent& m) {
    m.endpoint_exponents.clear();
    for (const Arc& a : m.arcs) {
        if (a.z.size() < 40) continue;
        m.endpoint_exponents.push_back(fit_exponent(a.z, a.rho, a.z.front()));
        m.endpoint_exponents.push_back(fit_exponent(a.z, a.rho, a.z.back()));
    }
}

// roots continued along nodes from the anchor node, with labels fixed at the anchor
std::vector<XiTriple> continue_from_anchor(const CurveParam& p, const std::vector<cplx>& z,
                                           std::size_t anchor, const XiTriple& at_anchor) {
    std::vector<XiTriple> t(z.size());
    t[anchor] = at_anchor;
    for (std::size_t k = anchor + 1; k < z.size(); ++k) t[k] = continue_to(p, z[k - 1], t[k - 1], z[k]);
    for (std::size_t k = anchor; k-- > 0;) t[k] = continue_to(p, z[k + 1], t[k + 1], z[k]);
    return t;
}

XiTriple labelled_at(const CutSystem& cuts, cplx z, Side side) {
    XiTriple lab = xi_labels(cuts, z, side);
    XiTriple raw = solve_xi_unlabeled(cuts.param, z);
    XiTriple out;
    for (int j = 0; j < 3; ++j) out[j] = raw[nearest(raw, lab[j])];
    return out;
}

// boundary-value pair (plus-side labels) whose difference carries component k
std::pair<int, int> pair_of(int component) {
    switch (component) {
    case 1: return {0, 1};
    case 2: return {0, 2};
    case 3: return {2, 1};
    }
    throw DomainError("component must be 1..3");
}

Arc real_arc(const CutSystem& cuts, int component, Interval iv, int nodes, bool lo_branch,
             bool hi_branch, double& resid) {
    Arc a;
    auto u = cheb_unit(nodes);
    for (double f : u) a.z.push_back(cplx(iv.lo + (iv.hi - iv.lo) * f, 0.0));
    std::size_t anchor = a.z.size() / 2;
    auto tracks = continue_from_anchor(cuts.param, a.z, anchor,
                                       labelled_at(cuts, a.z[anchor], Side::Plus));
    auto [i, j] = pair_of(component);
    a.rho.resize(a.z.size());
    for (std::size_t k = 0; k < a.z.size(); ++k) {
        cplx d = (tracks[k][i] - tracks[k][j]) / (2.0 * kPi * I1);
        a.rho[k] = d.real();
        resid = std::max(resid, std::abs(d.imag()));
    }
    if (lo_branch) a.rho.front() = 0.0;
    if (hi_branch) a.rho.back() = 0.0;
    return a;
}

} // namespace

Supports compute_supports(const CutSystem& cuts) {
    Supports s;
    s.regime = cuts.regime == Regime::Boundary ? Regime::Precritical : cuts.regime;
    const auto& bp = cuts.bp;
    if (s.regime == Regime::Supercritical) {
        if (!(cuts.a_star > bp.a1 && cuts.a_star < bp.b1))
            throw ConsistencyError("compute_supports: a_star outside (a1, b1) for supercritical cuts");
        s.s1 = {cuts.a_star, bp.b1};
        s.s3 = {bp.a1, cuts.a_star};
    } else {
        if (!(cuts.a_star <= bp.a1))
            throw ConsistencyError("compute_supports: a_star inside (a1, b1) for precritical cuts");
        s.s1 = {bp.a1, bp.b1};
        s.s3 = {};
    }
    s.s2_upper = cuts.delta2_upper();
    return s;
}

cplx density_complex(const CutSystem& cuts, int component, cplx s) {
    auto [i, j] = pair_of(component);
    if (component == 2) {
        const auto& pl = cuts.delta2;
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t k = 0; k + 1 < pl.size(); ++k) {
            cplx e = pl[k + 1] - pl[k];
            double n = std::norm(e);
            double t = n > 0.0 ? std::clamp(((s - pl[k]) * std::conj(e)).real() / n, 0.0, 1.0) : 0.0;
            double d = std::abs(pl[k] + t * e - s);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        if (bd > 1e-9 * (1.0 + std::abs(s))) throw DomainError("density: point off supp mu2");
        for (cplx b : {cuts.bp.a2, cuts.bp.b2})
            if (std::abs(s - b) < 1e-12) throw DomainError("density: endpoint of supp mu2");
        cplx th = pl[best + 1] - pl[best];
        th /= std::abs(th);
        XiTriple x = xi_labels(cuts, s, Side::Plus);
        return (x[i] - x[j]) * th / (2.0 * kPi * I1);
    }
    Supports sup = compute_supports(cuts);
    Interval iv = component == 1 ? sup.s1 : sup.s3;
    if (iv.empty() || std::abs(s.imag()) > 0.0 || !(s.real() > iv.lo && s.real() < iv.hi))
        throw DomainError("density: point off the support interior");
    XiTriple x = xi_labels(cuts, s, Side::Plus);
    return (x[i] - x[j]) / (2.0 * kPi * I1);
}

double density(const CutSystem& cuts, int component, cplx s) {
    return density_complex(cuts, component, s).real();
}

FamilyMeasure family_measure(const CutSystem& cuts, int nodes) {
    if (nodes < 50) throw DomainError("family_measure: too few nodes");
    FamilyMeasure fm;
    fm.cuts = cuts;
    Supports sup = compute_supports(cuts);
    bool super = sup.regime == Regime::Supercritical;

    for (int k = 0; k < 3; ++k) fm.mu[k].index = k + 1;

    if (!sup.s1.empty() && sup.s1.hi - sup.s1.lo > 1e-12) {
        double r = 0.0;
        fm.mu[0].arcs.push_back(real_arc(cuts, 1, sup.s1, nodes, !super, true, r));
        fm.mu[0].max_imag_residual = r;
    }
    if (super) {
        double r = 0.0;
        fm.mu[2].arcs.push_back(real_arc(cuts, 3, sup.s3, nodes, true, false, r));
        fm.mu[2].max_imag_residual = r;
    }

    // upper arc a_star -> b2, graded towards both ends
    Arc up;
    up.z = resample(sup.s2_upper, cheb_unit(nodes));
    std::size_t anchor = up.z.size() / 2;
    auto tracks = continue_from_anchor(cuts.param, up.z, anchor,
                                       labelled_at(cuts, up.z[anchor], Side::Plus));
    up.rho.resize(up.z.size());
    double resid = 0.0;
    for (std::size_t k = 0; k < up.z.size(); ++k) {
        std::size_t k0 = k == 0 ? 0 : k - 1, k1 = std::min(k + 1, up.z.size() - 1);
        cplx th = up.z[k1] - up.z[k0];
        th /= std::abs(th);
        cplx d = (tracks[k][0] - tracks[k][2]) * th / (2.0 * kPi * I1);
        up.rho[k] = d.real();
        if (k > 0 && k + 1 < up.z.size()) resid = std::max(resid, std::abs(d.imag()));
    }
    up.rho.back() = 0.0;
    Arc low = up;
    for (auto& z : low.z) z = std::conj(z);
    fm.mu[1].arcs.push_back(up);
    fm.mu[1].arcs.push_back(low);
    fm.mu[1].max_imag_residual = resid;

    for (auto& m : fm.mu) {
        m.mass = mass_of(m);
        fill_exponents(m);
    }
    return fm;
}

Masses masses(const FamilyMeasure& fm) {
    Masses r;
    r.m1 = fm.mu[0].mass;
    r.m2 = fm.mu[1].mass;
    r.m3 = fm.mu[2].mass;
    r.alpha_recovered = r.m1 + r.m3;
    return r;
}

cplx integrate(const MeasureComponent& m, const std::function<cplx(cplx)>& f) {
    cplx s = 0.0;
    MeasureComponent rest;
    for (const Arc& a : m.arcs) {
        if (a.w.empty()) {
            rest.arcs.push_back(a);
            continue;
        }
        for (std::size_t k = 0; k < a.z.size(); ++k)
            if (a.w[k] != 0.0) s += a.w[k] * a.rho[k] * f(a.z[k]);
    }
    for_each_piece(
        rest,
        [&](cplx z0, cplx z1, double r0, double r1) {
            s += 0.5 * std::abs(z1 - z0) * (r0 * f(z0) + r1 * f(z1));
        },
        [&](cplx at, double mass) { s += mass * f(at); });
    return s;
}

double mass_of(const MeasureComponent& m) {
    return integrate(m, [](cplx) { return cplx(1.0); }).real();
}

cplx moment(const MeasureComponent& m, int k) {
    return integrate(m, [k](cplx x) { return std::pow(x, k); });
}

double support_distance(const MeasureComponent& m, cplx z) {
    double d = 1e300;
    for (const Arc& a : m.arcs)
        for (cplx x : a.z) d = std::min(d, std::abs(x - z));
    return d;
}

cplx cauchy_transform(const MeasureComponent& m, cplx z) {
    cplx s = 0.0;
    for_each_piece(
        m,
        [&](cplx z0, cplx z1, double r0, double r1) {
            cplx d = z1 - z0;
            double L = std::abs(d);
            if (L == 0.0) return;
            cplx w = (z - z0) / d;
            if (std::abs(w - 0.5) > 2.5) {
                cplx acc = 0.0;
                for (int g = 0; g < 8; ++g) {
                    double t = kGx[g];
                    acc += kGw[g] * (r0 + t * (r1 - r0)) / (z0 + t * d - z);
                }
                s += acc * L;
                return;
            }
            double a = r0, b = r1 - r0;
            cplx lg = std::log((1.0 - w) / (-w));
            s += (L / d) * (b + (a + b * w) * lg);
        },
        [&](cplx at, double mass) { s += mass / (at - z); });
    return s;
}

double log_potential(const MeasureComponent& m, cplx z) {
    double s = 0.0;
    for_each_piece(
        m,
        [&](cplx z0, cplx z1, double r0, double r1) {
            cplx d = z1 - z0;
            double L = std::abs(d);
            if (L == 0.0) return;
            cplx w = (z - z0) / d;
            if (std::abs(w - 0.5) > 2.5) {
                double acc = 0.0;
                for (int g = 0; g < 8; ++g) {
                    double t = kGx[g];
                    acc += kGw[g] * (r0 + t * (r1 - r0)) * std::log(std::abs(z0 + t * d - z));
                }
                s -= acc * L;
                return;
            }
            double a = r0, b = r1 - r0;
            double I0, I1v;
            if (std::abs(w.imag()) <= 1e-13 * (1.0 + std::abs(w))) {
                double x = w.real();
                auto F0 = [](double u) { return ulogu(u) - u; };
                auto F1 = [x](double u) {
                    double l = u == 0.0 ? 0.0 : std::log(std::abs(u));
                    return 0.5 * u * u * l - 0.25 * u * u + x * (ulogu(u) - u);
                };
                I0 = F0(1.0 - x) - F0(-x);
                I1v = F1(1.0 - x) - F1(-x);
            } else {
                cplx um = 0.5 - w;
                cplx lm = std::log(um);
                auto lg = [&](cplx u) { return std::log(u / um) + lm; };
                auto F0 = [&](cplx u) { return u * lg(u) - u; };
                auto F1 = [&](cplx u) { return 0.5 * u * u * lg(u) - 0.25 * u * u + w * (u * lg(u) - u); };
                I0 = (F0(1.0 - w) - F0(-w)).real();
                I1v = (F1(1.0 - w) - F1(-w)).real();
            }
            s -= L * ((a + 0.5 * b) * std::log(L) + a * I0 + b * I1v);
        },
        [&](cplx at, double mass) { s -= mass * std::log(std::abs(at - z)); });
    return s;
}

double fit_exponent(const std::vector<cplx>& z, const std::vector<double>& rho, cplx end, int skip,
                    int take) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < z.size(); ++k) {
        double d = std::abs(z[k] - end);
        if (d > 0.0 && rho[k] > 0.0 && std::isfinite(rho[k])) pts.emplace_back(d, rho[k]);
    }
    std::sort(pts.begin(), pts.end());
    if (int(pts.size()) < skip + take) throw QuadratureError("fit_exponent: too few samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = skip; k < skip + take; ++k) {
        double x = std::log(pts[k].first), y = std::log(pts[k].second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = take;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeasureComponent sample_real_measure(int index, const RealDensitySpec& spec, int nodes) {
    MeasureComponent m;
    m.index = index;
    Arc a;
    bool graded = spec.nu_lo != 0.0 || spec.nu_hi != 0.0;
    // fraction of the way from the nearer end, kept exact near both ends
    auto frac = [&](int k) {
        if (!graded) return std::pow(std::sin(0.5 * kPi * k / nodes), 2);
        double f = double(k) / nodes, g = 1.0 - f;
        double p = f * f * f, q = g * g * g;
        return p / (p + q);
    };
    for (int k = 0; k <= nodes; ++k) {
        double x = 2 * k <= nodes ? spec.lo + (spec.hi - spec.lo) * frac(k)
                                  : spec.hi - (spec.hi - spec.lo) * frac(nodes - k);
        a.z.push_back(cplx(x, 0.0));
    }
    a.rho.resize(a.z.size());
    for (std::size_t k = 0; k < a.z.size(); ++k) {
        bool sing = (k == 0 && spec.nu_lo != 0.0) || (k + 1 == a.z.size() && spec.nu_hi != 0.0);
        a.rho[k] = sing ? 0.0 : spec.rho(a.z[k].real());
    }
    a.nu_first = spec.nu_lo;
    a.nu_last = spec.nu_hi;
    if (graded) {
        // trapezoid in the grading variable v, x = lo + (hi-lo) g(v), g = v^3/(v^3+(1-v)^3)
        double h = 1.0 / nodes;
        a.w.assign(a.z.size(), 0.0);
        for (int k = 0; k <= nodes; ++k) {
            double v = double(k) / nodes, u = 1.0 - v;
            double den = v * v * v + u * u * u;
            double dg = 3.0 * v * v * u * u / (den * den);
            a.w[k] = (k == 0 || k == nodes ? 0.5 : 1.0) * h * (spec.hi - spec.lo) * dg;
        }
        // a singular end contributes the limit of rho dx/dv, finite only for nu = 2/3
        auto end_limit = [&](double nu, std::size_t end, std::size_t next) {
            if (nu == 0.0) return;
            double e = 2.0 - 3.0 * nu;
            if (e < -1e-12) throw QuadratureError("sample_real_measure: end singularity too strong");
            a.w[end] = 0.0;
            if (e < 1e-12) a.w[next] += 0.5 * h * (spec.hi - spec.lo) * 3.0 / nodes / nodes;
        };
        end_limit(spec.nu_lo, 0, 1);
        end_limit(spec.nu_hi, a.z.size() - 1, a.z.size() - 2);
    }
    m.arcs.push_back(a);
    m.mass = mass_of(m);
    std::vector<cplx> zs(a.z.begin() + (spec.nu_lo != 0.0), a.z.end() - (spec.nu_hi != 0.0));
    std::vector<double> rs(a.rho.begin() + (spec.nu_lo != 0.0), a.rho.end() - (spec.nu_hi != 0.0));
    m.endpoint_exponents = {fit_exponent(zs, rs, a.z.front()), fit_exponent(zs, rs, a.z.back())};
    return m;
}

namespace {

double pair_density(cplx R, cplx D) {
    XiTriple r = solve_cubic(R, D);
    double im = 0.0;
    for (cplx x : r) im = std::max(im, std::abs(x.imag()));
    return im / kPi;
}

// labels by expansion at infinity, continued radially inwards
std::function<std::array<cplx, 3>(cplx)> radial_labels(std::function<cplx(cplx)> R,
                                                       std::function<cplx(cplx)> D,
                                                       std::function<std::array<cplx, 3>(cplx)> asym) {
    return [R, D, asym](cplx z) {
        if (z == 0.0) throw DomainError("fixture labels: z = 0");
        cplx far = z / std::abs(z) * std::max(1e3, 10.0 * std::abs(z));
        XiTriple t = solve_cubic(R(far), D(far));
        auto a = asym(far);
        XiTriple lab;
        for (int j = 0; j < 3; ++j) lab[j] = t[nearest(t, a[j])];
        const int n = 4000;
        cplx prev = far;
        for (int k = 1; k <= n; ++k) {
            double s = double(k) / n;
            cplx zk = far * std::pow(std::abs(z) / std::abs(far), s);
            XiTriple nx = solve_cubic(R(zk), D(zk));
            XiTriple m;
            for (int j = 0; j < 3; ++j) m[j] = nx[nearest(nx, lab[j])];
            lab = m;
            prev = zk;
        }
        (void)prev;
        return lab;
    };
}

} // namespace

Fixture example_fixture(FixtureName name, int nodes) {
    Fixture f;
    const double e = 1.5 * std::sqrt(3.0);
    switch (name) {
    case FixtureName::Angelesco: {
        f.name = "angelesco";
        f.branch_points = {cplx(-e), cplx(e)};
        auto rho = [](double x) { return pair_density(1.0, -1.0 / x); };
        f.measures.push_back(sample_real_measure(1, {-e, 0.0, rho, 0.0, 1.0 / 3.0}, nodes));
        f.measures.push_back(sample_real_measure(2, {0.0, e, rho, 1.0 / 3.0, 0.0}, nodes));
        f.xi = radial_labels([](cplx) { return cplx(1.0); }, [](cplx z) { return -1.0 / z; },
                             [](cplx z) {
                                 return std::array<cplx, 3>{-1.0 / z, 1.0 + 0.5 / z, -1.0 + 0.5 / z};
                             });
        f.blowup_exponent = -f.measures[1].endpoint_exponents[0];
        break;
    }
    case FixtureName::Nikishin: {
        f.name = "nikishin";
        f.branch_points = {cplx(-e), cplx(e)};
        auto rho = [](double x) { return pair_density(1.0 / 3.0, -1.0 / (x * x) + 2.0 / 27.0); };
        f.measures.push_back(sample_real_measure(2, {0.0, e, rho, 2.0 / 3.0, 0.0}, nodes));
        f.measures.push_back(sample_real_measure(3, {-e, 0.0, rho, 0.0, 2.0 / 3.0}, nodes));
        f.xi = radial_labels([](cplx) { return cplx(1.0 / 3.0); },
                             [](cplx z) { return -1.0 / (z * z) + 2.0 / 27.0; },
                             [](cplx z) {
                                 return std::array<cplx, 3>{1.0 / 3.0 - 1.0 / z, 1.0 / 3.0 + 1.0 / z,
                                                            -2.0 / 3.0};
                             });
        f.blowup_exponent = -f.measures[0].endpoint_exponents[0];
        break;
    }
    case FixtureName::ScalarReduced: {
        f.name = "scalar_reduced";
        const double r = std::sqrt(2.0);
        f.branch_points = {cplx(-r), cplx(r)};
        auto rho = [](double x) { return pair_density(x * x - 2.0, 0.0); };
        f.measures.push_back(sample_real_measure(2, {-r, r, rho, 0.0, 0.0}, nodes));
        f.xi = radial_labels([](cplx z) { return z * z - 2.0; }, [](cplx) { return cplx(0.0); },
                             [](cplx z) {
                                 return std::array<cplx, 3>{z - 1.0 / z, cplx(0.0), -z + 1.0 / z};
                             });
        f.blowup_exponent = -f.measures[0].endpoint_exponents[0];
        break;
    }
    }
    for (const auto& m : f.measures) f.masses.push_back(m.mass);
    return f;
}

} // namespace cubicvm
