#include "cubicvm/variational.hpp"

#include <algorithm>
#include <cmath>

#include "cubicvm/tracer.hpp"

namespace cubicvm {

InteractionStructure InteractionStructure::standard() {
    InteractionStructure s;
    s.A << 1.0, 0.5, 0.5, 0.5, 1.0, -0.5, 0.5, -0.5, 1.0;
    s.B << 1.0, 1.0, 0.0, -1.0, 0.0, -1.0, 0.0, -1.0, 1.0;
    s.b << 1.0, -1.0, -1.0;
    return s;
}

InteractionCheck check_interaction() {
    const int A2[3][3] = {{2, 1, 1}, {1, 2, -1}, {1, -1, 2}};
    const int B[3][3] = {{1, 1, 0}, {-1, 0, -1}, {0, -1, 1}};
    const int b[3] = {1, -1, -1};
    InteractionCheck c;
    c.twoA_is_BtB = c.twoA_is_3I_minus_bbt = c.A_b_zero = c.eigenspace_3_2 = true;
    for (int i = 0; i < 3; ++i) {
        int ab = 0;
        for (int j = 0; j < 3; ++j) {
            int btb = 0;
            for (int k = 0; k < 3; ++k) btb += B[k][i] * B[k][j];
            if (btb != A2[i][j]) c.twoA_is_BtB = false;
            if ((i == j ? 3 : 0) - b[i] * b[j] != A2[i][j]) c.twoA_is_3I_minus_bbt = false;
            ab += A2[i][j] * b[j];
        }
        if (ab != 0) c.A_b_zero = false;
    }
    // basis of v1 - v2 - v3 = 0: (1,1,0), (1,0,1); 2A v = 3 v
    const int basis[2][3] = {{1, 1, 0}, {1, 0, 1}};
    for (const auto& v : basis)
        for (int i = 0; i < 3; ++i) {
            int s = 0;
            for (int j = 0; j < 3; ++j) s += A2[i][j] * v[j];
            if (s != 3 * v[i]) c.eigenspace_3_2 = false;
        }
    // and the matrix stored in doubles is the same one
    InteractionStructure st = InteractionStructure::standard();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (2.0 * st.A(i, j) != A2[i][j] || st.B(i, j) != B[i][j]) c.twoA_is_BtB = false;
    return c;
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(double(k) * p[k]);
    return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

cplx poly_eval(const Poly& p, cplx z) {
    cplx s = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * z + p[k];
    return s;
}

bool ExternalField::compatible(double tol) const {
    Poly d1 = poly_derivative(Phi[0]), d2 = poly_derivative(Phi[1]), d3 = poly_derivative(Phi[2]);
    std::size_t n = std::max({d1.size(), d2.size(), d3.size()});
    d1.resize(n, 0.0);
    d2.resize(n, 0.0);
    d3.resize(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(d1[k] - d2[k] - d3[k]) > tol) return false;
    return true;
}

cplx ExternalField::dPhi(int j, cplx z) const { return poly_eval(poly_derivative(Phi[j]), z); }
double ExternalField::phi(int j, cplx z) const { return poly_eval(Phi[j], z).real(); }

ExternalField ExternalField::cubic() {
    ExternalField f;
    f.Phi = {Poly{0.0, 0.0, 0.0, 1.0}, Poly{0.0, 0.0, 0.0, 1.0}, Poly{}};
    return f;
}
ExternalField ExternalField::angelesco() {
    ExternalField f;
    f.Phi = {Poly{0.0, -1.0}, Poly{0.0, 1.0}, Poly{0.0, -2.0}};
    return f;
}
ExternalField ExternalField::nikishin() {
    ExternalField f;
    f.Phi = {Poly{}, Poly{0.0, 1.0}, Poly{0.0, -1.0}};
    return f;
}
ExternalField ExternalField::zero() { return ExternalField{}; }

double energy(const std::array<PointMeasure, 3>& mu, const ExternalField& field,
              const InteractionStructure& s) {
    double e = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (mu[j].z.size() != mu[j].w.size()) throw DomainError("energy: weights and points differ");
        for (int k = 0; k < 3; ++k) {
            double a = s.A(j, k);
            if (a == 0.0) continue;
            for (std::size_t p = 0; p < mu[j].z.size(); ++p)
                for (std::size_t q = 0; q < mu[k].z.size(); ++q) {
                    if (j == k && p == q) continue;
                    double d = std::abs(mu[j].z[p] - mu[k].z[q]);
                    if (d == 0.0) {
                        if (a > 0.0 && mu[j].w[p] * mu[k].w[q] != 0.0)
                            throw InfiniteEnergyError("energy: coincident charges");
                        continue;
                    }
                    e += a * mu[j].w[p] * mu[k].w[q] * -std::log(d);
                }
        }
        for (std::size_t p = 0; p < mu[j].z.size(); ++p) e += mu[j].w[p] * field.phi(j, mu[j].z[p]);
    }
    return e;
}

double energy(const VectorMeasure& mu, const ExternalField& field, const InteractionStructure& s) {
    double e = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (mu[j].empty()) continue;
        for (int k = 0; k < 3; ++k) {
            if (mu[k].empty() || s.A(j, k) == 0.0) continue;
            const MeasureComponent& mk = mu[k];
            e += s.A(j, k) * integrate(mu[j], [&](cplx x) { return cplx(log_potential(mk, x)); }).real();
        }
        e += integrate(mu[j], [&](cplx x) { return cplx(field.phi(j, x)); }).real();
    }
    return e;
}

Poly q_poly(const MeasureComponent& m, const Poly& dPhi) {
    if (m.empty() || dPhi.size() < 2) return {};
    // (x^n - z^n)/(x - z) = sum_i x^i z^(n-1-i)
    std::size_t deg = dPhi.size() - 1;
    std::vector<cplx> mom(deg);
    for (std::size_t i = 0; i < deg; ++i) mom[i] = moment(m, int(i));
    Poly q(deg, 0.0);
    for (std::size_t n = 1; n <= deg; ++n)
        for (std::size_t i = 0; i < n; ++i) q[n - 1 - i] -= dPhi[n] * mom[i];
    return q;
}

cplx variation_Dhz(const VectorMeasure& mu, const ExternalField& field, cplx z) {
    std::array<cplx, 3> C{};
    for (int j = 0; j < 3; ++j) {
        if (mu[j].empty()) continue;
        if (support_distance(mu[j], z) < 1e-12) throw DomainError("variation_Dhz: z on a support");
        C[j] = cauchy_transform(mu[j], z);
    }
    InteractionStructure s = InteractionStructure::standard();
    cplx d = 0.0;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) d += s.A(j, k) * C[j] * C[k];
        d += field.dPhi(j, z) * C[j];
        d -= poly_eval(q_poly(mu[j], poly_derivative(field.Phi[j])), z);
    }
    return d;
}

Poly r_from_fields(const VectorMeasure& mu, const ExternalField& field) {
    InteractionStructure s = InteractionStructure::standard();
    std::array<Poly, 3> d;
    for (int j = 0; j < 3; ++j) d[j] = poly_derivative(field.Phi[j]);
    Poly r;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            Poly t = poly_mul(d[j], d[k]);
            for (auto& c : t) c *= s.A(j, k) / 9.0;
            r = poly_add(r, t);
        }
    for (int j = 0; j < 3; ++j) r = poly_add(r, q_poly(mu[j], d[j]));
    while (!r.empty() && std::abs(r.back()) < 1e-15) r.pop_back();
    return r;
}

std::array<cplx, 3> xi_from_measures(const VectorMeasure& mu, const ExternalField& field, cplx z) {
    std::array<cplx, 3> C{};
    for (int j = 0; j < 3; ++j)
        if (!mu[j].empty()) C[j] = cauchy_transform(mu[j], z);
    cplx p1 = field.dPhi(0, z), p2 = field.dPhi(1, z), p3 = field.dPhi(2, z);
    return {(p1 + p2) / 3.0 + C[0] + C[1], -(p1 + p3) / 3.0 - C[0] - C[2],
            -(p2 - p3) / 3.0 - C[1] + C[2]};
}

bool EquilibriumReport::ok(double tol) const {
    bool good = dev1 < tol && dev2 < tol && margin1 > 0.0 && margin2 > 0.0 && margin3 > 0.0;
    if (supercritical) good = good && dev3 < tol && l3_defect < tol;
    else good = good && margin_astar > 0.0;
    return good;
}

namespace {

std::vector<cplx> interior_nodes(const Arc& a, int samples, double trim) {
    std::vector<double> s(a.z.size(), 0.0);
    for (std::size_t k = 1; k < a.z.size(); ++k) s[k] = s[k - 1] + std::abs(a.z[k] - a.z[k - 1]);
    double L = s.back();
    std::vector<cplx> out;
    std::size_t k = 0;
    for (int i = 0; i < samples; ++i) {
        double target = L * (trim + (1.0 - 2.0 * trim) * i / (samples - 1));
        while (k + 1 < s.size() && s[k + 1] <= target) ++k;
        std::size_t pick = (k + 1 < s.size() && s[k + 1] - target < target - s[k]) ? k + 1 : k;
        if (out.empty() || out.back() != a.z[pick]) out.push_back(a.z[pick]);
    }
    return out;
}

} // namespace

EquilibriumReport verify_equilibrium(const FamilyMeasure& fm, const EquilibriumOptions& opt) {
    EquilibriumReport r;
    const VectorMeasure& mu = fm.mu;
    const CutSystem& cuts = fm.cuts;
    r.supercritical = !mu[2].empty();
    auto U = [&](int j, cplx z) { return mu[j].empty() ? 0.0 : log_potential(mu[j], z); };
    auto phi = [](cplx z) { return (z * z * z).real(); };
    auto E1 = [&](cplx z) { return 2.0 * U(0, z) + U(1, z) + U(2, z) + phi(z); };
    auto E2 = [&](cplx z) { return 2.0 * U(1, z) + U(0, z) - U(2, z) + phi(z); };
    auto E3 = [&](cplx z) { return 2.0 * U(2, z) + U(0, z) - U(1, z); };

    auto mean_dev = [&](const std::vector<cplx>& pts, auto f, double& mean, double& dev) {
        std::vector<double> v;
        for (cplx z : pts) v.push_back(f(z));
        mean = 0.0;
        for (double x : v) mean += x;
        mean /= double(v.size());
        dev = 0.0;
        for (double x : v) dev = std::max(dev, std::abs(x - mean));
    };

    mean_dev(interior_nodes(mu[0].arcs[0], opt.samples, opt.trim), E1, r.l1, r.dev1);
    mean_dev(interior_nodes(mu[1].arcs[0], opt.samples, opt.trim), E2, r.l2, r.dev2);
    r.l3 = r.l1 - r.l2;
    if (r.supercritical) {
        mean_dev(interior_nodes(mu[2].arcs[0], opt.samples, opt.trim), E3, r.l3_tilde, r.dev3);
        r.l3_defect = std::abs(r.l3_tilde - r.l3);
    }

    const auto& bp = cuts.bp;
    r.margin1 = 1e300;
    for (int i = 1; i <= 30; ++i) r.margin1 = std::min(r.margin1, E1(bp.b1 + 0.1 * i) - r.l1);
    if (!r.supercritical && bp.a1 - cuts.a_star > 1e-6)
        for (int i = 1; i < 10; ++i)
            r.margin1 = std::min(r.margin1, E1(cuts.a_star + (bp.a1 - cuts.a_star) * i / 10.0) - r.l1);

    r.margin2 = 1e300;
    TraceConfig tc;
    OrthogonalExtension ext = orthogonal_extension(cuts, tc);
    int used = 0;
    const auto& pts = ext.gamma1.points;
    std::size_t stride = std::max<std::size_t>(1, pts.size() / 200);
    for (std::size_t k = 0; k < pts.size(); k += stride) {
        cplx z = pts[k].z;
        if (std::abs(z - bp.b2) < 0.05 || std::abs(z) > 6.0) continue;
        r.margin2 = std::min(r.margin2, E2(z) - r.l2);
        ++used;
    }
    if (!used) r.failures.push_back("no usable points on the orthogonal extension");

    double left = std::min(bp.a1, cuts.a_star);
    r.margin3 = 1e300;
    for (int i = 1; i <= 30; ++i) r.margin3 = std::min(r.margin3, E3(left - 0.1 * i) - r.l3);
    if (!r.supercritical) r.margin_astar = E3(cplx(cuts.a_star, 0.0)) - r.l3;

    if (r.dev1 >= 1e-4) r.failures.push_back("equality on Delta1");
    if (r.dev2 >= 1e-4) r.failures.push_back("equality on Delta2");
    if (r.supercritical && r.dev3 >= 1e-4) r.failures.push_back("equality on Delta3");
    if (r.supercritical && r.l3_defect >= 1e-4) r.failures.push_back("l3 = l1 - l2");
    if (r.margin1 <= 0.0) r.failures.push_back("inequality on Gamma1");
    if (r.margin2 <= 0.0) r.failures.push_back("inequality on Gamma2");
    if (r.margin3 <= 0.0) r.failures.push_back("inequality on Gamma3");
    if (!r.supercritical && r.margin_astar <= 0.0) r.failures.push_back("strict inequality at a_star");
    return r;
}

SPropertyReport s_property_check(const VectorMeasure& mu, const ExternalField& field,
                                 std::vector<SPropertyPoint> points, double delta) {
    InteractionStructure st = InteractionStructure::standard();
    SPropertyReport rep;
    for (auto& p : points) {
        int j = p.component - 1;
        if (j < 0 || j > 2) throw DomainError("s_property_check: component must be 1..3");
        auto F = [&](cplx z) {
            double v = 0.5 * field.phi(j, z);
            for (int k = 0; k < 3; ++k)
                if (!mu[k].empty()) v += st.A(j, k) * log_potential(mu[k], z);
            return v;
        };
        double f0 = F(p.s);
        auto one_sided = [&](double sgn) {
            double d1 = (F(p.s + sgn * delta * p.normal) - f0) / delta;
            double d2 = (F(p.s + sgn * 0.5 * delta * p.normal) - f0) / (0.5 * delta);
            return 2.0 * d2 - d1;
        };
        p.d_plus = one_sided(1.0);
        p.d_minus = one_sided(-1.0);
        double den = std::abs(p.d_plus) + std::abs(p.d_minus);
        p.defect = den == 0.0 ? 0.0 : std::abs(p.d_plus - p.d_minus) / den;
        rep.max_defect = std::max(rep.max_defect, p.defect);
    }
    rep.points = std::move(points);
    return rep;
}

std::vector<SPropertyPoint> s_property_points(const FamilyMeasure& fm) {
    std::vector<SPropertyPoint> pts;
    for (int j : {0, 1, 2}) {
        if (fm.mu[j].empty()) continue;
        const Arc& a = fm.mu[j].arcs[0];
        std::size_t k = a.z.size() / 2;
        cplx t = a.z[k + 1] - a.z[k - 1];
        t /= std::abs(t);
        pts.push_back({j + 1, a.z[k], cplx(0.0, 1.0) * t});
    }
    return pts;
}

} // namespace cubicvm
