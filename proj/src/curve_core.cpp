#include "cubicvm/curve_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cubicvm {

namespace {

const double kCbrt3 = std::cbrt(3.0);

cplx horner(const std::array<double, 5>& a, cplx z) {
    cplx v = a[4];
    for (int k = 3; k >= 0; --k) v = v * z + a[k];
    return v;
}

cplx horner_d(const std::array<double, 5>& a, cplx z) {
    cplx v = 4.0 * a[4];
    for (int k = 3; k >= 1; --k) v = v * z + double(k) * a[k];
    return v;
}

double horner_dd(const std::array<double, 5>& a, double x) {
    return 12.0 * a[4] * x * x + 6.0 * a[3] * x + 2.0 * a[2];
}

cplx cubic_value(cplx R, cplx D, cplx x) { return (x * x - R) * x + D; }

cplx newton_polish(cplx R, cplx D, cplx x) {
    cplx f = cubic_value(R, D, x);
    cplx fp = 3.0 * x * x - R;
    if (std::abs(fp) == 0.0) return x;
    cplx y = x - f / fp;
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) return x;
    return std::abs(cubic_value(R, D, y)) < std::abs(f) ? y : x;
}

void check_tau(double tau, double hi, const char* who) {
    if (!(tau >= 0.0 && tau <= hi))
        throw DomainError(std::string(who) + ": tau outside [0, " + std::to_string(hi) + "]");
}

} // namespace

double BranchPointSet::max_abs() const {
    return std::max({std::abs(a1), std::abs(b1), std::abs(b2), std::abs(b_star)});
}

double alpha_of_tau(double tau) {
    check_tau(tau, 0.25, "alpha_of_tau");
    // (1 - sqrt(1-4tau))/2 without cancellation at small tau
    return 2.0 * tau / (1.0 + std::sqrt(1.0 - 4.0 * tau));
}

double coefficient_c(double tau) {
    check_tau(tau, 0.25, "coefficient_c");
    double s = 1.0 - 4.0 * tau;
    return -std::cbrt(243.0 / 64.0 * s * s);
}

CurveParam make_param(double tau) {
    check_tau(tau, kTauMax, "make_param");
    return {tau, alpha_of_tau(tau), coefficient_c(tau)};
}

cplx eval_R(const CurveParam& p, cplx z) {
    cplx z3 = z * z * z;
    return 3.0 * z3 * z - 3.0 * z - p.c;
}

cplx eval_D(const CurveParam& p, cplx z) {
    cplx z2 = z * z;
    cplx z3 = z2 * z;
    return -2.0 * z3 * z3 + 3.0 * z3 + p.c * z2 - 3.0 * p.tau;
}

cplx eval_dR(const CurveParam&, cplx z) { return 12.0 * z * z * z - 3.0; }

cplx eval_dD(const CurveParam& p, cplx z) {
    cplx z2 = z * z;
    return -12.0 * z2 * z2 * z + 9.0 * z2 + 2.0 * p.c * z;
}

cplx eval_d2R(const CurveParam&, cplx z) { return 36.0 * z * z; }

cplx eval_d2D(const CurveParam& p, cplx z) {
    cplx z2 = z * z;
    return -60.0 * z2 * z2 + 18.0 * z + 2.0 * p.c;
}

std::array<double, 5> q1_coefficients(const CurveParam& p) {
    double s = 1.0 - 4.0 * p.tau;
    double s13 = std::cbrt(s);
    std::array<double, 5> a{};
    a[4] = 256.0 / std::pow(3.0, 5.0 / 3.0) * s13;
    a[3] = 128.0 / 9.0;
    a[2] = 16.0 / kCbrt3 * s13 * s13;
    a[1] = -kCbrt3 * 32.0 * s13;
    a[0] = 16.0 * (1.0 - 8.0 * p.tau);
    return a;
}

double b_star_of(const CurveParam& p) { return 1.0 / std::cbrt(3.0 * (1.0 - 4.0 * p.tau)); }

Discriminant eval_discriminant(const CurveParam& p, cplx z) {
    cplx R = eval_R(p, z);
    cplx D = eval_D(p, z);
    Discriminant d;
    d.value = 4.0 * R * R * R - 27.0 * D * D;
    d.q1 = horner(q1_coefficients(p), z);
    d.q2 = kCbrt3 * std::cbrt(1.0 - 4.0 * p.tau) * z - 1.0;
    return d;
}

BranchPointSet branch_points(const CurveParam& p, const CurveTolerances& tol) {
    auto a = q1_coefficients(p);
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < 4; ++i) comp(i, 3) = -a[i] / a[4];
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
    std::array<cplx, 4> r;
    for (int i = 0; i < 4; ++i) {
        cplx x = es.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            cplx d = horner_d(a, x);
            if (std::abs(d) == 0.0) break;
            cplx y = x - horner(a, x) / d;
            if (std::abs(horner(a, y)) < std::abs(horner(a, x))) x = y;
        }
        r[i] = x;
    }
    std::sort(r.begin(), r.end(),
              [](cplx u, cplx v) { return std::abs(u.imag()) < std::abs(v.imag()); });

    BranchPointSet bp;
    double x1 = r[0].real(), x2 = r[1].real();
    if (x1 > x2) std::swap(x1, x2);
    double scale = 1.0 + std::abs(x1) + std::abs(x2);
    if (x2 - x1 < 1e-4 * scale) {
        // near-double real pair: locate the critical point of q1, then split
        double xm = 0.5 * (x1 + x2);
        for (int it = 0; it < 50; ++it) {
            double d2 = horner_dd(a, xm);
            double step = horner_d(a, xm).real() / d2;
            xm -= step;
            if (std::abs(step) < 1e-17 * scale) break;
        }
        double disc = -2.0 * horner(a, xm).real() / horner_dd(a, xm);
        double h = disc > 0.0 ? std::sqrt(disc) : 0.0;
        x1 = xm - h;
        x2 = xm + h;
        if (h > 0.0) {
            for (double* x : {&x1, &x2}) {
                for (int it = 0; it < 3; ++it) {
                    double d = horner_d(a, *x).real();
                    if (std::abs(d) < 1e-300) break;
                    double y = *x - horner(a, *x).real() / d;
                    if (std::abs(horner(a, y)) < std::abs(horner(a, *x))) *x = y;
                }
            }
            if (x1 > x2) std::swap(x1, x2);
        }
    } else {
        for (double* x : {&x1, &x2}) {
            for (int it = 0; it < 3; ++it) {
                double d = horner_d(a, *x).real();
                if (d == 0.0) break;
                double y = *x - horner(a, *x).real() / d;
                if (std::abs(horner(a, y)) < std::abs(horner(a, *x))) *x = y;
            }
        }
    }
    bp.a1 = x1;
    bp.b1 = x2;
    cplx up = r[2].imag() > 0.0 ? r[2] : r[3];
    if (up.imag() < 0.0) up = std::conj(up);
    bp.b2 = up;
    bp.a2 = std::conj(up);
    bp.b_star = b_star_of(p);
    bp.degenerate_merge = std::abs(bp.b1 - bp.b_star) < tol.merge_tol;
    if (std::abs(bp.a1) > tol.magnitude_bound)
        throw RangeError("branch_points: a1 exceeds magnitude bound");
    return bp;
}

double p1_of_c(double tau, double c) {
    double s = 1.0 - 4.0 * tau;
    return 64.0 * c * c * c + 243.0 * s * s;
}

double p2_of_c(double tau, double c) {
    double c3 = c * c * c;
    double t = 3.0 * tau - 1.0;
    return c3 * c3 - 486.0 * c3 * tau * (1.0 + tau) + 2187.0 * tau * t * t * t;
}

std::array<double, 2> p2_real_roots(double tau) {
    check_tau(tau, 0.25, "p2_real_roots");
    double base = 9.0 * tau + 9.0 * tau * tau;
    double w = std::sqrt(3.0) * (1.0 + 9.0 * tau) * std::sqrt(tau);
    return {3.0 * std::cbrt(base + w), 3.0 * std::cbrt(base - w)};
}

XiTriple solve_cubic(cplx R, cplx D) {
    // x^3 + px + q with p = -R, q = D
    cplx p = -R;
    cplx q = D;
    cplx s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx A1 = -q / 2.0 + s;
    cplx A2 = -q / 2.0 - s;
    cplx A = std::abs(A1) >= std::abs(A2) ? A1 : A2;
    XiTriple x;
    if (std::abs(A) == 0.0) {
        x = {cplx(0.0), cplx(0.0), cplx(0.0)};
        return x;
    }
    cplx u = std::pow(A, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
        x[k] = uk - p / (3.0 * uk);
        uk *= w;
    }
    // recompute the smallest root from the product of the two larger ones
    int ismall = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(x[k]) < std::abs(x[ismall])) ismall = k;
    cplx big = x[(ismall + 1) % 3] * x[(ismall + 2) % 3];
    if (std::abs(big) > 0.0) x[ismall] = -D / big;
    for (auto& xi : x) xi = newton_polish(R, D, xi);
    return x;
}

XiTriple solve_xi_unlabeled(const CurveParam& p, cplx z) {
    return solve_cubic(eval_R(p, z), eval_D(p, z));
}

VietaResidual vieta_residuals(const CurveParam& p, cplx z, const XiTriple& xi) {
    cplx R = eval_R(p, z);
    cplx D = eval_D(p, z);
    VietaResidual v;
    v.sum = std::abs(xi[0] + xi[1] + xi[2]);
    v.sumsq = std::abs(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] - 2.0 * R);
    v.prod = std::abs(xi[0] * xi[1] * xi[2] + D);
    return v;
}

XiTriple label_at_infinity(const CurveParam& p, cplx z, const XiTriple& roots) {
    cplx z2 = z * z;
    int i1 = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(roots[k] - 2.0 * z2) < std::abs(roots[i1] - 2.0 * z2)) i1 = k;
    int j = (i1 + 1) % 3, k = (i1 + 2) % 3;
    cplx sj = z * (roots[j] + z2);
    cplx sk = z * (roots[k] + z2);
    double keep = std::abs(sj - p.alpha) + std::abs(sk - (1.0 - p.alpha));
    double swap = std::abs(sk - p.alpha) + std::abs(sj - (1.0 - p.alpha));
    if (swap < keep) std::swap(j, k);
    return {roots[i1], roots[j], roots[k]};
}

double far_radius(const BranchPointSet& bp) { return 10.0 * (1.0 + bp.max_abs()); }

XiTriple match_nearest(const XiTriple& ref, const XiTriple& roots) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double best = std::numeric_limits<double>::infinity();
    int ib = 0;
    for (int s = 0; s < 6; ++s) {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += std::abs(roots[perms[s][i]] - ref[i]);
        if (d < best) {
            best = d;
            ib = s;
        }
    }
    return {roots[perms[ib][0]], roots[perms[ib][1]], roots[perms[ib][2]]};
}

double min_separation(const XiTriple& r) {
    return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
}

namespace {

XiTriple predict(const CurveParam& p, cplx z, const XiTriple& t, cplx dz) {
    cplx R = eval_R(p, z), R1 = eval_dR(p, z), R2 = eval_d2R(p, z);
    cplx D1 = eval_dD(p, z), D2 = eval_d2D(p, z);
    XiTriple out = t;
    double scale = 1.0 + std::abs(R);
    for (int i = 0; i < 3; ++i) {
        cplx x = t[i];
        cplx fx = 3.0 * x * x - R;
        if (std::abs(fx) < 1e-12 * scale) continue;
        cplx d1 = (R1 * x - D1) / fx;
        cplx d2 = -(6.0 * x * d1 * d1 - 2.0 * R1 * d1 - R2 * x + D2) / fx;
        cplx y = x + d1 * dz + 0.5 * d2 * dz * dz;
        if (std::isfinite(y.real()) && std::isfinite(y.imag())) out[i] = y;
    }
    return out;
}

bool acceptable(const XiTriple& pred, const XiTriple& m, const ContinuationOptions& opt) {
    double disp = 0.0;
    for (int i = 0; i < 3; ++i) disp = std::max(disp, std::abs(m[i] - pred[i]));
    double sep = min_separation(m);
    if (disp * opt.ratio < sep) return true;
    double scale = 1.0 + std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
    if (sep >= opt.coincide_rel * scale) return false;
    // coalesced pair: only the isolated root must be unambiguous
    int iso = 0;
    double far = -1.0;
    for (int i = 0; i < 3; ++i) {
        double d = std::min(std::abs(m[i] - m[(i + 1) % 3]), std::abs(m[i] - m[(i + 2) % 3]));
        if (d > far) {
            far = d;
            iso = i;
        }
    }
    return disp * opt.ratio < far && std::abs(m[iso] - pred[iso]) * opt.ratio < far;
}

} // namespace

XiTriple continue_to(const CurveParam& p, cplx z0, const XiTriple& t0, cplx z1,
                     const ContinuationOptions& opt) {
    if (z0 == z1) return t0;
    const double min_step = std::ldexp(1.0, -opt.max_levels);
    cplx cur = z0;
    XiTriple t = t0;
    double done = 0.0;
    double step = 1.0;
    while (done < 1.0) {
        double s = std::min(step, 1.0 - done);
        bool last = s >= 1.0 - done;
        cplx zn = last ? z1 : z0 + (done + s) * (z1 - z0);
        XiTriple pred = predict(p, cur, t, zn - cur);
        XiTriple m = match_nearest(pred, solve_xi_unlabeled(p, zn));
        if (acceptable(pred, m, opt)) {
            cur = zn;
            t = m;
            done = last ? 1.0 : done + s;
            step = std::min(2.0 * s, 1.0);
        } else {
            step = 0.5 * s;
            if (step < min_step) throw ContinuationError("continue_to: ambiguous root matching", 0);
        }
    }
    return t;
}

std::vector<XiTriple> continue_roots(const CurveParam& p, const std::vector<cplx>& path,
                                     const XiTriple& start, const ContinuationOptions& opt) {
    std::vector<XiTriple> out;
    if (path.empty()) return out;
    out.reserve(path.size());
    out.push_back(match_nearest(start, solve_xi_unlabeled(p, path[0])));
    for (std::size_t i = 1; i < path.size(); ++i) {
        try {
            out.push_back(continue_to(p, path[i - 1], out.back(), path[i], opt));
        } catch (const ContinuationError& e) {
            throw ContinuationError(e.what(), i);
        }
    }
    return out;
}

} // namespace cubicvm
