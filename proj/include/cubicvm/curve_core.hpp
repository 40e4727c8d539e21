#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "cubicvm/errors.hpp"

namespace cubicvm {

using cplx = std::complex<double>;

// largest accepted tau; a1 grows without bound as tau -> 1/4
inline constexpr double kTauMax = 0.2499;

struct CurveParam {
    double tau = 0.0;
    double alpha = 0.0;
    double c = 0.0;
};

// three roots of xi^3 - R xi + D = 0; index k holds xi_{k+1}
using XiTriple = std::array<cplx, 3>;

struct CurveTolerances {
    // |b1 - b_star| below this flags the tau = 1/12 merge
    double merge_tol = 1e-6;
    double magnitude_bound = 1e3;
    // relative gap under which two roots are treated as coincident
    double coincide_rel = 1e-6;
};

struct BranchPointSet {
    double a1 = 0.0;
    double b1 = 0.0;
    cplx a2;
    cplx b2;
    double b_star = 0.0;
    bool degenerate_merge = false;

    double max_abs() const;
};

struct Discriminant {
    cplx value;  // 4R^3 - 27D^2
    cplx q1;
    cplx q2;

    cplx factored() const { return 243.0 / 256.0 * q1 * q2 * q2; }
};

double alpha_of_tau(double tau);
// accepts 0 <= tau <= 1/4
double coefficient_c(double tau);
// accepts 0 <= tau <= kTauMax
CurveParam make_param(double tau);

cplx eval_R(const CurveParam& p, cplx z);
cplx eval_D(const CurveParam& p, cplx z);
cplx eval_dR(const CurveParam& p, cplx z);
cplx eval_dD(const CurveParam& p, cplx z);
cplx eval_d2R(const CurveParam& p, cplx z);
cplx eval_d2D(const CurveParam& p, cplx z);

Discriminant eval_discriminant(const CurveParam& p, cplx z);
// ascending coefficients of q1
std::array<double, 5> q1_coefficients(const CurveParam& p);
double b_star_of(const CurveParam& p);

BranchPointSet branch_points(const CurveParam& p, const CurveTolerances& tol = {});

// 64c^3 + 243(1-4tau)^2
double p1_of_c(double tau, double c);
double p2_of_c(double tau, double c);
// the two real roots of p2 (genus-one family), reported as data only
std::array<double, 2> p2_real_roots(double tau);

// roots of xi^3 - R xi + D = 0, Cardano with one Newton polish
XiTriple solve_cubic(cplx R, cplx D);
XiTriple solve_xi_unlabeled(const CurveParam& p, cplx z);

struct VietaResidual {
    double sum = 0.0;
    double sumsq = 0.0;
    double prod = 0.0;
};
VietaResidual vieta_residuals(const CurveParam& p, cplx z, const XiTriple& xi);

// labels by the expansions at infinity; valid only for large |z|
XiTriple label_at_infinity(const CurveParam& p, cplx z, const XiTriple& roots);
// radius beyond which label_at_infinity is reliable
double far_radius(const BranchPointSet& bp);

// permutation of `roots` closest to `ref`
XiTriple match_nearest(const XiTriple& ref, const XiTriple& roots);
double min_separation(const XiTriple& r);

struct ContinuationOptions {
    double ratio = 10.0;
    int max_levels = 40;
    double coincide_rel = 1e-6;
};

// adaptive continuation of a labeled triple from z0 to z1 along the segment
XiTriple continue_to(const CurveParam& p, cplx z0, const XiTriple& t0, cplx z1,
                     const ContinuationOptions& opt = {});

std::vector<XiTriple> continue_roots(const CurveParam& p, const std::vector<cplx>& path,
                                     const XiTriple& start, const ContinuationOptions& opt = {});

} // namespace cubicvm
