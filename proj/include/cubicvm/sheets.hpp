#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicvm/curve_core.hpp"
#include "cubicvm/widths.hpp"

namespace cubicvm {

enum class Side { Interior, Plus, Minus };
enum class CutId { D1, D2, D3 };

const char* cut_name(CutId c);

struct SheetPoint {
    cplx z;
    int sheet = 1;
    Side side = Side::Interior;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(hi > lo); }
    bool contains(double x) const { return !empty() && x >= lo && x <= hi; }
};

struct CutSystem {
    CurveParam param;
    BranchPointSet bp;
    Regime regime = Regime::Precritical;
    Interval delta1;
    Interval delta3;
    // a2 -> b2, conjugation symmetric, passes through a_star
    std::vector<cplx> delta2;
    double a_star = 0.0;
    // chord a2 -> b2 only, usable for continuation detours
    bool provisional = false;

    // part of delta2 in the closed upper half plane, from a_star to b2
    std::vector<cplx> delta2_upper() const;
    bool borders(int sheet, CutId cut) const;
};

Regime classify_regime(const CurveParam& p, double tau_c, double tol = 0.0);

// root of Re int_{b2}^{x} (xi_1 - xi_3) ds on (a1, b1); see README for the Re/Im convention
double find_a_star_supercritical(const CurveParam& p, int m = 4000);
// Re int_{b2}^{x} of the pair that coalesces at b2
double a_star_condition(const CurveParam& p, double x, int m = 4000);

double find_a_star_from_trajectory(const std::vector<cplx>& delta2);

int cross_cut(int sheet, CutId cut);

// assembles a cut system from the traced upper half of delta2 (a_star -> b2)
CutSystem make_cut_system(const CurveParam& p, Regime regime, const std::vector<cplx>& upper,
                          double a_star);
CutSystem provisional_cut_system(const CurveParam& p, Regime regime);

struct SheetOptions {
    double snap_rel = 1e-9;
    double singular_radius = 1e-9;
};

// all three labelled values at a point; side applies to points on a cut
XiTriple xi_labels(const CutSystem& cuts, cplx z, Side side = Side::Interior,
                   const SheetOptions& opt = {});
cplx xi_on_sheet(const CutSystem& cuts, const SheetPoint& p, const SheetOptions& opt = {});

// which cut (if any) carries z, within a relative snap tolerance
std::optional<CutId> cut_at(const CutSystem& cuts, cplx z, double snap_rel = 1e-9);

// proper intersection of segments [p0,p1] and [q0,q1]; returns parameter on the first
std::optional<double> segment_intersection(cplx p0, cplx p1, cplx q0, cplx q1);

} // namespace cubicvm
