#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cubicvm/curve_core.hpp"

namespace cubicvm {

enum class Regime { Precritical, Supercritical, Boundary };

const char* regime_name(Regime r);

// root tracks continued along a straight segment, node k at za + (zb-za) k/m
struct SegmentTracks {
    std::vector<cplx> nodes;
    std::vector<XiTriple> roots;
    // index of the track that does not coalesce at the first / last node
    int distinct_first = 0;
    int distinct_last = 0;
};

// nodes passing within 1e-6 of a point of `avoid` are bent onto a semicircle of radius 1e-3
SegmentTracks segment_tracks(const CurveParam& p, cplx za, cplx zb, int m,
                             const std::vector<cplx>& avoid = {});

// trapezoid of (track i - track j) dz over the polyline
cplx track_integral(const SegmentTracks& t, int i, int j);

struct WidthReport {
    double tau = 0.0;
    int m = 0;
    std::array<double, 4> omega{};
    bool has_omega4 = false;
    // widths of the continuous labelling on b2 -> a1:
    // W[0] = Re int(u - v), W[1] = Re int(w - v), W[2] = Re int(w - u), with u distinct at b2,
    // v distinct at a1, w the remaining track
    std::array<double, 3> W{};
    Regime regime = Regime::Precritical;
};

WidthReport widths(const CurveParam& p, int m = 10000, bool with_omega4 = true);
double width_omega(const CurveParam& p, int k, int m = 10000);

// regime from the sign of the width that vanishes at tau_c
Regime regime_from_widths(const WidthReport& r);
Regime classify_regime_local(const CurveParam& p, int m = 4000);

struct CriticalTaus {
    double tau1 = 0.0;
    double tau_c = 0.0;
    double tau2 = 0.0;
};

struct ScanOptions {
    int grid = 512;
    int m = 10000;
    int threads = 0;  // 0: from environment / hardware
};

CriticalTaus critical_taus(double tol = 1e-9, const ScanOptions& opt = {});

// tau grid sweep; rows in grid order regardless of thread count
std::vector<WidthReport> width_sweep(const std::vector<double>& taus, int m, int threads = 0,
                                     bool with_omega4 = true);

enum class RealCut { D1, D3 };
// integral of Re(xi_c - xi_real) (D1) or Re(xi_real - xi_c) (D3) from x to y;
// `lo`, `hi` bound the cut interval
double h_width(const CurveParam& p, double x, double y, RealCut cut, double lo, double hi,
               int m = 2000);

// Re of the loop integral of the sheet's Q on |z| = radius
double loop_period_real_part(const CurveParam& p, int sheet, double radius, int nodes = 4096);

int thread_count(int requested);

} // namespace cubicvm
