#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicvm/sheets.hpp"

namespace cubicvm {

enum class PointKind { A1, B1, A2, B2, BStar };
enum class TrajKind { Trajectory, Orthogonal };
enum class Termination { HitCriticalPoint, HitRadiusBound, HitRealAxis, StepLimit, NumericalFailure };

const char* point_name(PointKind k);
const char* termination_name(Termination t);
cplx point_position(const BranchPointSet& bp, PointKind k);

// a zero of Q^2 on the surface: a position plus the set of sheets glued there
struct Vertex {
    PointKind kind = PointKind::A1;
    cplx z;
    std::vector<int> sheets;  // one sheet, or the two glued at a branch point
    int order = 0;            // order of the zero of the quadratic differential
    std::string label() const;
    bool has_sheet(int s) const;
};

struct Seed {
    int vertex = -1;  // index into the vertex list, -1 for free seeds
    int sheet = 1;
    int index = 0;    // 1-based, anticlockwise from the positive real semiaxis per sheet
    double angle = 0.0;
    cplx z;           // offset seed point
    cplx excluded;    // the sheet's own root at z
};

struct Crossing {
    std::size_t index = 0;
    CutId cut = CutId::D1;
    int from = 0;
    int to = 0;
};

struct Trajectory {
    TrajKind kind = TrajKind::Trajectory;
    Seed seed;
    std::vector<SheetPoint> points;
    std::vector<double> t;  // arc length
    std::vector<Crossing> crossings;
    std::vector<double> real_axis_hits;
    Termination termination = Termination::StepLimit;

    // HitCriticalPoint
    PointKind end_point = PointKind::A1;
    int end_vertex = -1;
    double end_gap = 0.0;
    // HitRealAxis
    double real_axis_x = 0.0;
    // HitRadiusBound
    double end_angle = 0.0;
    int end_theta = 0;  // j with angle nearest (2j-1) pi / 6
    int end_sheet = 0;  // from the expansions at infinity (or the tracked sheet)

    // Upsilon = int Q dz along the polyline
    cplx upsilon_end;
    double conservation_drift = 0.0;
    double max_upsilon = 0.0;
    std::string note;
};

struct TraceConfig {
    TrajKind kind = TrajKind::Trajectory;
    double step_rel = 1e-3;
    double snap_radius = 5e-3;
    double r_max = 10.0;
    long max_steps = 1000000;
    double seed_eps = 1e-4;
    bool stop_on_real_axis = false;
    // relative to 1 + max |Upsilon|
    double conservation_tol = 1e-6;
    double min_step = 1e-10;
    bool verify_crossings = true;
};

// local trajectory directions of the zero at a surface point: n+2 seeds
// for a zero of order n; `sheet` == 0 lists all sheets glued at p
std::vector<Seed> seed_directions(const CutSystem& cuts, cplx p, int sheet, const TraceConfig& cfg,
                                  int* order = nullptr);

Trajectory trace(const CutSystem& cuts, const SheetPoint& seed, double heading,
                 const TraceConfig& cfg);
Trajectory trace_seed(const CutSystem& cuts, const Seed& seed, const std::vector<Vertex>& vertices,
                      const TraceConfig& cfg);

std::vector<Vertex> critical_vertices(const CutSystem& cuts, const TraceConfig& cfg = {});

struct GraphEdge {
    Trajectory traj;
    int mate = -1;  // edge traced from the other end of the same trajectory
    std::string error;
};

struct CriticalGraph {
    double tau = 0.0;
    std::vector<Vertex> vertices;
    std::vector<Seed> seeds;
    std::vector<GraphEdge> edges;  // one per seed, same order
    bool degree_law = false;
    bool conjugation_symmetric = false;
    double symmetry_defect = 0.0;
    std::vector<std::string> warnings;

    // edge traced from seed gamma_index(point^(sheet)); nullptr if absent
    const GraphEdge* find(PointKind k, int sheet, int index) const;
    int vertex_of(PointKind k, int sheet) const;
};

CriticalGraph critical_graph(const CutSystem& cuts, const TraceConfig& cfg = {}, int threads = 0);

struct Delta2Trace {
    Trajectory traj;        // from b2 on sheet 2 to the real axis
    std::vector<cplx> upper;  // a_star -> b2
    double a_star = 0.0;
    int seed_index = 0;
};

// the critical trajectory from b2^(2) that reaches the real axis
Delta2Trace trace_delta2(const CurveParam& p, Regime regime, const TraceConfig& cfg = {});

// traced cut system; regime decided by the sign of the width that vanishes at tau_c
CutSystem build_cuts(const CurveParam& p, const TraceConfig& cfg = {});
CutSystem build_cuts(const CurveParam& p, Regime regime, const TraceConfig& cfg = {});

struct OrthogonalExtension {
    Trajectory gamma1;  // from b2, towards 2 pi / 3
    std::vector<cplx> gamma2;  // conjugate of gamma1
    bool direction_ok = false;
    double heading_error = 0.0;
};

OrthogonalExtension orthogonal_extension(const CutSystem& cuts, const TraceConfig& cfg = {});

// Q^2 on the sheet whose own root is e
cplx q_squared(const CurveParam& p, cplx z, cplx e);

} // namespace cubicvm
