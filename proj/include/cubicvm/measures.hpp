#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cubicvm/sheets.hpp"

namespace cubicvm {

// density sampled along a polyline; rho is taken per unit arc length and linear between nodes
struct Arc {
    std::vector<cplx> z;
    std::vector<double> rho;
    // rho ~ dist^(-nu) at an end node whose own value is not finite
    double nu_first = 0.0;
    double nu_last = 0.0;
    // node quadrature weights for integrate(); empty means the polyline trapezoid
    std::vector<double> w;
};

struct MeasureComponent {
    int index = 0;
    std::vector<Arc> arcs;
    double mass = 0.0;
    // fitted slope of log rho against log distance at each arc end (first, last per arc)
    std::vector<double> endpoint_exponents;
    double max_imag_residual = 0.0;
    bool empty() const { return arcs.empty(); }
};

struct Supports {
    Regime regime = Regime::Precritical;
    Interval s1;
    Interval s3;
    std::vector<cplx> s2_upper;  // a_star -> b2; the lower arc is its conjugate
    bool mu3_empty() const { return s3.empty(); }
};

Supports compute_supports(const CutSystem& cuts);

// pointwise density of component k (1..3) at an interior support point
double density(const CutSystem& cuts, int component, cplx s);
// same, with the imaginary part of the differential kept
cplx density_complex(const CutSystem& cuts, int component, cplx s);

struct FamilyMeasure {
    CutSystem cuts;
    std::array<MeasureComponent, 3> mu;
};

FamilyMeasure family_measure(const CutSystem& cuts, int nodes = 2000);

struct Masses {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    double alpha_recovered = 0.0;
};
Masses masses(const FamilyMeasure& fm);

double mass_of(const MeasureComponent& m);
cplx cauchy_transform(const MeasureComponent& m, cplx z);
// U(z) = int log(1/|z - x|) dmu(x)
double log_potential(const MeasureComponent& m, cplx z);
// int f(x) dmu(x)
cplx integrate(const MeasureComponent& m, const std::function<cplx(cplx)>& f);
cplx moment(const MeasureComponent& m, int k);
// distance from z to the nodes of m
double support_distance(const MeasureComponent& m, cplx z);

// slope of log rho vs log distance to `end`, least squares over the nearest `take`
// samples after skipping the `skip` closest
double fit_exponent(const std::vector<cplx>& z, const std::vector<double>& rho, cplx end,
                    int skip = 3, int take = 30);

// density on a real interval from the complex pair of a cubic, sampled at graded nodes
struct RealDensitySpec {
    double lo = 0.0, hi = 1.0;
    std::function<double(double)> rho;
    double nu_lo = 0.0, nu_hi = 0.0;  // blow-up exponents at the ends (0: finite)
};
MeasureComponent sample_real_measure(int index, const RealDensitySpec& spec, int nodes);

enum class FixtureName { Angelesco, Nikishin, ScalarReduced };

struct Fixture {
    std::string name;
    std::vector<cplx> branch_points;
    std::vector<MeasureComponent> measures;
    std::vector<double> masses;
    double blowup_exponent = 0.0;  // nu in rho ~ |x|^(-nu) at 0
    // the relevant solution branch by its expansion at infinity, e.g. for Cauchy identities
    std::function<std::array<cplx, 3>(cplx)> xi;
};

Fixture example_fixture(FixtureName name, int nodes = 4000);

} // namespace cubicvm
