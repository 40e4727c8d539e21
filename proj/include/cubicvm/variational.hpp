#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cubicvm/measures.hpp"

namespace cubicvm {

struct InteractionStructure {
    Eigen::Matrix3d A;
    Eigen::Matrix3d B;
    Eigen::Vector3d b;
    static InteractionStructure standard();
};

struct InteractionCheck {
    bool twoA_is_BtB = false;
    bool twoA_is_3I_minus_bbt = false;
    bool A_b_zero = false;
    bool eigenspace_3_2 = false;  // A v = 3/2 v exactly on v1 - v2 - v3 = 0
    bool all() const { return twoA_is_BtB && twoA_is_3I_minus_bbt && A_b_zero && eigenspace_3_2; }
};
// integer arithmetic on 2A, B and b
InteractionCheck check_interaction();

using Poly = std::vector<cplx>;  // ascending coefficients

Poly poly_derivative(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
cplx poly_eval(const Poly& p, cplx z);

struct ExternalField {
    std::array<Poly, 3> Phi;
    bool compatible(double tol = 1e-14) const;  // Phi1' - Phi2' = Phi3'
    cplx dPhi(int j, cplx z) const;             // j = 0..2
    double phi(int j, cplx z) const;            // Re Phi_j
    static ExternalField cubic();               // Phi1 = Phi2 = z^3, Phi3 = 0
    static ExternalField angelesco();           // Phi1 = -z = -Phi2, Phi3 = -2z
    static ExternalField nikishin();            // Phi1 = 0, Phi2 = z = -Phi3
    static ExternalField zero();
};

using VectorMeasure = std::array<MeasureComponent, 3>;

struct PointMeasure {
    std::vector<cplx> z;
    std::vector<double> w;
};

// E = sum a_jk I(mu_j, mu_k) + sum int phi_j dmu_j; for point masses the i = i' terms are dropped
double energy(const std::array<PointMeasure, 3>& mu, const ExternalField& field,
              const InteractionStructure& s = InteractionStructure::standard());
double energy(const VectorMeasure& mu, const ExternalField& field,
              const InteractionStructure& s = InteractionStructure::standard());

// Q_j(z) = -int (Phi_j'(x) - Phi_j'(z)) / (x - z) dmu_j(x), as a polynomial in z
Poly q_poly(const MeasureComponent& m, const Poly& dPhi);

cplx variation_Dhz(const VectorMeasure& mu, const ExternalField& field, cplx z);

Poly r_from_fields(const VectorMeasure& mu, const ExternalField& field);

// xi vector of the measures: Phi'/3 combinations plus Cauchy transforms
std::array<cplx, 3> xi_from_measures(const VectorMeasure& mu, const ExternalField& field, cplx z);

struct EquilibriumOptions {
    int samples = 60;
    double trim = 0.1;  // fraction dropped at each end of a support
};

struct EquilibriumReport {
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    double l3_tilde = 0.0;  // mean on Delta3 (supercritical only)
    double l3_defect = 0.0;
    double dev1 = 0.0, dev2 = 0.0, dev3 = 0.0;
    double margin1 = 0.0;  // on (b1, b1 + 3], and (a_star, a1) when precritical
    double margin2 = 0.0;  // on the orthogonal extension of Delta2
    double margin3 = 0.0;  // left of min(a1, a_star)
    double margin_astar = 0.0;  // precritical: 2U3 + U1 - U2 - l3 at a_star
    bool supercritical = false;
    std::vector<std::string> failures;
    bool ok(double tol = 1e-4) const;
};

EquilibriumReport verify_equilibrium(const FamilyMeasure& fm, const EquilibriumOptions& opt = {});

struct SPropertyPoint {
    int component = 1;  // 1..3
    cplx s;
    cplx normal;        // unit normal towards the + side
    double d_plus = 0.0, d_minus = 0.0;
    double defect = 0.0;
};

struct SPropertyReport {
    std::vector<SPropertyPoint> points;
    double max_defect = 0.0;
};

// symmetric one-sided normal derivatives of sum_k a_jk U^{mu_k} + phi_j / 2, one Richardson step
SPropertyReport s_property_check(const VectorMeasure& mu, const ExternalField& field,
                                 std::vector<SPropertyPoint> points, double delta = 1e-4);

// interior test points of a family measure: midpoint of Delta1, of the upper arc of Delta2,
// and of Delta3 when present
std::vector<SPropertyPoint> s_property_points(const FamilyMeasure& fm);

} // namespace cubicvm
