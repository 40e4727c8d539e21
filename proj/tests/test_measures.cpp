#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "cubicvm/measures.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace cubicvm;

TEST_CASE("supports by regime") {
    const FamilyMeasure& pre = test_family(0.126);
    CHECK(pre.mu[2].empty());
    CHECK_FALSE(pre.mu[0].empty());
    Supports s = compute_supports(pre.cuts);
    CHECK(s.mu3_empty());
    CHECK(s.s1.lo == pre.cuts.bp.a1);

    const FamilyMeasure& sup = test_family(0.227);
    for (int k = 0; k < 3; ++k) CHECK_FALSE(sup.mu[k].empty());
    Supports t = compute_supports(sup.cuts);
    CHECK(t.s1.lo == sup.cuts.a_star);
    CHECK(t.s3.hi == sup.cuts.a_star);
    CHECK(std::abs(t.s2_upper.front() - sup.cuts.a_star) < 1e-12);

    CutSystem bad = test_cuts(0.1);
    bad.regime = Regime::Supercritical;
    CHECK_THROWS_AS(compute_supports(bad), ConsistencyError);
}

TEST_CASE("density oracle at tau = 0.05") {
    const CutSystem& c = test_cuts(0.05);
    double x = 0.5 * (c.bp.a1 + c.bp.b1);
    // 50-digit value, frozen
    const double frozen = 0.1374167429524745755433027178836851752023877349828;
    oracle::real50 tau("0.05");
    oracle::real50 a1("0.24570552766689955404610949024455928179189962060006979");
    oracle::real50 b1("0.73433926302202004264173693931985821911463020790946236");
    oracle::real50 xm = (a1 + b1) / 2;
    oracle::real50 r = oracle::real_xi(tau, xm, 0.558);
    oracle::real50 R = oracle::R(oracle::c_of(tau), oracle::cplx50(xm)).real();
    oracle::real50 rho = sqrt(3 * r * r - 4 * R) / (2 * boost::math::constants::pi<oracle::real50>());
    CHECK(std::abs(static_cast<double>(rho) - frozen) < 1e-40);
    CHECK(std::abs(static_cast<double>(xm) - x) < 1e-14);

    CHECK(std::abs(density(c, 1, x) - frozen) < 1e-10);
    CHECK(std::abs(density_complex(c, 1, x).imag()) < 1e-8);
    CHECK_THROWS_AS(density(c, 1, cplx(x, 0.3)), DomainError);
    CHECK_THROWS_AS(density(c, 4, x), DomainError);
}

TEST_CASE("endpoint exponents") {
    const FamilyMeasure& fm = test_family(0.1);
    const auto& e1 = fm.mu[0].endpoint_exponents;
    REQUIRE(e1.size() == 2);
    for (double e : e1) {
        CHECK(e >= 0.45);
        CHECK(e <= 0.55);
    }
    const FamilyMeasure& sup = test_family(0.2);
    // at a_star the meeting densities stay finite
    CHECK(sup.mu[0].endpoint_exponents[0] >= -0.75);
    CHECK(sup.mu[0].endpoint_exponents[0] <= 0.6);
    CHECK(sup.mu[2].endpoint_exponents[1] >= -0.75);
    CHECK(sup.mu[2].endpoint_exponents[1] <= 0.6);
}

TEST_CASE("masses") {
    Masses m = masses(test_family(0.1));
    double alpha = 0.5 * (1 - std::sqrt(1 - 0.4));
    CHECK(m.m3 == 0.0);
    CHECK(std::abs(m.m1 - alpha) < 1e-5);
    CHECK(std::abs(m.m2 - (1 - alpha)) < 1e-5);
    CHECK(std::abs(m.alpha_recovered - alpha) < 1e-5);

    for (double tau : {0.05, 0.126, 0.15, 0.2, 0.227}) {
        const FamilyMeasure& fm = test_family(tau);
        Masses q = masses(fm);
        CHECK(std::abs(q.m1 + q.m2 - 1) < 1e-5);
        CHECK(std::abs(q.m1 + q.m3 - fm.cuts.param.alpha) < 1e-5);
        for (const auto& mu : fm.mu)
            for (const auto& a : mu.arcs)
                for (double r : a.rho)
                    if (std::isfinite(r)) CHECK(r >= -1e-9);
    }
}

TEST_CASE("masses at tau = 0.2 against Gauss-Legendre") {
    const FamilyMeasure& fm = test_family(0.2);
    Masses m = masses(fm);
    // cosine substitution smooths the square-root ends
    auto real_mass = [&](int comp, double lo, double hi) {
        auto f = [&](double th) {
            double x = lo + (hi - lo) * 0.5 * (1 - std::cos(th));
            if (x - lo < 1e-8 || hi - x < 1e-8) return 0.0;
            return density(fm.cuts, comp, x) * (hi - lo) * 0.5 * std::sin(th);
        };
        return boost::math::quadrature::gauss<double, 300>::integrate(f, 0.0, M_PI);
    };
    double m1 = real_mass(1, fm.cuts.delta1.lo, fm.cuts.delta1.hi);
    double m3 = real_mass(3, fm.cuts.delta3.lo, fm.cuts.delta3.hi);
    CHECK(std::abs(m.m1 - m1) < 1e-6);
    CHECK(std::abs(m.m3 - m3) < 1e-6);
    // frozen
    CHECK(std::abs(m.m1 - 0.272879226) < 1e-6);
    CHECK(std::abs(m.m2 - 0.727120511) < 1e-6);
    CHECK(std::abs(m.m3 - 0.003513880) < 1e-6);
}

TEST_CASE("Cauchy transforms and potentials") {
    const FamilyMeasure& fm = test_family(0.1);
    cplx z(3, 3);
    XiTriple xi = xi_labels(fm.cuts, z);
    cplx C1 = cauchy_transform(fm.mu[0], z), C2 = cauchy_transform(fm.mu[1], z);
    CHECK(std::abs(C1 + C2 + 2.0 * z * z - xi[0]) < 1e-5);
    CHECK(std::abs(C2 + z * z + xi[2]) < 1e-5);

    const FamilyMeasure& sup = test_family(0.2);
    for (cplx w : {cplx(1, 1), cplx(-1.5, 0.4), cplx(0.2, -0.8)}) {
        XiTriple x = xi_labels(sup.cuts, w);
        cplx D1 = cauchy_transform(sup.mu[0], w), D2 = cauchy_transform(sup.mu[1], w),
             D3 = cauchy_transform(sup.mu[2], w);
        CHECK(std::abs(D1 + D2 + 2.0 * w * w - x[0]) < 1e-5);
        CHECK(std::abs(D2 - D3 + w * w + x[2]) < 1e-5);
    }

    cplx far(1e3, 0.0);
    double mass = fm.mu[0].mass;
    cplx tail = mass / far + moment(fm.mu[0], 1) / (far * far) + moment(fm.mu[0], 2) / (far * far * far);
    CHECK(std::abs(cauchy_transform(fm.mu[0], far) + tail) < 1e-4 * mass / std::abs(far * far));
    cplx ref(1e6, 0.0);
    CHECK(std::abs(log_potential(fm.mu[1], ref) + fm.mu[1].mass * std::log(1e6)) < 1e-5);
    CHECK(std::abs(moment(fm.mu[1], 0) - fm.mu[1].mass) < 1e-12);
}

TEST_CASE("fit_exponent on synthetic data") {
    std::vector<cplx> z;
    std::vector<double> rho;
    for (int i = 1; i <= 100; ++i) {
        double d = 1e-3 * i;
        z.push_back(d);
        rho.push_back(2.0 * std::pow(d, 0.5));
    }
    CHECK(std::abs(fit_exponent(z, rho, 0.0) - 0.5) < 1e-10);
    CHECK_THROWS_AS(fit_exponent({cplx(1)}, {1.0}, 0.0), QuadratureError);
}

TEST_CASE("fixtures") {
    Fixture a = example_fixture(FixtureName::Angelesco);
    CHECK(std::abs(a.branch_points[1].real() - 2.598076) < 1e-6);
    CHECK(std::abs(a.branch_points[0].real() + 2.598076) < 1e-6);
    CHECK(std::abs(a.masses[0] - 0.5) < 1e-5);
    CHECK(std::abs(a.masses[1] - 0.5) < 1e-5);
    CHECK(std::abs(a.blowup_exponent - 1.0 / 3) < 0.03);

    Fixture n = example_fixture(FixtureName::Nikishin);
    CHECK(std::abs(n.masses[0] - 1.0) < 1e-5);
    CHECK(std::abs(n.blowup_exponent - 2.0 / 3) < 0.03);
    CHECK(n.measures[0].arcs[0].z.front().real() == doctest::Approx(0.0));
    CHECK(n.measures[0].arcs[0].z.back().real() == doctest::Approx(2.598076).epsilon(1e-6));

    Fixture s = example_fixture(FixtureName::ScalarReduced);
    CHECK(std::abs(s.masses[0] - 1.0) < 1e-5);

    for (cplx z : {cplx(1, 1), cplx(-0.5, 0.4), cplx(3, -0.5)}) {
        auto x = a.xi(z);
        CHECK(std::abs(cauchy_transform(a.measures[0], z) - (1.0 - x[1])) < 1e-5);
        CHECK(std::abs(cauchy_transform(a.measures[1], z) - (-1.0 - x[2])) < 1e-5);
        auto y = n.xi(z);
        CHECK(std::abs(cauchy_transform(n.measures[0], z) - (y[0] - 1.0 / 3)) < 1e-5);
        CHECK(std::abs(cauchy_transform(n.measures[1], z) - (-y[1] + 1.0 / 3)) < 1e-5);
        auto w = s.xi(z);
        CHECK(std::abs(cauchy_transform(s.measures[0], z) - (w[0] - z)) < 1e-5);
    }
}
