#include <doctest.h>

#include <cmath>
#include <map>
#include <mutex>

#include "cubicvm/tracer.hpp"
#include "cubicvm/widths.hpp"
#include "fixtures.hpp"

using namespace cubicvm;

TEST_CASE("regime classification") {
    const double tau_c = 0.1913565;
    CHECK(classify_regime(make_param(0.126), tau_c) == Regime::Precritical);
    CHECK(classify_regime(make_param(0.227), tau_c) == Regime::Supercritical);
    CHECK(classify_regime(make_param(0.0), tau_c) == Regime::Precritical);
    CHECK(classify_regime(make_param(tau_c), tau_c) == Regime::Boundary);
    CHECK(classify_regime_local(make_param(0.126)) == Regime::Precritical);
    CHECK(classify_regime_local(make_param(0.227)) == Regime::Supercritical);
}

TEST_CASE("cross_cut table") {
    CHECK(cross_cut(1, CutId::D1) == 2);
    CHECK(cross_cut(2, CutId::D1) == 1);
    CHECK(cross_cut(3, CutId::D2) == 1);
    CHECK(cross_cut(1, CutId::D2) == 3);
    CHECK(cross_cut(2, CutId::D3) == 3);
    CHECK(cross_cut(3, CutId::D3) == 2);
    CHECK_THROWS_AS(cross_cut(3, CutId::D1), TopologyError);
    CHECK_THROWS_AS(cross_cut(1, CutId::D3), TopologyError);
}

TEST_CASE("a_star supercritical") {
    CurveParam p = make_param(0.2);
    BranchPointSet bp = branch_points(p);
    double a = find_a_star_supercritical(p, 4000);
    CHECK(a > bp.a1);
    CHECK(a < bp.b1);
    CHECK(std::abs(a_star_condition(p, a, 4000)) < 1e-7);

    // sampled sign change brackets the root
    int n = 200;
    double lo = bp.a1, prev = a_star_condition(p, bp.a1 + 1e-9, 2000);
    bool found = false;
    for (int i = 1; i <= n; ++i) {
        double x = bp.a1 + (bp.b1 - bp.a1) * i / n;
        double v = a_star_condition(p, std::min(x, bp.b1 - 1e-9), 2000);
        if ((v < 0) != (prev < 0)) {
            CHECK(a >= lo - 1e-6);
            CHECK(a <= x + 1e-6);
            found = true;
            break;
        }
        lo = x;
        prev = v;
    }
    CHECK(found);

    CHECK_THROWS_AS(find_a_star_supercritical(make_param(0.1), 4000), RegimeError);
}

TEST_CASE("a_star from the traced Delta2") {
    const CutSystem& c0 = test_cuts(0.0);
    double a0 = find_a_star_from_trajectory(c0.delta2);
    CHECK(std::abs(a0 - (-0.441782)) < 1e-4);
    CHECK(std::abs(c0.a_star - a0) < 1e-9);

    // crossing sits at the arc-length midpoint
    const auto& d = c0.delta2;
    std::vector<double> s(d.size(), 0.0);
    for (std::size_t k = 1; k < d.size(); ++k) s[k] = s[k - 1] + std::abs(d[k] - d[k - 1]);
    double smid = 0.0;
    for (std::size_t k = 0; k + 1 < d.size(); ++k)
        if ((d[k].imag() < 0) != (d[k + 1].imag() < 0)) {
            double t = d[k].imag() / (d[k].imag() - d[k + 1].imag());
            smid = s[k] + t * (s[k + 1] - s[k]);
        }
    CHECK(std::abs(smid / s.back() - 0.5) < 1e-3);

    const CutSystem& c1 = test_cuts(0.1);
    CHECK(c1.a_star < c1.bp.a1);
    CHECK_THROWS_AS(find_a_star_from_trajectory({cplx(0, 1), cplx(1, 2)}), GeometryError);
}

TEST_CASE("cut system invariants") {
    const CutSystem& pre = test_cuts(0.1);
    CHECK(pre.regime == Regime::Precritical);
    CHECK(pre.delta1.lo == pre.bp.a1);
    CHECK(pre.delta1.hi == pre.bp.b1);
    CHECK(pre.delta3.empty());
    CHECK(std::abs(pre.delta2.front() - pre.bp.a2) < 1e-12);
    CHECK(std::abs(pre.delta2.back() - pre.bp.b2) < 1e-12);

    const CutSystem& sup = test_cuts(0.2);
    CHECK(sup.regime == Regime::Supercritical);
    CHECK(sup.delta1.lo == sup.a_star);
    CHECK(sup.delta3.lo == sup.bp.a1);
    CHECK(sup.delta3.hi == sup.a_star);
    int crossings = 0;
    for (std::size_t k = 0; k + 1 < sup.delta2.size(); ++k)
        if ((sup.delta2[k].imag() < 0) != (sup.delta2[k + 1].imag() < 0)) ++crossings;
    CHECK(crossings == 1);
}

TEST_CASE("real-line orderings") {
    for (double tau : {0.1, 0.2}) {
        const CutSystem& c = test_cuts(tau);
        double x1 = 0.5 * (c.delta1.lo + c.delta1.hi);
        XiTriple m = xi_labels(c, x1, Side::Plus);
        CHECK(std::abs(m[2].imag()) < 1e-10);
        CHECK(std::abs(m[1] - std::conj(m[0])) < 1e-8);
        CHECK(std::abs(m[0].imag()) > 1e-3);

        XiTriple r = xi_labels(c, c.bp.b_star + 0.5);
        CHECK(r[1].real() < r[2].real());
        CHECK(r[2].real() < r[0].real());

        XiTriple l = xi_labels(c, std::min(c.a_star, c.bp.a1) - 0.3);
        CHECK(l[2].real() < l[1].real());
        CHECK(l[1].real() < l[0].real());
    }
}

TEST_CASE("boundary relations on the cuts") {
    for (double tau : {0.1, 0.2}) {
        const CutSystem& c = test_cuts(tau);
        auto check_real = [&](Interval iv, int a, int b, int fixed) {
            for (int i = 1; i < 100; ++i) {
                double x = iv.lo + (iv.hi - iv.lo) * i / 100;
                XiTriple p = xi_labels(c, x, Side::Plus), m = xi_labels(c, x, Side::Minus);
                CHECK(std::abs(p[a] - m[b]) < 1e-7);
                CHECK(std::abs(p[b] - m[a]) < 1e-7);
                CHECK(std::abs(p[fixed] - m[fixed]) < 1e-7);
            }
        };
        check_real(c.delta1, 0, 1, 2);
        if (!c.delta3.empty()) check_real(c.delta3, 1, 2, 0);

        auto up = c.delta2_upper();
        int used = 0;
        for (std::size_t k = up.size() / 20; k + up.size() / 20 < up.size(); k += up.size() / 20) {
            cplx z = up[k];
            if (std::abs(z.imag()) < 1e-3) continue;
            XiTriple p = xi_labels(c, z, Side::Plus), m = xi_labels(c, z, Side::Minus);
            CHECK(std::abs(p[0] - m[2]) < 1e-6);
            CHECK(std::abs(p[2] - m[0]) < 1e-6);
            CHECK(std::abs(p[1] - m[1]) < 1e-6);
            ++used;
        }
        CHECK(used > 10);
    }
}

TEST_CASE("branch point coincidences") {
    for (double tau : {0.05, 0.1, 0.2}) {
        const CutSystem& c = test_cuts(tau);
        XiTriple t = xi_labels(c, c.bp.b1 + cplx(0, 1e-8));
        CHECK(std::abs(t[0] - t[1]) < 1e-3);
        CHECK(std::abs(t[0] - t[2]) > 1e-2);
        XiTriple u = xi_labels(c, c.bp.b2 + cplx(1e-8, 0));
        CHECK(std::abs(u[0] - u[2]) < 1e-3);

        XiTriple s = xi_labels(c, c.bp.b_star + cplx(0, 1e-9));
        if (tau < 1.0 / 12) CHECK(std::abs(s[0] - s[2]) < 1e-6);
        else CHECK(std::abs(s[1] - s[2]) < 1e-6);
    }
    const CutSystem& c = test_cuts(0.1);
    CHECK_THROWS_AS(xi_labels(c, c.bp.b1), SingularPointError);
    CHECK_THROWS_AS(xi_labels(c, 0.5 * (c.bp.a1 + c.bp.b1)), DomainError);
    CHECK_THROWS_AS(xi_on_sheet(c, {cplx(3, 3), 4}), DomainError);
}
