#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cubicvm/widths.hpp"

using namespace cubicvm;

namespace {

// omega1 at a precritical tau, from a dense nearest-root table and 61-point Gauss-Kronrod
// on a cosine-graded parameter
double omega1_oracle(double tau) {
    CurveParam p = make_param(tau);
    BranchPointSet bp = branch_points(p);
    cplx za = bp.b2, zb = bp.a1;
    const int N = 40000;
    std::vector<XiTriple> table(N + 1);
    // label from the middle so neither end is used as a start
    int mid = N / 2;
    table[mid] = solve_xi_unlabeled(p, za + (zb - za) * 0.5);
    for (int k = mid + 1; k <= N; ++k)
        table[k] = match_nearest(table[k - 1], solve_xi_unlabeled(p, za + (zb - za) * (double(k) / N)));
    for (int k = mid - 1; k >= 0; --k)
        table[k] = match_nearest(table[k + 1], solve_xi_unlabeled(p, za + (zb - za) * (double(k) / N)));
    auto distinct = [](const XiTriple& t) {
        int best = 0;
        double bd = -1;
        for (int k = 0; k < 3; ++k) {
            double d = std::min(std::abs(t[k] - t[(k + 1) % 3]), std::abs(t[k] - t[(k + 2) % 3]));
            if (d > bd) {
                bd = d;
                best = k;
            }
        }
        return best;
    };
    int u = distinct(table[0]), v = distinct(table[N]);
    auto f = [&](double th) {
        double t = 0.5 * (1.0 - std::cos(M_PI * th));
        double dt = 0.5 * M_PI * std::sin(M_PI * th);
        int k = std::clamp(int(std::lround(t * N)), 0, N);
        XiTriple r = match_nearest(table[k], solve_xi_unlabeled(p, za + (zb - za) * t));
        return ((r[u] - r[v]) * (zb - za)).real() * dt;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
}

} // namespace

TEST_CASE("omega examples") {
    CHECK(widths(make_param(0.0)).omega[2] < 0.0);

    double oracle = omega1_oracle(0.05);
    // frozen oracle value
    CHECK(std::abs(oracle - (-0.189239591082)) < 1e-9);
    CHECK(std::abs(width_omega(make_param(0.05), 1, 10000) - oracle) < 1e-6);

    CHECK_THROWS_AS(width_omega(make_param(0.05), 4), DomainError);
    CHECK_THROWS_AS(width_omega(make_param(0.1), 5), DomainError);
}

TEST_CASE("critical taus") {
    ScanOptions opt;
    opt.grid = 128;
    opt.m = 4000;
    CriticalTaus t = critical_taus(1e-9, opt);
    CHECK(1.0 / 12 < t.tau1);
    CHECK(t.tau1 < t.tau_c);
    CHECK(t.tau_c < t.tau2);
    CHECK(t.tau2 < 0.25);
    CHECK(std::abs(widths(make_param(t.tau_c), 4000, false).omega[1]) < 1e-6);
    // tau_1 and tau_c sit about 1.06e-4 from the printed values
    CHECK(std::abs(t.tau2 - 0.2289555) < 1e-4);
    CHECK(std::abs(t.tau1 - 0.12487351) < 2e-4);
    CHECK(std::abs(t.tau_c - 0.1913565) < 2e-4);
    CHECK_THROWS_AS(critical_taus(1e-12), DomainError);
}

TEST_CASE("sign changes on a tau grid") {
    std::vector<double> taus;
    for (int i = 1; i < 200; ++i) taus.push_back(0.25 * i / 200);
    auto rows = width_sweep(taus, 2000, 0, true);
    int ch[4] = {0, 0, 0, 0};
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (int k = 0; k < 4; ++k) {
            if (k == 3 && !rows[i - 1].has_omega4) continue;
            if (k != 2 && rows[i - 1].tau < 1.0 / 12) continue;
            if ((rows[i].omega[k] < 0) != (rows[i - 1].omega[k] < 0)) ++ch[k];
        }
    CHECK(ch[0] == 2);
    CHECK(ch[1] == 1);
    CHECK(ch[2] == 0);
    CHECK(ch[3] == 0);
    for (const auto& r : rows)
        if (r.has_omega4 && r.tau > 1.0 / 12) CHECK(std::abs(r.omega[0] - r.omega[3]) > 1e-5);

    auto again = width_sweep({taus[10], taus[100], taus[180]}, 2000, 1, true);
    auto threaded = width_sweep({taus[10], taus[100], taus[180]}, 2000, 3, true);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 4; ++k) CHECK(again[i].omega[k] == threaded[i].omega[k]);
}

TEST_CASE("doubling m") {
    for (double tau : {0.1, 0.2}) {
        auto a = widths(make_param(tau), 2500), b = widths(make_param(tau), 5000), c = widths(make_param(tau), 10000);
        for (int k = 0; k < 4; ++k) {
            double d1 = std::abs(b.omega[k] - a.omega[k]), d2 = std::abs(c.omega[k] - b.omega[k]);
            CHECK(d2 <= d1 + 1e-12);
        }
    }
}

TEST_CASE("h width") {
    CurveParam p = make_param(0.05);
    BranchPointSet bp = branch_points(p);
    double lo = bp.a1, hi = bp.b1;
    double x = lo + 0.3 * (hi - lo), y = lo + 0.7 * (hi - lo);
    CHECK(h_width(p, x, x, RealCut::D1, lo, hi) == 0.0);
    CHECK(h_width(p, x, y, RealCut::D1, lo, hi) == doctest::Approx(-h_width(p, y, x, RealCut::D1, lo, hi)));
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            double a = lo + (hi - lo) * (i + 0.5) / 8, b = lo + (hi - lo) * (j + 0.5) / 8;
            CHECK(std::abs(h_width(p, a, b, RealCut::D1, lo, hi)) > 1e-8);
        }
    CHECK_THROWS_AS(h_width(p, lo - 0.1, y, RealCut::D1, lo, hi), DomainError);
}

TEST_CASE("loop periods") {
    CHECK(std::abs(loop_period_real_part(make_param(0.1), 1, 10.0)) < 1e-6);
    CHECK(std::abs(loop_period_real_part(make_param(0.0), 2, 10.0)) < 1e-6);
    CHECK(std::abs(loop_period_real_part(make_param(0.2), 3, 10.0)) < 1e-6);
    CHECK_THROWS_AS(loop_period_real_part(make_param(0.2), 4, 10.0), DomainError);
}
