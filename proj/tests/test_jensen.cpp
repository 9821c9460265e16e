#include <doctest.h>

#include <cmath>
#include <numbers>

#include "epz/jensen.hpp"
#include "epz/lfunc.hpp"
#include "epz/zeros.hpp"

using namespace epz;

namespace {

const QuadForm kQ1{1, 0, 5}, kQ2{2, 2, 3};

// 1 + 3 * 2^{-s}: phi(sigma) = max(0, log 3 - sigma log 2), zeros on sigma = log_2 3
class TwoTerm : public Evaluator {
public:
    FuncValue eval(cplx s, bool deriv) const override
    {
        const double l2 = std::log(2.0);
        const cplx x = 3.0 * std::exp(-s * l2);
        FuncValue v;
        v.f = 1.0 + x;
        if (deriv) v.df = -l2 * x;
        v.err = 1e-15;
        v.derr = 1e-15;
        return v;
    }
};

std::vector<double> grid(double lo, double hi, double st)
{
    std::vector<double> g;
    for (int i = 0; lo + i * st <= hi + 1e-9; ++i) g.push_back(lo + i * st);
    return g;
}

}  // namespace

TEST_CASE("two-term Dirichlet polynomial: Jensen function, linearity and zero frequency")
{
    const TwoTerm f;
    const double kink = std::log(3.0) / std::log(2.0);
    JensenOptions o;
    const double T = 2.0 * std::numbers::pi / std::log(2.0) * 40.0 + 1.0;  // whole periods
    const JensenProfile p = jensen_profile(f, grid(1.05, 2.5, 0.05), T, 0.0, o);
    for (std::size_t i = 0; i < p.sigma_grid.size(); ++i) {
        const double s = p.sigma_grid[i];
        const double want = std::max(0.0, std::log(3.0) - s * std::log(2.0));
        if (std::abs(s - kink) > 0.06) CHECK_MESSAGE(std::abs(p.phi[i] - want) < 2e-3, "sigma = " << s);
    }
    const LinearityReport lr = detect_linearity(p, 1.05);
    REQUIRE(lr.intervals.size() == 2);
    CHECK(lr.intervals[0].sigma_hi < kink);
    CHECK(lr.intervals[1].sigma_lo > kink);
    REQUIRE(lr.intervals[0].n.has_value());
    REQUIRE(lr.intervals[1].n.has_value());
    CHECK(*lr.intervals[0].n == 2);
    CHECK(*lr.intervals[1].n == 1);
    // zeros at sigma = log_2 3, spaced 2 pi / log 2 in t
    const ZeroFrequency zf = zero_frequency(p, 1.3, 1.9);
    const double want = std::log(2.0) / (2.0 * std::numbers::pi);
    CHECK(std::abs(zf.value - want) < std::max(0.02 * want, 2.0 * zf.err));
    CHECK(zf.lo <= zf.hi + 1e-12);
    CHECK_THROWS_AS(zero_frequency(p, 1.05, 1.9), std::invalid_argument);
}

TEST_CASE("phi at sigma = 8 follows the leading Dirichlet term")
{
    const JensenValue a = jensen_time_average(EpsteinEvaluator(kQ1), 8.0, 500.0, 0.0);
    CHECK(std::abs(a.phi - std::log(2.0)) < 1e-3);
    const JensenValue b = jensen_time_average(EpsteinEvaluator(kQ2), 8.0, 500.0, 0.0);
    CHECK(std::abs(b.phi - (-8.0 * std::log(2.0) + std::log(2.0))) < 1e-3);
}

TEST_CASE("measured Jensen profiles are convex up to the boundary flux")
{
    const JensenProfile p = derivative_profile(jensen_profile(EpsteinEvaluator(kQ1), grid(0.6, 2.0, 0.2), 200.0, 0.0));
    for (std::size_t i = 1; i + 1 < p.sigma_grid.size(); ++i)
        CHECK_MESSAGE(p.d2phi[i] >= -3.0 * p.d2phi_err[i], "i = " << i);
}

TEST_CASE("time average of a truncated product equals the torus average")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 4, 1.5);
    QmcOptions q;
    q.log2_points = 14;
    const WeylCheck w = check_weyl_log(M, 1000.0, q);
    CHECK(std::abs(w.time_average - w.torus_average) < 3.0 * (w.time_err + w.torus_err) + 1e-3);
}

TEST_CASE("torus Jensen value: ratio form equals the E form at x = 0")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 6, 0.8);
    QmcOptions q;
    q.log2_points = 14;
    const JensenValue a = jensen_torus(M, 0.0, q), b = jensen_torus(M, 0.0, q, true);
    CHECK(std::abs(a.phi - b.phi) < 3.0 * (a.err + b.err) + 1e-6);
    CHECK_THROWS_AS(jensen_torus(M, 0.3, q, true), std::invalid_argument);
}

TEST_CASE("argument checks")
{
    const TwoTerm f;
    CHECK_THROWS_AS(jensen_time_average(f, 1.5, 0.5, 0.0), std::invalid_argument);
    JensenProfile p;
    p.sigma_grid = {1.1, 1.2, 1.4};
    p.phi = {0, 0, 0};
    p.phi_err = {0, 0, 0};
    CHECK_THROWS_AS(derivative_profile(p), std::invalid_argument);
    CHECK_THROWS_AS(detect_linearity(p, 0.9), std::invalid_argument);
}

TEST_CASE("Jensen average does not depend on T0" * doctest::test_suite("slow"))
{
    const EpsteinEvaluator E(kQ1);
    JensenOptions a, b;
    a.T0 = 1.0;
    b.T0 = 10.0;
    const JensenValue va = jensen_time_average(E, 2.0, 5000.0, 0.0, a);
    const JensenValue vb = jensen_time_average(E, 2.0, 5000.0, 0.0, b);
    CHECK(std::abs(va.phi - vb.phi) < va.err + vb.err);
}

TEST_CASE("truncated Jensen functions approach the full one" * doctest::test_suite("slow"))
{
    const ClassGroup G = build_class_group(-20);
    const JensenValue full = jensen_time_average(EpsteinEvaluator(kQ1), 1.5, 2000.0, 0.0);
    QmcOptions q;
    q.log2_points = 16;
    double prev = 1e300;
    for (int n : {4, 6, 8}) {
        const JensenValue t = jensen_torus(TorusModel::build(G, kQ1, n, 1.5), 0.0, q);
        const double d = std::abs(t.phi - full.phi);
        CHECK_MESSAGE(d < prev + 3.0 * (t.err + full.err), "n = " << n);
        prev = d;
    }
}

TEST_CASE("zero frequency right of sigma = 1 matches the direct count" * doctest::test_suite("slow"))
{
    const EpsteinEvaluator E(kQ1);
    const JensenProfile p = jensen_profile(E, grid(1.0, 1.45, 0.05), 2000.0, 0.0);
    const ZeroFrequency zf = zero_frequency(p, 1.05, 1.4);
    ZeroOptions o;
    o.localize = false;
    const double direct = count_strip(E, 1.05, 1.4, 4000.0, o).winding_count / 4000.0;
    CHECK(std::abs(zf.value - direct) <= std::max(0.2 * direct, 2.0 * zf.err));
}
