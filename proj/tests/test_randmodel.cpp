#include <doctest.h>

#include <cmath>
#include <numbers>

#include "epz/jensen.hpp"
#include "epz/lfunc.hpp"
#include "epz/qmc.hpp"
#include "epz/randmodel.hpp"

using namespace epz;

namespace {

const QuadForm kQ1{1, 0, 5};

QmcOptions small(int log2 = 13)
{
    QmcOptions q;
    q.log2_points = log2;
    q.replicates = 8;
    return q;
}

}  // namespace

TEST_CASE("scrambled Sobol points")
{
    ScrambledSobol a(5, 1), b(5, 1), c(5, 2);
    double x[5], y[5], z[5];
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        a.next(x);
        b.next(y);
        c.next(z);
        for (int k = 0; k < 5; ++k) {
            CHECK(x[k] >= 0.0);
            CHECK(x[k] < 1.0);
            CHECK(x[k] == y[k]);
            differs = differs || x[k] != z[k];
        }
    }
    CHECK(differs);
    CHECK_THROWS_AS(ScrambledSobol(0, 1), std::invalid_argument);
}

TEST_CASE("QMC integrates a product of cosines")
{
    // int prod (1 + cos 2 pi theta_k) = 1, int prod cos^2 = 2^-d
    const int d = 6;
    const auto rm = qmc_integrate(d, 2, small(12), [&](const double* th, double* acc) {
        double p1 = 1.0, p2 = 1.0;
        for (int k = 0; k < d; ++k) {
            const double c = std::cos(2.0 * std::numbers::pi * th[k]);
            p1 *= 1.0 + c;
            p2 *= c * c;
        }
        acc[0] += p1;
        acc[1] += p2;
    });
    CHECK(std::abs(rm.mean(0) - 1.0) < std::max(4.0 * rm.stderr_of(0), 1e-6));
    CHECK(std::abs(rm.mean(1) - std::pow(0.5, d)) < std::max(4.0 * rm.stderr_of(1), 1e-8));
    CHECK(rm.stderr_of(0) < 1e-2);
    const auto [m, se] = rm.combine([](const std::vector<double>& v) { return v[0] - v[1]; });
    CHECK(std::abs(m - (1.0 - std::pow(0.5, d))) < 4.0 * se + 1e-6);
}

TEST_CASE("QMC is reproducible across thread counts")
{
    QmcOptions a = small(10), b = small(10);
    b.threads = 3;
    auto f = [](const double* th, double* acc) { acc[0] += std::sin(7.0 * th[0]) * th[1]; };
    const auto ra = qmc_integrate(2, 1, a, f), rb = qmc_integrate(2, 1, b, f);
    CHECK(ra.mean(0) == rb.mean(0));
}

TEST_CASE("the torus model on the Kronecker curve reproduces the truncated product")
{
    const ClassGroup G = build_class_group(-20);
    for (int n : {1, 4, 8, 20}) {
        const TorusModel M = TorusModel::build(G, kQ1, n, 0.8);
        const TruncatedEpstein En(G, kQ1, n);
        for (double t : {0.0, 3.7, 125.25, 4321.5}) {
            const FuncValue v = En.eval({0.8, t}, true);
            const TorusSample s = sample(M, curve_point(M, t));
            CHECK(std::abs(s.E - v.f) < 1e-12 * std::max(1.0, std::abs(v.f)));
            CHECK(std::abs(s.Eprime - v.df) < 1e-11 * std::max(1.0, std::abs(v.df)));
        }
    }
}

TEST_CASE("ratio sample is consistent with the L factors")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 8, 0.9);
    const auto th = curve_point(M, 17.0);
    const TorusSample s = sample(M, th);
    const RatioSample r = sample_ratio(M, th.data());
    CHECK(std::abs(r.h - s.L[1] / s.L[0]) < 1e-13);
    const cplx hp = (s.Lprime[1] * s.L[0] - s.L[1] * s.Lprime[0]) / (s.L[0] * s.L[0]);
    CHECK(std::abs(r.hprime - hp) < 1e-12);
    CHECK(std::abs(ratio_target(M) + 1.0) < 1e-15);
    // E = a_1 L_1 + a_2 L_2 vanishes exactly where h = -a_1/a_2
    CHECK(std::abs(s.E - (M.a_list[0] * s.L[0] + M.a_list[1] * s.L[1])) < 1e-13);
}

TEST_CASE("sigma derivatives of one character")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 6, 1.1);
    const double h = 1e-5;
    const auto th = curve_point(M, 2.5);
    const LDerivs d = sample_L_derivs(M, 1, th.data());
    const LDerivs up = sample_L_derivs(M.at_sigma(1.1 + h), 1, th.data());
    const LDerivs dn = sample_L_derivs(M.at_sigma(1.1 - h), 1, th.data());
    CHECK(std::abs((up.L - dn.L) / (2 * h) - d.d1) < 1e-7);
    CHECK(std::abs((up.d1 - dn.d1) / (2 * h) - d.d2) < 1e-6);
}

TEST_CASE("single ramified factor moment has a closed form")
{
    // int |1 - chi p^{-sigma} e(theta)|^{-2} = 1 / (1 - p^{-2 sigma})
    for (double chi : {1.0, -1.0})
        for (double s : {0.6, 1.0, 2.0}) {
            const double want = 1.0 / (1.0 - std::pow(5.0, -2.0 * s));
            CHECK(single_factor_moment_quadrature(5.0, chi, s) == doctest::Approx(want).epsilon(1e-10));
        }
}

TEST_CASE("moment majorants hold")
{
    const ClassGroup G = build_class_group(-20);
    for (double s : {0.75, 1.5}) {
        const TorusModel M = TorusModel::build(G, kQ1, 8, s);
        const auto res = check_moment_bound(M, {{0, 0}, {1, 1}, {2, 2}, {2, 0}}, 0.5 * (s - 0.5), small());
        for (const auto& c : res) {
            CHECK(c.holds);
            CHECK(c.estimate <= c.euler_bound * (1 + 1e-9) + 3 * c.err);
            CHECK(c.euler_bound <= c.majorant * (1 + 1e-12));
        }
    }
    const TorusModel M = TorusModel::build(G, kQ1, 4, 0.75);
    CHECK_THROWS_AS(check_moment_bound(M, {{3, 0}}, 0.1, small()), std::invalid_argument);
    CHECK_THROWS_AS(check_moment_bound(M, {{0, 0}}, 0.3, small()), std::invalid_argument);
}

TEST_CASE("oscillatory integral of a cos(2 pi theta) is J_0(a)")
{
    for (double a : {0.5, 10.0, 80.0, 400.0}) {
        const double v = oscillatory_integral([a](double th) { return a * std::cos(2.0 * std::numbers::pi * th); }, a);
        CHECK(v == doctest::Approx(std::abs(std::cyl_bessel_j(0.0, a))).epsilon(1e-9));
    }
}

TEST_CASE("class sum condition")
{
    for (i64 D : {-20, -23, -84}) {
        const ClassSumReport r = check_class_sum_condition(build_class_group(D), 200, 9);
        CHECK(r.identity_max_dev < 1e-12);
        CHECK(r.automatic);
        CHECK(r.seventh_condition_met == r.trials);
    }
}

TEST_CASE("Fourier transform at the origin is the total weight")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 6, 1.0);
    const FourierSample f = estimate_nu_hat(M, 0.0, small());
    const auto rm = qmc_integrate(6, 1, small(), [&](const double* th, double* acc) {
        acc[0] += std::norm(sample(M, th).Eprime);
    });
    CHECK(std::abs(f.nu_hat - rm.mean(0)) < 1e-12 * rm.mean(0));
    CHECK(std::abs(f.nu_hat.imag()) < 1e-12);
}

TEST_CASE("density routes and positivity")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 8, 0.75);
    const QmcOptions q = small(15);
    const DensityEstimate e = estimate_density(M, 0.0, DensityMethod::WeightedKDE, q, DensityTarget::EAtX);
    const DensityEstimate r = estimate_density(M, 0.0, DensityMethod::WeightedKDE, q, DensityTarget::RatioAtMinusA);
    CHECK(std::abs(e.G - r.G) < 3.0 * (e.G_err + r.G_err));
    for (double s : {0.7, 0.9}) {
        const DensityEstimate d = estimate_density(TorusModel::build(G, kQ1, 20, s), 0.0, DensityMethod::WeightedKDE,
                                                   small(16));
        CHECK_MESSAGE(d.G > 3.0 * d.G_err, "sigma = " << s);
    }
    CHECK_THROWS_AS(estimate_density(TorusModel::build(G, kQ1, 1, 0.75), 0.0, DensityMethod::WeightedKDE, q),
                    std::invalid_argument);
}

TEST_CASE("Fourier inversion refuses without resolved decay")
{
    const ClassGroup G = build_class_group(-20);
    const TorusModel M = TorusModel::build(G, kQ1, 8, 1.5);
    CHECK_THROWS_AS(estimate_density(M, 0.0, DensityMethod::FourierInversion, small(10)), DomainError);
}

TEST_CASE("second sigma difference of the torus Jensen function is 2 pi G" * doctest::test_suite("slow"))
{
    const ClassGroup G = build_class_group(-20);
    // at sigma = 1.2 the origin is outside the support and both sides vanish
    const TorusModel M = TorusModel::build(G, kQ1, 6, 0.8);
    const QmcOptions q = small(16);
    const SecondDifference sd = torus_second_difference(M, 0.05, 0.0, q);
    const DensityEstimate d = estimate_density(M, 0.0, DensityMethod::WeightedKDE, q);
    const double rhs = 2.0 * std::numbers::pi * d.G, rerr = 2.0 * std::numbers::pi * d.G_err;
    CHECK(rhs > 1.0);
    CHECK(std::abs(sd.value - rhs) <= std::max(0.1 * std::abs(rhs), 3.0 * (sd.err + rerr)));
}
