#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "epz/epstein.hpp"
#include "oracles/epstein_oracle.hpp"

using namespace epz;

namespace {
const QuadForm kQ1{1, 0, 5}, kQ2{2, 2, 3};
}

TEST_CASE("E(s, Q) against frozen genus-character values")
{
    const EpsteinEvaluator E1(kQ1), E2(kQ2);
    for (const auto& v : oracle::kValues) {
        const cplx s(v.sigma, v.t);
        const FuncValue a = E1.eval(s), b = E2.eval(s);
        const double scale = std::max(1.0, std::abs(cplx(v.e1_re, v.e1_im)));
        CHECK_MESSAGE(std::abs(a.f - cplx(v.e1_re, v.e1_im)) < 1e-10 * scale, "s = " << s);
        CHECK_MESSAGE(std::abs(b.f - cplx(v.e2_re, v.e2_im)) < 1e-10 * scale, "s = " << s);
        // the reported bound covers the actual error
        CHECK(std::abs(a.f - cplx(v.e1_re, v.e1_im)) <= a.err + 1e-14 * scale);
    }
}

TEST_CASE("conjugate symmetry")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> us(-1.0, 3.0), ut(0.0, 200.0);
    for (const QuadForm& Q : {kQ1, kQ2, QuadForm{2, 1, 3}}) {
        const EpsteinEvaluator E(Q);
        for (int i = 0; i < 40; ++i) {
            const cplx s(us(rng), ut(rng));
            const cplx a = E.value(s), b = E.value(std::conj(s));
            CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("functional equation on a 200-point grid")
{
    const EpsteinEvaluator E(kQ1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 10; ++j)
            worst = std::max(worst, check_functional_equation(E, cplx(-1.0 + 3.0 * (i + 0.5) / 20.0, 100.0 * j / 9.0)));
    CHECK(worst < 1e-8);
}

TEST_CASE("fast evaluator agrees with the lattice oracle within the combined bound")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> us(1.3, 3.0), ut(-50.0, 50.0);
    for (const QuadForm& Q : {kQ1, kQ2}) {
        const EpsteinEvaluator E(Q);
        for (int i = 0; i < 25; ++i) {
            const cplx s(us(rng), ut(rng));
            const FuncValue f = E.eval(s);
            const OracleValue o = eval_lattice_oracle(Q, s, 60);
            CHECK(std::abs(f.f - o.value) <= f.err + o.err);
            CHECK(std::abs(f.f - o.value) < 1e-8);
        }
    }
}

TEST_CASE("oracle box sum converges toward the corrected value")
{
    const cplx s(2.0, 3.0);
    const cplx full = eval_lattice_oracle(kQ1, s, 40).value;
    const double e20 = std::abs(lattice_box_sum(kQ1, s, 20) - full);
    const double e80 = std::abs(lattice_box_sum(kQ1, s, 80) - full);
    CHECK(e80 < e20);
}

TEST_CASE("derivative matches a central difference")
{
    const EpsteinEvaluator E(kQ2);
    const double h = 1e-5;
    for (cplx s : {cplx(0.5, 14.0), cplx(2.0, 1.0), cplx(-0.5, 40.0)}) {
        const cplx num = (E.value(s + h) - E.value(s - h)) / (2.0 * h);
        CHECK(std::abs(num - E.derivative(s)) < 1e-6 * std::max(1.0, std::abs(num)));
    }
}

TEST_CASE("residue at s = 1 is class invariant")
{
    // (s - 1) E(s, Q) -> 2 pi / sqrt|D|
    const double want = 2.0 * std::numbers::pi / std::sqrt(20.0);
    double prev1 = 0.0;
    for (int k = 3; k <= 6; ++k) {
        const double e = std::pow(10.0, -k);
        const cplx s(1.0 + e, 0.0);
        const cplx r1 = e * EpsteinEvaluator(kQ1).value(s), r2 = e * EpsteinEvaluator(kQ2).value(s);
        CHECK(std::abs(r1 - r2) < 10 * e);
        CHECK(std::abs(r1 - want) < 10 * e);
        if (k > 3) CHECK(std::abs(r1.real() - want) < std::abs(prev1 - want) + 1e-12);
        prev1 = r1.real();
    }
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(EpsteinEvaluator(QuadForm{1, 3, 1}), DomainError);
    CHECK_THROWS_AS(EpsteinEvaluator(kQ1).eval(cplx(1.0, 0.0)), PoleError);
    CHECK_THROWS_AS(eval_lattice_oracle(kQ1, cplx(1.0, 2.0), 40), std::domain_error);
}

TEST_CASE("value at s = 2 for x^2 + y^2 is 4 zeta(2) L(2, chi_-4)")
{
    const double catalan = 0.915965594177219015;
    const double want = 4.0 * std::numbers::pi * std::numbers::pi / 6.0 * catalan;
    CHECK(EpsteinEvaluator(QuadForm{1, 0, 1}).value(2.0).real() == doctest::Approx(want).epsilon(1e-13));
}
