#include <doctest.h>

#include <cmath>
#include <random>

#include "epz/zeros.hpp"
#include "oracles/epstein_oracle.hpp"

using namespace epz;

namespace {

const QuadForm kQ1{1, 0, 5}, kQ2{2, 2, 3};

// (s - z1)(s - z2)(s - z3)
class Cubic : public Evaluator {
public:
    cplx z[3] = {cplx(0.3, 1.2), cplx(0.7, 1.9), cplx(0.31, 1.21)};
    FuncValue eval(cplx s, bool deriv) const override
    {
        FuncValue v;
        const cplx a = s - z[0], b = s - z[1], c = s - z[2];
        v.f = a * b * c;
        if (deriv) v.df = b * c + a * c + a * b;
        v.err = 1e-15 * (1.0 + std::abs(v.f));
        v.derr = v.err;
        return v;
    }
};

void random_bisections(const Evaluator& E, std::uint64_t seed, int n)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < n) {
        const double w = 0.2 + 2.0 * u(rng), h = 1.0 + 6.0 * u(rng);
        const double s1 = -1.0 + (3.0 - w) * u(rng), t1 = 0.1 + (30.0 - h) * u(rng);
        const double mid = s1 + (0.2 + 0.6 * u(rng)) * w;
        try {
            const int all = winding_count(E, {s1, s1 + w, t1, t1 + h});
            const int left = winding_count(E, {s1, mid, t1, t1 + h});
            const int right = winding_count(E, {mid, s1 + w, t1, t1 + h});
            CHECK(all == left + right);
            CHECK(all >= 0);
            ++done;
        } catch (const BoundaryZero&) {
        }
    }
}

void check_zero_set(const EpsteinEvaluator& E, const Rectangle& R)
{
    const StripCount sc = count_rectangle(E, R);
    int mult = 0;
    for (const auto& z : sc.zero_list) {
        CHECK(z.certified);
        CHECK(z.residual < 1e-9);
        CHECK(z.multiplicity == 1);
        CHECK(R.contains(z.location));
        mult += z.multiplicity;
        if (std::abs(z.location.real() - 0.5) > 1e-6) {
            const cplx partner(1.0 - z.location.real(), z.location.imag());
            double best = 1e300;
            for (const auto& w : sc.zero_list) best = std::min(best, std::abs(w.location - partner));
            CHECK(best < 1e-6);
        }
    }
    CHECK(mult == sc.winding_count);
}

}  // namespace

TEST_CASE("polynomial zeros are counted and located")
{
    const Cubic f;
    CHECK(winding_count(f, {0.0, 1.0, 1.0, 2.0}) == 3);
    CHECK(winding_count(f, {0.5, 1.0, 1.0, 2.0}) == 1);
    CHECK(winding_circle(f, f.z[1], 0.1) == 1);
    CHECK(winding_circle(f, cplx(0.3, 1.2), 0.05) == 2);  // the close pair
    const auto zs = localize_zeros(f, {0.0, 1.0, 1.0, 2.0}, 3);
    REQUIRE(zs.size() == 3);
    for (const cplx& z : f.z) {
        double best = 1e300;
        for (const auto& r : zs) best = std::min(best, std::abs(r.location - z));
        CHECK(best < 1e-10);
    }
}

TEST_CASE("frozen off-line zeros of x^2 + 5y^2")
{
    const EpsteinEvaluator E(kQ1);
    for (const auto& z : oracle::kZerosQ1) {
        const Rectangle R{z.re - 0.02, z.re + 0.02, z.im - 0.05, z.im + 0.05};
        const StripCount sc = count_rectangle(E, R);
        CHECK(sc.winding_count == 1);
        REQUIRE(sc.zero_list.size() == 1);
        CHECK(std::abs(sc.zero_list[0].location - cplx(z.re, z.im)) < 1e-9);
        const ZeroRecord r = refine_zero(E, cplx(z.re + 1e-3, z.im - 1e-3));
        CHECK(r.certified);
        CHECK(std::abs(r.location - cplx(z.re, z.im)) < 1e-9);
    }
}

TEST_CASE("winding additivity under vertical bisection")
{
    random_bisections(EpsteinEvaluator(kQ1), 101, 12);
    random_bisections(EpsteinEvaluator(kQ2), 202, 12);
}

TEST_CASE("certified zeros are isolated, accurate and paired")
{
    check_zero_set(EpsteinEvaluator(kQ1), {-1.0, 2.0, 0.1, 30.0});
    check_zero_set(EpsteinEvaluator(kQ2), {-1.0, 2.0, 0.1, 30.0});
}

TEST_CASE("boundary through a zero is rejected")
{
    const EpsteinEvaluator E(kQ1);
    const auto& z = oracle::kZerosQ1[0];
    CHECK_THROWS_AS(winding_count(E, {z.re, z.re + 0.1, z.im - 0.5, z.im + 0.5}), BoundaryZero);
    // the perturbing driver recovers
    CHECK(count_rectangle(E, {z.re, z.re + 0.1, z.im - 0.5, z.im + 0.5}).winding_count == 1);
}

TEST_CASE("strip argument checks")
{
    const EpsteinEvaluator E(kQ1);
    CHECK_THROWS_AS(count_strip(E, 0.9, 1.1, 10.0), std::domain_error);
    CHECK_THROWS_AS(find_near_period(E, 0.9, 2.0, 0.1, 10.0), std::domain_error);
}

TEST_CASE("strip counts: per-window bookkeeping")
{
    const EpsteinEvaluator E(kQ1);
    ZeroOptions o;
    o.localize = false;
    const StripCount sc = count_strip(E, 0.6, 0.9, 60.0, o);
    int sum = 0;
    for (int c : sc.window_counts) sum += c;
    CHECK(sum == sc.winding_count);
    REQUIRE(!sc.window_tops.empty());
    CHECK(sc.window_tops.back() == doctest::Approx(60.0));
    // localized run agrees
    const StripCount loc = count_strip(E, 0.6, 0.9, 60.0);
    CHECK(loc.winding_count == sc.winding_count);
    CHECK(int(loc.zero_list.size()) == sc.winding_count);
}

TEST_CASE("line scan only keeps zeros near the line")
{
    const EpsteinEvaluator E(kQ1);
    const LineScan ls = scan_line(E, 0.5, 40.0, 1e-3);
    CHECK(!ls.zeros.empty());
    for (const auto& z : ls.zeros) CHECK(std::abs(z.location.real() - 0.5) < 1e-3);
    CHECK(ls.ratio == doctest::Approx(ls.zeros.size() / 40.0));
}

TEST_CASE("near periods in a half plane of absolute convergence")
{
    const EpsteinEvaluator E(kQ1);
    const auto np = find_near_period(E, 2.0, 3.0, 0.2, 200.0);
    for (std::size_t i = 0; i < np.size(); ++i) {
        CHECK(np[i].max_diff < 0.2);
        if (i) CHECK(np[i].t0 - np[i - 1].t0 >= 1.0 - 1e-9);
    }
    CHECK(domination_abscissa(kQ1) > 1.0);
    CHECK(domination_abscissa(kQ2) > 1.0);
}

TEST_CASE("N(T)/T stabilizes across doublings" * doctest::test_suite("slow"))
{
    const EpsteinEvaluator E(kQ1);
    ZeroOptions o;
    o.localize = false;
    double prev = 0.0;
    for (double T : {500.0, 1000.0, 2000.0, 4000.0}) {
        const double r = count_strip(E, 0.6, 0.9, T, o).winding_count / T;
        CHECK(r > 0.0);
        if (prev > 0) CHECK_MESSAGE(std::abs(r - prev) / prev < 0.25, "T = " << T);
        prev = r;
    }
}
