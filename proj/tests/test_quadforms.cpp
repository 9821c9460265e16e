#include <doctest.h>

#include <numeric>
#include <random>

#include "epz/lfunc.hpp"
#include "epz/quadforms.hpp"

using namespace epz;

namespace {

int brute_class_number(i64 D)
{
    int h = 0;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            const i64 num = b * b - D;
            if (num % (4 * a)) continue;
            const i64 c = num / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

i64 powmod(i64 b, i64 e, i64 m)
{
    i64 r = 1;
    b %= m;
    if (b < 0) b += m;
    for (; e; e >>= 1, b = b * b % m)
        if (e & 1) r = r * b % m;
    return r;
}

}  // namespace

TEST_CASE("D = -20 class group")
{
    const ClassGroup G = build_class_group(-20);
    CHECK(G.h == 2);
    CHECK(G.w == 2);
    REQUIRE(G.classes.size() == 2);
    CHECK(G.classes[0] == QuadForm{1, 0, 5});
    CHECK(G.classes[1] == QuadForm{2, 2, 3});
    CHECK(epstein_coefficients(G, {1, 0, 5}).a_list == std::vector<double>{1.0, 1.0});
    CHECK(epstein_coefficients(G, {2, 2, 3}).a_list == std::vector<double>{1.0, -1.0});
    // (3,2,2) is equivalent to (2,-2,3) ~ (2,2,3)
    CHECK(G.index_of({3, 2, 2}) == 1);
}

TEST_CASE("units and small discriminants")
{
    CHECK(build_class_group(-3).w == 6);
    CHECK(build_class_group(-4).w == 4);
    CHECK(build_class_group(-23).h == 3);
    CHECK(build_class_group(-23).structure == std::vector<int>{3});
    CHECK(build_class_group(-84).structure.size() == 2);  // (Z/2)^2
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(build_class_group(-12), DomainError);
    CHECK_THROWS_AS(build_class_group(5), DomainError);
    CHECK_THROWS_AS(reduce({1, 3, 1}), DomainError);
    CHECK_THROWS_AS(classify_prime(build_class_group(-20), 9), DomainError);
    const ClassGroup G = build_class_group(-20);
    CHECK_THROWS_AS(epstein_coefficients(G, {1, 0, 6}), DomainError);
}

TEST_CASE("reduction is idempotent and preserves the discriminant")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> u(-1000, 1000);
    int tried = 0;
    while (tried < 5000) {
        const QuadForm f{u(rng), u(rng), u(rng)};
        if (!f.positive_definite()) continue;
        ++tried;
        const QuadForm r = reduce(f);
        CHECK(r.is_reduced());
        CHECK(r.disc() == f.disc());
        CHECK(reduce(r) == r);
    }
}

TEST_CASE("class numbers match enumeration for fundamental -500 < D < 0")
{
    int checked = 0;
    for (i64 D = -3; D > -500; --D) {
        if (!is_fundamental_discriminant(D)) continue;
        const ClassGroup G = build_class_group(D);
        CHECK_MESSAGE(G.h == brute_class_number(D), "D = " << D);
        CHECK(int(G.classes.size()) == G.h);
        int prod = 1;
        for (int o : G.structure) prod *= o;
        CHECK(prod == G.h);
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("composition table is a group law")
{
    for (i64 D : {-20, -23, -84, -71, -455}) {
        const ClassGroup G = build_class_group(D);
        for (int i = 0; i < G.h; ++i) {
            CHECK(G.table[0][i] == i);
            CHECK(G.table[i][G.inverse(i)] == 0);
            for (int j = 0; j < G.h; ++j) {
                CHECK(G.table[i][j] == G.table[j][i]);
                CHECK(G.index_of(compose(G.classes[i], G.classes[j])) == G.table[i][j]);
            }
        }
    }
}

TEST_CASE("character orthogonality")
{
    for (i64 D : {-20, -23, -84, -71, -455, -4}) {
        const ClassGroup G = build_class_group(D);
        const auto chi = characters(G);
        REQUIRE(int(chi.size()) == G.h);
        for (int k = 0; k < G.h; ++k) CHECK(std::abs(chi[0][k] - 1.0) < 1e-15);
        for (int a = 0; a < G.h; ++a)
            for (int b = 0; b < G.h; ++b) {
                cplx s = 0.0;
                for (int k = 0; k < G.h; ++k) s += chi[a][k] * std::conj(chi[b][k]);
                CHECK(std::abs(s - (a == b ? double(G.h) : 0.0)) < 1e-12);
            }
        // multiplicative on the composition table
        for (const auto& c : chi)
            for (int i = 0; i < G.h; ++i)
                for (int j = 0; j < G.h; ++j) CHECK(std::abs(c[G.table[i][j]] - c[i] * c[j]) < 1e-12);
    }
}

TEST_CASE("Kronecker symbol agrees with Euler's criterion")
{
    for (i64 D : {-20, -23, -84, -71, -455, -3, -4, -8}) {
        for (i64 p : primes_up_to(10000)) {
            if (p == 2 || D % p == 0) continue;
            const i64 e = powmod(D, (p - 1) / 2, p);
            const int euler = e == 1 ? 1 : -1;
            CHECK(kronecker(D, p) == euler);
        }
    }
}

TEST_CASE("splitting types follow the Kronecker symbol")
{
    for (i64 D : {-20, -23, -84}) {
        const ClassGroup G = build_class_group(D);
        for (i64 p : primes_up_to(3000)) {
            const PrimeLocalData pd = classify_prime(G, p);
            const int k = kronecker(D, p);
            if (k == 1) {
                CHECK(pd.split_type == SplitType::Split);
                REQUIRE(pd.class_index.has_value());
                // a form of that class represents p
                const QuadForm& f = G.classes[std::size_t(*pd.class_index)];
                CHECK(rep_count_oracle(f, p) > 0);
            } else if (k == -1) {
                CHECK(pd.split_type == SplitType::Inert);
            } else {
                CHECK(pd.split_type == SplitType::Ramified);
            }
        }
    }
}

TEST_CASE("D = -20 split primes are equidistributed over the two classes")
{
    const ClassGroup G = build_class_group(-20);
    long n[2] = {0, 0};
    for (i64 p : primes_up_to(1000000)) {
        const PrimeLocalData pd = classify_prime(G, p);
        if (pd.split_type == SplitType::Split) ++n[*pd.class_index];
    }
    const double f0 = double(n[0]) / double(n[0] + n[1]);
    CHECK(std::abs(f0 - 0.5) <= 0.02);
}

TEST_CASE("character pairs")
{
    const ClassGroup G = build_class_group(-23);
    const auto chi = characters(G);
    const auto reps = character_pair_representatives(chi);
    CHECK(reps.size() == 2);  // principal and one complex pair
    const auto coef = epstein_coefficients(G, G.classes[0]);
    CHECK(coef.J() == 2);
}
