#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace epz {

using i64 = std::int64_t;
using cplx = std::complex<double>;

struct QuadForm {
    i64 a = 1, b = 0, c = 1;

    i64 disc() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return a > 0 && disc() < 0; }
    bool is_reduced() const;
    i64 operator()(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
    double value(double x, double y) const
    {
        return double(a) * x * x + double(b) * x * y + double(c) * y * y;
    }
    std::string str() const;
    friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

QuadForm reduce(const QuadForm& f);

// Gauss composition followed by reduction.
QuadForm compose(const QuadForm& f, const QuadForm& g);

bool is_fundamental_discriminant(i64 D);

// Root of unity exp(2 pi i num/den), kept as a reduced fraction.
struct RootOfUnity {
    i64 num = 0, den = 1;
    cplx value() const;
    bool is_real() const { return den <= 2; }
    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity conj() const;
    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

struct ClassCharacter {
    std::vector<RootOfUnity> exact;
    std::vector<cplx> values;
    bool is_real = true;

    cplx operator[](std::size_t k) const { return values[k]; }
    double re(std::size_t k) const { return values[k].real(); }
};

struct ClassGroup {
    i64 D = 0;
    int h = 0;
    int w = 0;
    std::vector<QuadForm> classes;            // principal first
    std::vector<std::vector<int>> table;      // composition table
    std::vector<int> structure;               // cyclic factor orders
    std::vector<int> generators;              // class index per cyclic factor
    std::vector<std::vector<int>> exponents;  // class -> exponent vector

    int index_of(const QuadForm& f) const;  // f need not be reduced
    int inverse(int k) const;
    int order(int k) const;
};

ClassGroup build_class_group(i64 D);

// All h characters; the principal character comes first.
std::vector<ClassCharacter> characters(const ClassGroup& G);

enum class SplitType { Ramified, Inert, Split };

struct PrimeLocalData {
    i64 p = 0;
    SplitType split_type = SplitType::Inert;
    std::optional<int> class_index;  // class of a prime above p, up to inversion
};

int kronecker(i64 D, i64 p);
bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
std::vector<i64> first_primes(int n);

PrimeLocalData classify_prime(const ClassGroup& G, i64 p);

struct EpsteinCoefficients {
    std::vector<double> a_list;
    std::vector<ClassCharacter> chars;
    std::vector<int> char_index;  // position in characters(G)
    int J() const { return int(a_list.size()); }
};

// One representative per conjugate pair, real characters listed singly.
std::vector<int> character_pair_representatives(const std::vector<ClassCharacter>& chi);

EpsteinCoefficients epstein_coefficients(const ClassGroup& G, const QuadForm& Q);

nlohmann::json to_json(const ClassGroup& G, const std::vector<ClassCharacter>& chi);

std::string to_string(SplitType t);

}  // namespace epz
