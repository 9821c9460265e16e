#include "epz/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace epz {

namespace {

using i128 = __int128;

i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 mod_pos(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// returns g = gcd(a,b) and x,y with a x + b y = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floor_div(a, b);
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

i64 mulmod(i64 a, i64 b, i64 m) { return i64((i128)a * b % m); }

i64 powmod(i64 b, i64 e, i64 m)
{
    i64 r = 1 % m;
    b = mod_pos(b, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// square root of a modulo odd prime p, a a quadratic residue
i64 sqrt_mod(i64 a, i64 p)
{
    a = mod_pos(a, p);
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

bool squarefree(i64 n)
{
    n = std::abs(n);
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % (d * d) == 0) return false;
        if (n % d == 0) n /= d;
    }
    return true;
}

}  // namespace

bool QuadForm::is_reduced() const
{
    if (!positive_definite()) return false;
    if (std::abs(b) > a || a > c) return false;
    if ((std::abs(b) == a || a == c) && b < 0) return false;
    return true;
}

std::string QuadForm::str() const
{
    std::ostringstream os;
    os << "(" << a << "," << b << "," << c << ")";
    return os.str();
}

QuadForm reduce(const QuadForm& f)
{
    if (!f.positive_definite()) throw DomainError("reduce: form " + f.str() + " is not positive definite");
    i64 a = f.a, b = f.b, c = f.c;
    const i64 D = f.disc();
    for (;;) {
        if (b > a || b <= -a) {
            // b <- b - 2 a k into (-a, a]
            i64 k = floor_div(a - b, 2 * a);
            i64 nb = b + 2 * a * k;
            c = (nb * nb - D) / (4 * a);
            b = nb;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        break;
    }
    if ((a == c || b == -a) && b < 0) b = -b;
    return {a, b, c};
}

QuadForm compose(const QuadForm& f, const QuadForm& g)
{
    const i64 D = f.disc();
    if (g.disc() != D) throw DomainError("compose: discriminant mismatch");
    if ((f.b + g.b) % 2 != 0) throw DomainError("compose: parity mismatch");
    const i64 beta = (f.b + g.b) / 2;
    i64 u, v, x, y;
    i64 e1 = ext_gcd(f.a, g.a, u, v);
    i64 e = ext_gcd(e1, beta, x, y);
    // mu a1 + nu a2 + omega beta = e
    i128 mu = (i128)u * x, nu = (i128)v * x, om = y;
    i128 A = (i128)f.a * g.a / ((i128)e * e);
    i128 num = mu * f.a * g.b + nu * g.a * f.b + om * (((i128)f.b * g.b + D) / 2);
    i128 B = num / e;
    i128 twoA = 2 * A;
    B %= twoA;
    if (B < 0) B += twoA;
    i128 C = (B * B - D) / (4 * A);
    return reduce({i64(A), i64(B), i64(C)});
}

bool is_fundamental_discriminant(i64 D)
{
    if (D == 0 || D == 1) return false;
    i64 r = mod_pos(D, 4);
    if (r == 1) return squarefree(D);
    if (r == 0) {
        i64 m = D / 4;
        i64 rm = mod_pos(m, 4);
        return (rm == 2 || rm == 3) && squarefree(m);
    }
    return false;
}

cplx RootOfUnity::value() const
{
    if (den == 1) return {1.0, 0.0};
    if (den == 2) return {-1.0, 0.0};
    if (den == 4) return num == 1 ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    const double ang = 2.0 * M_PI * double(num) / double(den);
    return {std::cos(ang), std::sin(ang)};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const
{
    i64 d = den / std::gcd(den, o.den) * o.den;
    i64 n = mod_pos(num * (d / den) + o.num * (d / o.den), d);
    i64 g = std::gcd(n, d);
    if (n == 0) return {0, 1};
    return {n / g, d / g};
}

RootOfUnity RootOfUnity::conj() const
{
    if (num == 0) return *this;
    return {den - num, den};
}

int ClassGroup::index_of(const QuadForm& f) const
{
    QuadForm r = reduce(f);
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (classes[k] == r) return int(k);
    throw DomainError("form " + f.str() + " not in class group of discriminant " + std::to_string(D));
}

int ClassGroup::inverse(int k) const
{
    for (int j = 0; j < h; ++j)
        if (table[k][j] == 0) return j;
    return -1;
}

int ClassGroup::order(int k) const
{
    int x = k, n = 1;
    while (x != 0) {
        x = table[x][k];
        ++n;
    }
    return n;
}

ClassGroup build_class_group(i64 D)
{
    if (D >= 0) throw DomainError("build_class_group: discriminant must be negative");
    if (!is_fundamental_discriminant(D)) throw DomainError("build_class_group: " + std::to_string(D) + " is not fundamental");
    ClassGroup G;
    G.D = D;
    G.w = D == -3 ? 6 : (D == -4 ? 4 : 2);
    const i64 amax = i64(std::sqrt(double(-D) / 3.0)) + 1;
    for (i64 a = 1; a <= amax; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod_pos(b - D, 2) != 0) continue;
            i64 num = b * b - D;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            QuadForm f{a, b, c};
            if (!f.is_reduced()) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            G.classes.push_back(f);
        }
    }
    std::sort(G.classes.begin(), G.classes.end(), [](const QuadForm& x, const QuadForm& y) {
        if (x.a != y.a) return x.a < y.a;
        if (std::abs(x.b) != std::abs(y.b)) return std::abs(x.b) < std::abs(y.b);
        return x.b > y.b;
    });
    G.h = int(G.classes.size());
    G.table.assign(G.h, std::vector<int>(G.h, 0));
    for (int i = 0; i < G.h; ++i)
        for (int j = 0; j < G.h; ++j) G.table[i][j] = G.index_of(compose(G.classes[i], G.classes[j]));

    // cyclic decomposition by maximal orders in successive quotients
    std::vector<int> sub{0};
    std::vector<int> in_sub(G.h, 0);
    in_sub[0] = 1;
    while (int(sub.size()) < G.h) {
        int best = -1, best_k = 0;
        for (int x = 0; x < G.h; ++x) {
            if (in_sub[x]) continue;
            int y = x, k = 1;
            while (!in_sub[y]) {
                y = G.table[y][x];
                ++k;
            }
            if (k > best_k) {
                best_k = k;
                best = x;
            }
        }
        // a lift of the same order exists in the coset best * sub
        int gen = -1;
        for (int s : sub) {
            int y = G.table[best][s];
            if (G.order(y) == best_k) {
                gen = y;
                break;
            }
        }
        if (gen < 0) throw std::logic_error("build_class_group: no complement generator");
        G.generators.push_back(gen);
        G.structure.push_back(best_k);
        std::vector<int> nsub;
        int pw = 0;
        for (int e = 0; e < best_k; ++e) {
            for (int s : sub) nsub.push_back(G.table[pw][s]);
            pw = G.table[pw][gen];
        }
        sub = nsub;
        std::fill(in_sub.begin(), in_sub.end(), 0);
        for (int s : sub) in_sub[s] = 1;
    }
    const int r = int(G.structure.size());
    G.exponents.assign(G.h, std::vector<int>(r, 0));
    std::vector<int> ex(r, 0);
    for (int count = 0; count < G.h; ++count) {
        int x = 0;
        for (int i = 0; i < r; ++i)
            for (int e = 0; e < ex[i]; ++e) x = G.table[x][G.generators[i]];
        G.exponents[x] = ex;
        for (int i = 0; i < r; ++i) {
            if (++ex[i] < G.structure[i]) break;
            ex[i] = 0;
        }
    }
    return G;
}

std::vector<ClassCharacter> characters(const ClassGroup& G)
{
    const int r = int(G.structure.size());
    std::vector<ClassCharacter> out;
    std::vector<int> k(r, 0);
    for (int count = 0; count < G.h; ++count) {
        ClassCharacter chi;
        chi.exact.resize(G.h);
        chi.values.resize(G.h);
        for (int x = 0; x < G.h; ++x) {
            RootOfUnity v{0, 1};
            for (int i = 0; i < r; ++i) {
                i64 n = G.structure[i];
                i64 num = mod_pos(i64(k[i]) * G.exponents[x][i], n);
                i64 g = std::gcd(num, n);
                v = v * RootOfUnity{num / g, n / g};
            }
            chi.exact[x] = v;
            chi.values[x] = v.value();
            if (!v.is_real()) chi.is_real = false;
        }
        out.push_back(std::move(chi));
        for (int i = 0; i < r; ++i) {
            if (++k[i] < G.structure[i]) break;
            k[i] = 0;
        }
    }
    return out;
}

int kronecker(i64 D, i64 p)
{
    if (p == 2) {
        if (D % 2 == 0) return 0;
        i64 r = mod_pos(D, 8);
        return (r == 1 || r == 7) ? 1 : -1;
    }
    i64 a = mod_pos(D, p);
    if (a == 0) return 0;
    // Jacobi symbol by reciprocity
    int t = 1;
    i64 n = p;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

bool is_prime(i64 n)
{
    if (n < 2) return false;
    for (i64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    i64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (i64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        i64 x = powmod(q, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<i64> primes_up_to(i64 n)
{
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<char> sieve(std::size_t(n) + 1, 1);
    sieve[0] = sieve[1] = 0;
    for (i64 i = 2; i * i <= n; ++i)
        if (sieve[i])
            for (i64 j = i * i; j <= n; j += i) sieve[j] = 0;
    for (i64 i = 2; i <= n; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

std::vector<i64> first_primes(int n)
{
    std::vector<i64> out;
    for (i64 q = 2; int(out.size()) < n; ++q)
        if (is_prime(q)) out.push_back(q);
    return out;
}

PrimeLocalData classify_prime(const ClassGroup& G, i64 p)
{
    if (!is_prime(p)) throw DomainError("classify_prime: " + std::to_string(p) + " is not prime");
    PrimeLocalData out;
    out.p = p;
    const int k = kronecker(G.D, p);
    if (k == -1) {
        out.split_type = SplitType::Inert;
        return out;
    }
    out.split_type = k == 0 ? SplitType::Ramified : SplitType::Split;
    // b^2 = D mod 4p, b = D mod 2; the form (p, b, .) represents p
    i64 b = -1;
    if (p == 2) {
        for (i64 x = 0; x < 4; ++x)
            if (mod_pos(x * x - G.D, 8) == 0) {
                b = x;
                break;
            }
    } else {
        i64 r = sqrt_mod(G.D, p);
        for (i64 x : {r, r + p})
            if (mod_pos(x - G.D, 2) == 0) {
                b = x;
                break;
            }
    }
    if (b < 0) throw std::logic_error("classify_prime: no square root of D");
    const i64 c = (b * b - G.D) / (4 * p);
    out.class_index = G.index_of({p, b, c});
    return out;
}

std::vector<int> character_pair_representatives(const std::vector<ClassCharacter>& chi)
{
    std::vector<int> reps;
    std::vector<char> used(chi.size(), 0);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        reps.push_back(int(i));
        if (chi[i].is_real) continue;
        for (std::size_t j = i + 1; j < chi.size(); ++j) {
            if (used[j]) continue;
            bool conj = true;
            for (std::size_t x = 0; x < chi[i].exact.size(); ++x)
                if (!(chi[j].exact[x] == chi[i].exact[x].conj())) {
                    conj = false;
                    break;
                }
            if (conj) {
                used[j] = 1;
                break;
            }
        }
    }
    return reps;
}

EpsteinCoefficients epstein_coefficients(const ClassGroup& G, const QuadForm& Q)
{
    if (Q.disc() != G.D) throw DomainError("epstein_coefficients: form " + Q.str() + " has wrong discriminant");
    const int cls = G.index_of(Q);
    auto chi = characters(G);
    EpsteinCoefficients out;
    const double wh = double(G.w) / double(G.h);
    for (int i : character_pair_representatives(chi)) {
        double aj = chi[i].is_real ? wh * chi[i].re(cls) : 2.0 * wh * chi[i].re(cls);
        out.a_list.push_back(aj);
        out.chars.push_back(chi[i]);
        out.char_index.push_back(i);
    }
    return out;
}

std::string to_string(SplitType t)
{
    switch (t) {
    case SplitType::Ramified: return "ramified";
    case SplitType::Inert: return "inert";
    case SplitType::Split: return "split";
    }
    return "?";
}

nlohmann::json to_json(const ClassGroup& G, const std::vector<ClassCharacter>& chi)
{
    nlohmann::json j;
    j["discriminant"] = G.D;
    j["h"] = G.h;
    j["w"] = G.w;
    j["structure"] = G.structure;
    auto& cl = j["classes"] = nlohmann::json::array();
    for (const auto& f : G.classes) cl.push_back({f.a, f.b, f.c});
    j["composition_table"] = G.table;
    auto& ch = j["characters"] = nlohmann::json::array();
    for (const auto& c : chi) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : c.exact) row.push_back({v.num, v.den});
        ch.push_back({{"values", row}, {"is_real", c.is_real}});
    }
    return j;
}

}  // namespace epz
