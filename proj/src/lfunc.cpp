#include "epz/lfunc.hpp"

#include <cmath>
#include <stdexcept>

#include "epz/special.hpp"

namespace epz {

std::map<i64, PrimeLocalData> local_data(const ClassGroup& G, i64 pmax)
{
    std::map<i64, PrimeLocalData> out;
    for (i64 p : primes_up_to(pmax)) out.emplace(p, classify_prime(G, p));
    return out;
}

std::vector<double> prime_power_coefficients(const PrimeLocalData& pd, const ClassCharacter& chi, int kmax)
{
    std::vector<double> b(std::size_t(kmax) + 1, 0.0);
    b[0] = 1.0;
    switch (pd.split_type) {
    case SplitType::Inert:
        for (int k = 2; k <= kmax; k += 2) b[k] = 1.0;
        break;
    case SplitType::Ramified: {
        const double x = chi.re(std::size_t(*pd.class_index));
        for (int k = 1; k <= kmax; ++k) b[k] = b[k - 1] * x;
        break;
    }
    case SplitType::Split: {
        const double c = 2.0 * chi.re(std::size_t(*pd.class_index));
        if (kmax >= 1) b[1] = c;
        for (int k = 2; k <= kmax; ++k) b[k] = c * b[k - 1] - b[k - 2];
        break;
    }
    }
    return b;
}

std::vector<double> coefficients(const ClassCharacter& chi, const std::map<i64, PrimeLocalData>& local, int M)
{
    std::vector<double> b(std::size_t(M) + 1, 0.0);
    if (M < 1) return b;
    b[1] = 1.0;
    std::vector<int> spf(std::size_t(M) + 1, 0);
    for (int i = 2; i <= M; ++i) {
        if (spf[i]) continue;
        for (long j = i; j <= M; j += i)
            if (!spf[j]) spf[j] = i;
    }
    std::map<int, std::vector<double>> pp;
    for (int m = 2; m <= M; ++m) {
        const int p = spf[m];
        int q = m, e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        auto it = pp.find(p);
        if (it == pp.end()) {
            auto ld = local.find(p);
            if (ld == local.end()) throw std::invalid_argument("coefficients: missing local data for p = " + std::to_string(p));
            int kmax = 0;
            for (long v = p; v <= M; v *= p) ++kmax;
            it = pp.emplace(p, prime_power_coefficients(ld->second, chi, kmax)).first;
        }
        b[m] = it->second[e] * b[q];
    }
    return b;
}

std::vector<double> coefficients(const ClassGroup& G, const ClassCharacter& chi, int M)
{
    return coefficients(chi, local_data(G, M), M);
}

LSeries::LSeries(const ClassGroup& G, const ClassCharacter& chi, int M)
    : character(chi), local(local_data(G, M))
{
    b = coefficients(chi, local, M);
}

cplx LSeries::dirichlet_sum(cplx s) const
{
    cplx acc = 0.0;
    for (std::size_t m = b.size() - 1; m >= 1; --m)
        if (b[m] != 0.0) acc += b[m] * std::exp(-s * std::log(double(m)));
    return acc;
}

i64 rep_count_oracle(const QuadForm& Q, i64 m)
{
    if (m < 1) throw std::invalid_argument("rep_count_oracle: m must be positive");
    const i64 D = Q.disc();
    const i64 ymax = i64(std::sqrt(4.0 * double(Q.a) * double(m) / double(-D))) + 1;
    i64 count = 0;
    for (i64 y = -ymax; y <= ymax; ++y) {
        // a x^2 + b y x + (c y^2 - m) = 0
        const i64 disc = D * y * y + 4 * Q.a * m;
        if (disc < 0) continue;
        i64 r = i64(std::llround(std::sqrt(double(disc))));
        while (r * r > disc) --r;
        while ((r + 1) * (r + 1) <= disc) ++r;
        if (r * r != disc) continue;
        for (i64 sgn : {1, -1}) {
            if (r == 0 && sgn < 0) break;
            const i64 num = -Q.b * y + sgn * r;
            if (num % (2 * Q.a) == 0) ++count;
        }
    }
    return count;
}

std::vector<i64> rep_counts(const QuadForm& Q, i64 M)
{
    std::vector<i64> r(std::size_t(M) + 1, 0);
    const double a = double(Q.a), D = double(-Q.disc());
    const i64 ymax = i64(std::sqrt(4.0 * a * double(M) / D)) + 1;
    for (i64 y = -ymax; y <= ymax; ++y) {
        const double center = -double(Q.b) * double(y) / (2.0 * a);
        const double rad2 = (double(M) - D * double(y) * double(y) / (4.0 * a)) / a;
        if (rad2 < 0) continue;
        const double rad = std::sqrt(rad2);
        for (i64 x = i64(std::floor(center - rad)) - 1; x <= i64(std::ceil(center + rad)) + 1; ++x) {
            const i64 v = Q(x, y);
            if (v >= 1 && v <= M) ++r[v];
        }
    }
    return r;
}

HeckeFamily::HeckeFamily(i64 D, double target_abs_error) : G_(build_class_group(D)), chi_(characters(G_))
{
    for (const auto& f : G_.classes) E_.push_back(std::make_unique<EpsteinEvaluator>(f, target_abs_error));
}

FuncValue HeckeFamily::eval_L(const ClassCharacter& chi, cplx s, bool deriv) const
{
    FuncValue out{};
    for (std::size_t k = 0; k < E_.size(); ++k) {
        const FuncValue v = E_[k]->eval(s, deriv);
        out.f += chi[k] * v.f;
        out.df += chi[k] * v.df;
        out.err += v.err;
        out.derr += v.derr;
    }
    const double w = G_.w;
    out.f /= w;
    out.df /= w;
    out.err /= w;
    out.derr /= w;
    return out;
}

TruncatedEuler::TruncatedEuler(const ClassGroup& G, const ClassCharacter& chi, int n_) : n(n_), character(chi)
{
    if (n < 0) throw std::invalid_argument("TruncatedEuler: n must be non-negative");
    for (i64 p : first_primes(n)) primes.push_back(classify_prime(G, p));
}

FuncValue eval_truncated(const TruncatedEuler& tr, cplx s, bool deriv)
{
    cplx prod = 1.0, dlog = 0.0;
    for (const auto& pd : tr.primes) {
        const double lp = std::log(double(pd.p));
        const cplx X = std::exp(-s * lp);
        double c = 0.0, e = 0.0;
        switch (pd.split_type) {
        case SplitType::Inert:
            e = -1.0;  // 1 - p^{-2s}
            break;
        case SplitType::Ramified:
            c = tr.character.re(std::size_t(*pd.class_index));
            break;
        case SplitType::Split:
            c = 2.0 * tr.character.re(std::size_t(*pd.class_index));
            e = 1.0;
            break;
        }
        const cplx den = 1.0 - c * X + e * X * X;
        if (std::abs(den) == 0.0) throw std::domain_error("eval_truncated: vanishing Euler factor");
        prod /= den;
        if (deriv) dlog += (-c + 2.0 * e * X) * lp * X / den;
    }
    FuncValue out{};
    out.f = prod;
    out.df = prod * dlog;
    out.err = 4e-16 * (tr.primes.size() + 1) * std::abs(prod) * (1.0 + std::abs(s.imag()) * 1e-2);
    out.derr = out.err * (1.0 + std::abs(dlog));
    return out;
}

TruncatedEpstein::TruncatedEpstein(const ClassGroup& G, const QuadForm& Q, int n)
    : coef_(epstein_coefficients(G, reduce(Q)))
{
    for (const auto& chi : coef_.chars) tr_.emplace_back(G, chi, n);
}

FuncValue TruncatedEpstein::eval(cplx s, bool deriv) const
{
    FuncValue out{};
    for (std::size_t j = 0; j < tr_.size(); ++j) {
        const FuncValue v = eval_truncated(tr_[j], s, deriv);
        const double a = coef_.a_list[j];
        out.f += a * v.f;
        out.df += a * v.df;
        out.err += std::abs(a) * v.err;
        out.derr += std::abs(a) * v.derr;
    }
    return out;
}

std::vector<MeanSquare> mean_square_truncation(const HeckeFamily& F, int char_index, double sigma,
                                               const std::vector<int>& ns, double T, double step)
{
    if (!(sigma > 0.5)) throw std::domain_error("mean_square_truncation: sigma must exceed 1/2");
    std::vector<MeanSquare> out;
    if (T <= 1.0) {
        for (int n : ns) out.push_back({n, 0.0, 0.0});
        return out;
    }
    const int Nc = std::max(1, int(std::ceil((T - 1.0) / step)));
    const double h = (T - 1.0) / Nc;  // coarse step, fine step h/2
    std::vector<TruncatedEuler> tr;
    for (int n : ns) tr.emplace_back(F.group(), F.chars()[char_index], n);
    std::vector<double> fine(ns.size(), 0.0), coarse(ns.size(), 0.0), eterm(ns.size(), 0.0);
    for (int k = 0; k <= 2 * Nc; ++k) {
        const cplx s(sigma, 1.0 + 0.5 * h * k);
        const FuncValue L = F.eval_L(char_index, s);
        const double wf = (k == 0 || k == 2 * Nc) ? 0.5 : 1.0;
        const double wc = (k % 2 == 0) ? ((k == 0 || k == 2 * Nc) ? 0.5 : 1.0) : 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double d = std::norm(L.f - eval_truncated(tr[i], s).f);
            fine[i] += wf * d;
            coarse[i] += wc * d;
            eterm[i] += wf * 2.0 * std::sqrt(d) * L.err;
        }
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
        MeanSquare m;
        m.n = ns[i];
        m.value = fine[i] * (0.5 * h) / (T - 1.0);
        const double vc = coarse[i] * h / (T - 1.0);
        m.err = std::abs(m.value - vc) + eterm[i] * (0.5 * h) / (T - 1.0);
        out.push_back(m);
    }
    return out;
}

MeanSquare check_mean_square_truncation(const HeckeFamily& F, int char_index, double sigma, int n, double T)
{
    return mean_square_truncation(F, char_index, sigma, {n}, T).front();
}

}  // namespace epz
