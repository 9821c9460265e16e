#include "epz/epstein.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "epz/special.hpp"

namespace epz {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 1.1102230246251565e-16;

// Poles of Gamma(s - 1/2) and Gamma(s) on the real axis, where the
// expansion has removable 0*inf or inf-inf combinations.
bool near_special(cplx s)
{
    if (std::abs(s.imag()) > 1e-3) return false;
    const double x = s.real();
    if (x > 0.5 + 1e-3) return false;
    const double k1 = std::round(x - 0.5);
    const double k2 = std::round(x);
    return std::abs(x - 0.5 - k1) < 1e-3 || (k2 <= 0.0 && std::abs(x - k2) < 1e-3);
}

double gamma_phase_eps(double t) { return kEps * (10.0 + std::abs(t) * std::log(std::abs(t) + 2.0)); }

double bessel_phase_eps(double t) { return 10.0 * kEps * (10.0 + std::abs(t) * std::log(std::abs(t) + 2.0)); }

struct Cutoff {
    int N = 0;
    double tail_log = -1e300;  // log of the estimated first omitted term
};

Cutoff bessel_cutoff(cplx s, double lP_re, double xstep, double log_tol)
{
    const cplx nu = s - 0.5;
    const double t = std::abs(s.imag());
    const double gexp = std::abs(s.real() - 0.5);
    Cutoff c;
    int below = 0;
    for (int N = 1; N < 4000000; ++N) {
        const double x = N * xstep;
        const double est = lP_re + bessel_k_log_magnitude(nu, x) + gexp * std::log(double(N)) +
                           std::log(2.0 * std::sqrt(double(N)));
        if (x > t && est < log_tol) {
            if (++below == 3) {
                c.N = N - 3;
                c.tail_log = est + 3.0;
                return c;
            }
        } else {
            below = 0;
        }
    }
    throw std::runtime_error("epstein: Bessel series did not converge");
}

}  // namespace

EpsteinEvaluator::EpsteinEvaluator(const QuadForm& Q, double target_abs_error)
    : Q_(Q), delta_(0.0), target_(std::max(target_abs_error, 1e-13))
{
    if (!Q.positive_definite()) throw DomainError("EpsteinEvaluator: form must be positive definite");
    delta_ = std::sqrt(double(-Q.disc()));
}

FuncValue EpsteinEvaluator::eval(cplx s, bool deriv) const
{
    if (s == cplx(1.0, 0.0)) throw PoleError("E(s,Q) has a pole at s = 1");
    if (s.imag() < 0.0) {
        FuncValue r = eval(std::conj(s), deriv);
        r.f = std::conj(r.f);
        r.df = std::conj(r.df);
        return r;
    }
    if (near_special(s)) return eval_circle(s, deriv);
    return eval_series(s, deriv);
}

FuncValue EpsteinEvaluator::eval_circle(cplx s, bool deriv) const
{
    constexpr int K = 16;
    constexpr double r = 0.01;
    FuncValue out{};
    cplx f = 0.0, df = 0.0;
    double err = 0.0;
    for (int k = 0; k < K; ++k) {
        const cplx e = std::polar(1.0, 2.0 * kPi * (k + 0.5) / K);
        const FuncValue v = eval(s + r * e, false);
        f += v.f;
        df += v.f / e;
        err += v.err;
    }
    out.f = f / double(K);
    out.err = err / K + 1e-14 * std::abs(out.f);
    if (deriv) {
        out.df = df / (K * r);
        out.derr = err / (K * r) * 2.0;
    }
    return out;
}

int EpsteinEvaluator::bessel_truncation(cplx s) const
{
    if (s.imag() < 0.0) s = std::conj(s);
    const double a = double(Q_.a);
    const double la = std::log(a), lD = std::log(delta_);
    const cplx nu = s - 0.5;
    const cplx lC = 2.0 * s * std::log(2.0) + (s - 1.0) * la + 0.5 * std::log(kPi) + lgamma(nu) - lgamma(s) -
                    (2.0 * s - 1.0) * lD;
    const double lP_re = ((s + 2.5) * std::log(2.0) + s * std::log(kPi) - lgamma(s) - 0.5 * la - nu * lD).real() -
                         kPi * s.imag() / 2.0;
    const double scale = 2.0 * std::exp(-s.real() * la) + std::exp(lC.real());
    const double tol = std::min(1e-3 * target_, 1e-19 * scale);
    return bessel_cutoff(s, lP_re, kPi * delta_ / a, std::log(tol)).N;
}

FuncValue EpsteinEvaluator::eval_series(cplx s, bool deriv) const
{
    const double a = double(Q_.a);
    const i64 twoa = 2 * Q_.a;
    const double t = s.imag();
    const double la = std::log(a), lD = std::log(delta_), l2 = std::log(2.0), lpi = std::log(kPi);
    const cplx s2 = 2.0 * s, s21 = 2.0 * s - 1.0, nu = s - 0.5;
    const cplx lgs = lgamma(s);

    const cplx lC = s2 * l2 + (s - 1.0) * la + 0.5 * lpi + lgamma(nu) - lgs - s21 * lD;
    const cplx C = std::exp(lC);
    const cplx lP = (s + 2.5) * l2 + s * lpi - lgs - kPi * t / 2.0 - 0.5 * la - nu * lD;
    const cplx P = std::exp(lP);
    const cplx amz = std::exp(-s * la);

    const double scale = 2.0 * std::abs(amz) + std::abs(C);
    const double tol = std::min(1e-3 * target_, 1e-19 * scale);
    const double xstep = kPi * delta_ / a;
    const Cutoff cut = bessel_cutoff(s, lP.real(), xstep, std::log(tol));
    const int Nk = cut.N;
    const int N1 = zeta_cutoff(s2), N2 = zeta_cutoff(s21);
    const int Nz = std::max(N1, N2);
    const PowerTable pt(s, std::max(Nz, Nk));
    const auto& pw = pt.pw();

    std::vector<cplx> z1(Nz + 1), z2(Nz + 1);
    for (int n = 1; n <= Nz; ++n) {
        z1[n] = pw[n] * pw[n];
        z2[n] = double(n) * z1[n];
    }
    const ZetaValue zz1 = zeta_em(s2, z1, N1, deriv);
    const ZetaValue zz2 = zeta_em(s21, z2, N2, deriv);

    const cplx T1 = 2.0 * amz * zz1.value;
    const cplx T2 = C * zz2.value;

    // Bessel part: sum_N cos(pi b N/a) d_N(s) K_{s-1/2}(pi Delta N/a)
    std::vector<cplx> Dsum(Nk + 1, 0.0), Dlog;
    if (deriv) Dlog.assign(Nk + 1, 0.0);
    for (int n = 1; n <= Nk; ++n) {
        const cplx v = double(n) * pw[n] * pw[n];
        const double ln = log_int(n);
        for (int N = n; N <= Nk; N += n) {
            Dsum[N] += v;
            if (deriv) Dlog[N] += ln * v;
        }
    }
    cplx S3 = 0.0, dS3 = 0.0;
    double abs3 = 0.0;
    for (int N = 1; N <= Nk; ++N) {
        const i64 r = (i64(N) * Q_.b) % twoa;
        const double cs = std::cos(kPi * double(r) / a);
        if (std::abs(cs) < 1e-15) continue;
        const BesselK K = bessel_k_scaled(nu, N * xstep, deriv);
        const cplx Npow = 1.0 / (pw[N] * std::sqrt(double(N)));  // N^{s-1/2}
        const cplx d = Npow * Dsum[N];
        S3 += cs * d * K.k;
        abs3 += std::abs(d * K.k);
        if (deriv) {
            const cplx dd = log_int(N) * d - 2.0 * Npow * Dlog[N];
            dS3 += cs * (dd * K.k + d * K.dk);
        }
    }
    const cplx T3 = P * S3;

    FuncValue out{};
    out.f = T1 + T2 + T3;
    const double ge = gamma_phase_eps(t);
    double err = 2.0 * std::abs(amz) * zz1.err + std::abs(C) * zz2.err + std::abs(T2) * ge;
    err += std::abs(P) * abs3 * (bessel_phase_eps(t) + ge);
    err += 10.0 * std::exp(cut.tail_log);
    err += 8.0 * kEps * (std::abs(T1) + std::abs(T2) + std::abs(T3));
    out.err = err;

    if (deriv) {
        const cplx psi_s = digamma(s);
        const cplx dT1 = 2.0 * amz * (2.0 * zz1.deriv - la * zz1.value);
        const cplx dlogC = 2.0 * l2 + la + digamma(nu) - psi_s - 2.0 * lD;
        const cplx dT2 = C * (dlogC * zz2.value + 2.0 * zz2.deriv);
        const cplx dlogP = l2 + lpi - psi_s - lD;
        const cplx dT3 = P * (dlogP * S3 + dS3);
        out.df = dT1 + dT2 + dT3;
        const double lg = std::log(double(std::max({Nz, Nk, 2})));
        out.derr = err * (4.0 + 2.0 * lg) + 8.0 * kEps * std::abs(out.df) * (1.0 + lg);
    }
    return out;
}

CompletedValue EpsteinEvaluator::completed(cplx s) const
{
    const FuncValue v = eval(s);
    const cplx g = std::exp(s * std::log(delta_ / (2.0 * kPi)) + lgamma(s));
    CompletedValue c;
    c.s = s;
    c.raw = v.f;
    c.lambda = g * v.f;
    c.err = std::abs(g) * v.err + std::abs(c.lambda) * gamma_phase_eps(s.imag());
    return c;
}

cplx EpsteinEvaluator::completed_scaled(cplx s, double* err) const
{
    const FuncValue v = eval(s);
    const cplx g = std::exp(s * std::log(delta_ / (2.0 * kPi)) + lgamma(s) + kPi * std::abs(s.imag()) / 2.0);
    const cplx lam = g * v.f;
    if (err) *err = std::abs(g) * v.err + std::abs(lam) * gamma_phase_eps(s.imag());
    return lam;
}

double check_functional_equation(const EpsteinEvaluator& E, cplx s)
{
    return std::abs(E.completed_scaled(s) - E.completed_scaled(1.0 - s));
}

cplx lattice_box_sum(const QuadForm& Q, cplx s, int radius)
{
    cplx total = 0.0;
    for (int n = -radius; n <= radius; ++n) {
        cplx row = 0.0;
        for (int m = -radius; m <= radius; ++m) {
            if (m == 0 && n == 0) continue;
            row += std::exp(-s * std::log(Q.value(m, n)));
        }
        total += row;
    }
    return total;
}

OracleValue eval_lattice_oracle(const QuadForm& Q, cplx s, int radius)
{
    if (s.real() < 1.25) throw std::domain_error("lattice oracle needs Re s >= 1.25");
    if (radius < 10) throw std::domain_error("lattice oracle needs radius >= 10");
    if (!Q.positive_definite()) throw DomainError("lattice oracle: form must be positive definite");
    const double a = double(Q.a), b = double(Q.b), c = double(Q.c);
    const double delta = std::sqrt(double(-Q.disc()));
    const int R = radius;
    const int M = int(std::ceil(3.0 * R * std::sqrt(c / a))) + 10;
    const cplx amz = std::exp(-s * std::log(a));

    cplx total = 0.0;
    double abssum = 0.0, err = 0.0;
    const double qmax = Q.value(M, R) + Q.value(M, -R);
    for (int n = -R; n <= R; ++n) {
        cplx row = 0.0;
        for (int m = -M; m <= M; ++m) {
            if (m == 0 && n == 0) continue;
            const cplx v = std::exp(-s * std::log(Q.value(m, n)));
            row += v;
            abssum += std::abs(v);
        }
        // m beyond +-M: (a m^2)^{-s} (1 + beta/m + gamma/m^2)^{-s}
        for (int side : {1, -1}) {
            const double beta = side * b * n / a, gam = c * double(n) * n / a;
            cplx ckm1 = 0.0, ck = 1.0, tail = 0.0;
            double prev = 0.0;
            for (int k = 0; k < 400; ++k) {
                const cplx term = ck * hurwitz_zeta(2.0 * s + double(k), M + 1.0);
                tail += term;
                const double cur = std::abs(term);
                if (k > 2 && cur + prev < 1e-19 * std::abs(tail)) {
                    err += 2.0 * (cur + prev) * std::abs(amz);
                    break;
                }
                prev = cur;
                const cplx cn = (-beta * (double(k) + s) * ck - gam * (double(k) - 1.0 + 2.0 * s) * ckm1) / double(k + 1);
                ckm1 = ck;
                ck = cn;
            }
            row += amz * tail;
        }
        total += row;
    }
    // rows beyond +-R: zero Fourier mode of each row
    const cplx far = 2.0 * amz * std::sqrt(kPi) * std::exp(lgamma(s - 0.5) - lgamma(s)) *
                     std::exp((1.0 - 2.0 * s) * std::log(delta / (2.0 * a))) * hurwitz_zeta(2.0 * s - 1.0, R + 1.0);
    total += far;
    // nonzero modes of the far rows are O(exp(-pi Delta R / a))
    err += 8.0 * std::abs(amz) * std::exp(-kPi * delta * (R + 1) / a + kPi * std::abs(s.imag()) + 10.0);
    err += kEps * abssum * (10.0 + std::abs(s) * std::log(qmax)) + 1e-15 * std::abs(far) * (1.0 + std::abs(s.imag()));
    return {total, err};
}

}  // namespace epz
