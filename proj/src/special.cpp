#include "epz/special.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace epz {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr int kStirlingTerms = 12;
constexpr int kEMTerms = 20;
constexpr int kTableMax = 1 << 18;

const cplx I(0.0, 1.0);

const std::vector<int>& smallest_prime_factor()
{
    static const std::vector<int> spf = [] {
        std::vector<int> s(kTableMax + 1, 0);
        for (int i = 2; i <= kTableMax; ++i) {
            if (s[i] != 0) continue;
            for (long j = i; j <= kTableMax; j += i)
                if (s[j] == 0) s[j] = i;
        }
        return s;
    }();
    return spf;
}

const std::vector<double>& log_table()
{
    static const std::vector<double> lg = [] {
        std::vector<double> v(kTableMax + 1, 0.0);
        for (int i = 1; i <= kTableMax; ++i) v[i] = std::log(double(i));
        return v;
    }();
    return lg;
}

// sinh(d) - d without cancellation
cplx sinh_minus_id(cplx d)
{
    if (std::abs(d) < 1.0) {
        cplx d2 = d * d, term = d * d2 / 6.0, sum = term;
        for (int k = 2; k < 12; ++k) {
            term *= d2 / double((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(d) - d;
}

cplx cosh_minus_one(cplx d)
{
    cplx sh = std::sinh(0.5 * d);
    return 2.0 * sh * sh;
}

// sinh u - u cosh u for real u
double sinh_minus_ucosh(double u)
{
    if (std::abs(u) < 0.5) {
        double u2 = u * u, pw = u * u2, fact = 6.0, sum = 0.0;
        for (int k = 1; k <= 9; ++k) {
            sum -= 2.0 * k * pw / fact;
            pw *= u2;
            fact *= double((2 * k + 2) * (2 * k + 3));
        }
        return sum;
    }
    return std::sinh(u) - u * std::cosh(u);
}

struct Acc {
    cplx t0p, t0m, t1p, t1m;
    void add(cplx f, cplx w, double sp, bool deriv)
    {
        cplx ep = std::exp(sp * w);
        cplx em = 1.0 / ep;
        t0p += f * ep;
        t0m += f * em;
        if (deriv) {
            t1p += f * ep * w;
            t1m += f * em * w;
        }
    }
    BesselK finish(cplx scale = 1.0) const
    {
        return {0.5 * (scale * t0p + std::conj(scale * t0m)), 0.5 * (scale * t1p - std::conj(scale * t1m))};
    }
};

// x > tau: exact steepest descent path w = u + i asin(tau u /(x sinh u))
BesselK k_region_a(double sp, double tau, double x, bool deriv)
{
    const double S = std::sqrt((x - tau) * (x + tau));
    const double g0 = tau / x;
    const double E0 = -S + tau * std::acos(g0);
    const double h = std::min(0.5 / std::sqrt(S), 0.25);
    const double asp = std::abs(sp);
    Acc acc;
    for (int k = 0; k < 100000; ++k) {
        const double u = k * h;
        double g, gp;
        if (u == 0.0) {
            g = g0;
            gp = 0.0;
        } else {
            const double sh = std::sinh(u);
            g = g0 * u / sh;
            gp = g0 * sinh_minus_ucosh(u) / (sh * sh);
        }
        const double cv = std::sqrt((1.0 - g) * (1.0 + g));
        const double v = std::asin(g);
        const double logF = -x * std::cosh(u) * cv + tau * std::acos(g);
        if (k > 0 && logF - E0 + asp * u < -46.0) break;
        const double vp = gp / cv;
        const cplx w(u, v), wp(1.0, vp);
        acc.add(std::exp(logF) * wp * (k == 0 ? 0.5 * h : h), w, sp, deriv);
    }
    return acc.finish();
}

// tau > x away from the turning point: straight lines through the saddle a0 + i pi/2
bool k_region_b(double sp, double tau, double x, bool deriv, BesselK& out)
{
    const double S = std::sqrt((tau - x) * (tau + x));
    const double a0 = std::acosh(tau / x);
    const double asp = std::abs(sp);
    const double rho_m = (asp + std::sqrt(asp * asp + 45.0 * S)) / (0.5 * S);
    if (tau * rho_m / (6.0 * std::sqrt(2.0)) > 0.25 * S) return false;
    const double h = 0.5 / std::sqrt(S);
    const int M = int(std::ceil(rho_m / h));
    const cplx eq = std::polar(1.0, -kPi / 4.0);
    const cplx wplus(a0, kPi / 2.0);
    Acc acc;
    for (int k = -M; k <= M; ++k) {
        const cplx d = (k * h) * eq;
        const cplx phi = S * cosh_minus_one(d) + tau * sinh_minus_id(d);
        acc.add(std::exp(-I * phi) * eq * h, wplus + d, sp, deriv);
    }
    out = acc.finish(std::polar(1.0, tau * a0 - S));
    return true;
}

const GaussLegendre& gl20()
{
    static const GaussLegendre g(20);
    return g;
}

// near the turning point: ray from i pi/2 at angle -pi/6, then the real axis
BesselK k_ray(double sp, double tau, double x, bool deriv)
{
    const auto& gl = gl20();
    const double asp = std::abs(sp);
    const cplx e6 = std::polar(1.0, -kPi / 6.0);
    const double scale = std::cbrt(6.0 / std::max(x, 0.1));
    const double L = std::min(0.5, 0.5 * scale);
    const double p_turn = std::sqrt(std::max(tau - x, 0.0) / std::max(x, 0.1));
    Acc acc;
    bool done = false;
    for (double p0 = 0.0; p0 < kPi - 1e-12 && !done; p0 += L) {
        const double p1 = std::min(p0 + L, kPi);
        const double hw = 0.5 * (p1 - p0), mid = 0.5 * (p1 + p0);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double p = mid + hw * gl.x[i];
            const cplx d = p * e6;
            const cplx expo = -I * x * sinh_minus_id(d) + I * (tau - x) * d;
            acc.add(std::exp(expo) * e6 * (hw * gl.w[i]), cplx(0.0, kPi / 2.0) + d, sp, deriv);
        }
        const cplx d1 = p1 * e6;
        const double re1 = (-I * x * sinh_minus_id(d1) + I * (tau - x) * d1).real() + asp * d1.real();
        if (p1 > 2.0 * std::max(p_turn, scale) && re1 < -50.0) done = true;
    }
    if (!done) {
        const double u1 = kPi * std::cos(kPi / 6.0);
        const double Lu = std::min(0.25, 1.0 / std::max(x, 1.0) + 0.05);
        for (double u0 = u1; u0 < 60.0; u0 += Lu) {
            const double ua = u0, ub = u0 + Lu;
            const double hw = 0.5 * (ub - ua), mid = 0.5 * (ub + ua);
            for (std::size_t i = 0; i < gl.x.size(); ++i) {
                const double u = mid + hw * gl.x[i];
                const cplx expo(-x * std::cosh(u) + tau * kPi / 2.0, tau * u);
                acc.add(std::exp(expo) * (hw * gl.w[i]), cplx(u, 0.0), sp, deriv);
            }
            if (-x * std::cosh(ub) + tau * kPi / 2.0 + asp * ub < -50.0) break;
        }
    }
    return acc.finish();
}

// K = pi/(2 sin pi nu) (I_{-nu} - I_nu); for x small against |nu| the terms do not cancel
BesselK k_series(cplx nu, double x, bool deriv)
{
    const double tau = nu.imag();
    const cplx pref = std::log(kPi / 2.0) - log_sin_pi(nu) + kPi * tau / 2.0;
    const double lx = std::log(0.5 * x);
    cplx dpref = 0.0;
    if (deriv) dpref = -kPi * cot_pi(nu);
    cplx k = 0.0, dk = 0.0;
    for (int sgn : {-1, 1}) {
        const cplx v = double(sgn) * nu;
        cplx lt = v * lx - lgamma(v + 1.0);
        cplx dl = lx - digamma(v + 1.0);
        cplx sum = 0.0, dsum = 0.0;
        for (int j = 0; j < 400; ++j) {
            const cplx term = std::exp(pref + lt);
            sum += term;
            if (deriv) dsum += term * (double(sgn) * dl + dpref);
            if (j > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
            lt += 2.0 * lx - std::log(double(j + 1)) - std::log(v + double(j + 1));
            if (deriv) dl -= 1.0 / (v + double(j + 1));
        }
        const double sg = sgn < 0 ? 1.0 : -1.0;
        k += sg * sum;
        dk += sg * dsum;
    }
    return {k, dk};
}

// log of the largest ascending-series term relative to the leading one
double series_growth(cplx nu, double x)
{
    const double q = 0.25 * x * x;
    double acc = 0.0, best = 0.0;
    for (int j = 1; j < 400; ++j) {
        acc += std::log(q / (j * std::abs(nu + double(j))));
        best = std::max(best, acc);
        if (acc < best - 5.0) break;
    }
    return best;
}

}  // namespace

GaussLegendre::GaussLegendre(int n) : x(n), w(n)
{
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

const std::vector<double>& bernoulli_over_factorial()
{
    static const std::vector<double> b = [] {
        const int kmax = 32;
        std::vector<double> v(kmax + 1, 0.0);
        v[0] = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            const int p = 2 * k;
            double z;
            if (k == 1) {
                z = kPi * kPi / 6.0;
            } else {
                const int N = 1000;
                z = 0.0;
                for (int n = N - 1; n >= 1; --n) z += std::pow(double(n), -p);
                z += std::pow(double(N), 1.0 - p) / (p - 1.0) + 0.5 * std::pow(double(N), -p) +
                     p * std::pow(double(N), -p - 1.0) / 12.0;
            }
            double sgn = (k % 2 == 1) ? 1.0 : -1.0;
            v[k] = sgn * 2.0 * z / std::pow(2.0 * kPi, p);
        }
        return v;
    }();
    return b;
}

cplx log_sin_pi(cplx z)
{
    const double y = z.imag();
    if (std::abs(y) < 1.0) return std::log(std::sin(kPi * z));
    const cplx l2i(std::log(2.0), kPi / 2.0);
    if (y > 0) return -I * kPi * z + std::log(std::exp(2.0 * kPi * I * z) - 1.0) - l2i;
    return I * kPi * z + std::log(1.0 - std::exp(-2.0 * kPi * I * z)) - l2i;
}

cplx cot_pi(cplx z)
{
    const double y = z.imag();
    if (std::abs(y) < 1.0) return std::cos(kPi * z) / std::sin(kPi * z);
    if (y > 0) {
        cplx q = std::exp(2.0 * kPi * I * z);
        return I * (q + 1.0) / (q - 1.0);
    }
    cplx q = std::exp(-2.0 * kPi * I * z);
    return I * (1.0 + q) / (1.0 - q);
}

cplx lgamma(cplx z)
{
    if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - lgamma(1.0 - z);
    cplx prod = 1.0;
    while (std::abs(z) < 15.0) {
        prod *= z;
        z += 1.0;
    }
    const auto& b = bernoulli_over_factorial();
    cplx zi = 1.0 / z, zi2 = zi * zi, pw = zi, s = 0.0;
    double fact = 1.0;  // (2k-2)!
    for (int k = 1; k <= kStirlingTerms; ++k) {
        s += b[k] * fact * pw;
        pw *= zi2;
        fact *= double((2 * k - 1) * (2 * k));
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi + s - std::log(prod);
}

cplx rgamma(cplx z)
{
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
    return std::exp(-lgamma(z));
}

cplx digamma(cplx z)
{
    if (z.real() < 0.5) return digamma(1.0 - z) - kPi * cot_pi(z);
    cplx acc = 0.0;
    while (std::abs(z) < 15.0) {
        acc += 1.0 / z;
        z += 1.0;
    }
    const auto& b = bernoulli_over_factorial();
    cplx zi = 1.0 / z, zi2 = zi * zi, pw = zi2, s = 0.0;
    double fact = 1.0;  // (2k-1)!
    for (int k = 1; k <= kStirlingTerms; ++k) {
        s += b[k] * fact * pw;
        pw *= zi2;
        fact *= double((2 * k) * (2 * k + 1));
    }
    return std::log(z) - 0.5 * zi - s - acc;
}

double log_int(int n)
{
    if (n <= kTableMax) return log_table()[n];
    return std::log(double(n));
}

PowerTable::PowerTable(cplx s, int N) : N_(N), pw_(std::size_t(N) + 1)
{
    pw_[0] = 0.0;
    if (N >= 1) pw_[1] = 1.0;
    const auto& spf = smallest_prime_factor();
    for (int n = 2; n <= N; ++n) {
        int p = n <= kTableMax ? spf[n] : n;
        if (p == n)
            pw_[n] = std::exp(-s * log_int(n));
        else
            pw_[n] = pw_[p] * pw_[n / p];
    }
}

int zeta_cutoff(cplx z) { return std::max(12, int(std::ceil((std::abs(z) + 2.0 * kEMTerms) / 2.3))); }

ZetaValue zeta_em(cplx z, const std::vector<cplx>& pw, int N, bool deriv)
{
    if (z == cplx(1.0, 0.0)) throw std::domain_error("zeta: pole at 1");
    const auto& b = bernoulli_over_factorial();
    cplx sum = 0.0, dsum = 0.0;
    double abssum = 0.0;
    for (int n = N - 1; n >= 1; --n) {
        sum += pw[n];
        abssum += std::abs(pw[n]);
        if (deriv) dsum -= log_int(n) * pw[n];
    }
    const double lN = log_int(N);
    const cplx pN = pw[N];
    const cplx zm1 = z - 1.0;
    cplx tail = double(N) * pN / zm1 + 0.5 * pN;
    cplx dtail = 0.0;
    if (deriv) dtail = double(N) * pN * (-lN / zm1 - 1.0 / (zm1 * zm1)) - 0.5 * lN * pN;
    // P_k(z) = z (z+1) ... (z+2k-2)
    cplx P = z, dP = 1.0;
    double Npow = 1.0 / N;  // N^{1-2k}
    cplx last = 0.0;
    for (int k = 1; k <= kEMTerms + 1; ++k) {
        const cplx term = b[k] * P * pN * Npow;
        if (k == kEMTerms + 1) {
            last = term;
            break;
        }
        tail += term;
        if (deriv) dtail += b[k] * Npow * pN * (dP - lN * P);
        // advance P by two factors
        for (int j = 2 * k - 1; j <= 2 * k; ++j) {
            dP = dP * (z + double(j)) + P;
            P *= (z + double(j));
        }
        Npow /= double(N) * double(N);
    }
    ZetaValue out;
    out.value = sum + tail;
    out.deriv = dsum + dtail;
    const double round = 1.1e-16 * (abssum + std::abs(tail)) * (4.0 + std::abs(z) * lN);
    out.err = 2.0 * std::abs(last) + round;
    return out;
}

ZetaValue zeta(cplx z, bool deriv)
{
    const int N = zeta_cutoff(z);
    PowerTable t(z, N);
    return zeta_em(z, t.pw(), N, deriv);
}

cplx hurwitz_zeta(cplx z, double q)
{
    const auto& b = bernoulli_over_factorial();
    const double need = (std::abs(z) + 2.0 * kEMTerms) / 2.3;
    cplx sum = 0.0;
    while (q < need) {
        sum += std::exp(-z * std::log(q));
        q += 1.0;
    }
    const cplx pq = std::exp(-z * std::log(q));
    cplx tail = q * pq / (z - 1.0) + 0.5 * pq;
    cplx P = z;
    double qpow = 1.0 / q;
    for (int k = 1; k <= kEMTerms; ++k) {
        tail += b[k] * P * pq * qpow;
        for (int j = 2 * k - 1; j <= 2 * k; ++j) P *= (z + double(j));
        qpow /= q * q;
    }
    return sum + tail;
}

BesselK bessel_k_scaled(cplx nu, double x, bool deriv)
{
    if (!(x > 0.0)) throw std::domain_error("bessel_k_scaled: x must be positive");
    if (nu.imag() < 0.0) {
        BesselK r = bessel_k_scaled(std::conj(nu), x, deriv);
        return {std::conj(r.k), std::conj(r.dk)};
    }
    const double sp = nu.real(), tau = nu.imag();
    const double c13 = std::cbrt(std::max(tau, 1.0));
    if (x - tau >= 3.0 * c13) return k_region_a(sp, tau, x, deriv);
    if (tau > x && tau >= 20.0) {
        const double S = std::sqrt((tau - x) * (tau + x));
        BesselK out;
        if (S >= 3.3 * c13 * c13 && k_region_b(sp, tau, x, deriv, out)) return out;
    }
    const double ray_growth = std::pow(std::max(tau - x, 0.0), 1.5) / (3.0 * std::sqrt(x));
    if (ray_growth > 3.0 && tau >= 1.0 && series_growth(nu, x) < ray_growth) return k_series(nu, x, deriv);
    return k_ray(sp, tau, x, deriv);
}

double bessel_k_log_magnitude(cplx nu, double x)
{
    const double sp = std::abs(nu.real()), tau = std::abs(nu.imag());
    if (x > tau) {
        const double S = std::sqrt((x - tau) * (x + tau));
        return -S + tau * std::acos(tau / x) + 0.5 * std::log(kPi / (2.0 * S)) + sp * sp / (2.0 * S);
    }
    const double S = std::max(std::sqrt((tau - x) * (tau + x)), std::cbrt(std::max(x, 1.0)));
    return 0.5 * std::log(2.0 * kPi / S) + sp * std::acosh(std::max(tau / x, 1.0)) + 1.0;
}

}  // namespace epz
