#include "epz/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epz/parallel.hpp"
#include "epz/special.hpp"

namespace epz {

namespace {

// Linearised |f - x| near a minimum on the line: sqrt(c^2 + k^2 (t - t0)^2).
struct NearZero {
    double t0 = 0.0, c = 0.0, k = 0.0;

    double log_model(double t) const
    {
        const double u = t - t0;
        return 0.5 * std::log(c * c + k * k * u * u);
    }
    // antiderivative of log_model in u = t - t0
    double prim(double u) const
    {
        if (u == 0.0) return 0.0;
        if (c == 0.0) return u * std::log(k * std::abs(u)) - u;
        return 0.5 * (u * std::log(c * c + k * k * u * u) - 2.0 * u + 2.0 * (c / k) * std::atan(k * u / c));
    }
    double integral(double a, double b) const { return prim(b - t0) - prim(a - t0); }
};

double dlog_dt(const FuncValue& v, cplx x)
{
    // d/dt log|f(sigma+it) - x| = Re(i f' / (f - x))
    return -(v.df / (v.f - x)).imag();
}

}  // namespace

JensenValue jensen_time_average(const Evaluator& f, double sigma, double T, cplx x, const JensenOptions& opt)
{
    const double T0 = opt.T0;
    if (!(T > T0)) throw std::invalid_argument("jensen_time_average: need T > T0");
    int N = std::max(8, int(std::ceil((T - T0) / opt.step)));
    if (N % 2) ++N;
    const double h = (T - T0) / N;
    auto tk = [&](int k) { return T0 + h * k; };
    auto at = [&](double t) { return cplx(sigma, t); };

    std::vector<double> g(std::size_t(N) + 1), mod(std::size_t(N) + 1), rel(std::size_t(N) + 1);
    std::vector<cplx> val(std::size_t(N) + 1);
    {
        const int chunks = std::max(1, opt.threads) * 8;
        parallel_for(chunks, opt.threads, [&](int c) {
            const int k0 = int(long(N + 1) * c / chunks), k1 = int(long(N + 1) * (c + 1) / chunks);
            for (int k = k0; k < k1; ++k) {
                const FuncValue v = f.eval(at(tk(k)));
                val[k] = v.f - x;
                mod[k] = std::abs(val[k]);
                g[k] = std::log(mod[k]);
                rel[k] = mod[k] > 0 ? v.err / mod[k] : 1.0;
            }
        });
    }
    long evals = N + 1;

    // local minima of |f - x| on the grid that may hide a nearby zero
    std::vector<NearZero> near;
    for (int k = 0; k <= N; ++k) {
        const double left = k > 0 ? mod[k - 1] : 1e300, right = k < N ? mod[k + 1] : 1e300;
        if (!(mod[k] <= left && mod[k] <= right)) continue;
        const double slope = std::max(k > 0 ? std::abs(val[k] - val[k - 1]) : 0.0,
                                      k < N ? std::abs(val[k + 1] - val[k]) : 0.0) / h;
        if (!(mod[k] < 10.0 * opt.near_modulus || mod[k] < 2.0 * opt.near_distance * slope)) continue;
        const double lo = tk(std::max(k - 1, 0)), hi = tk(std::min(k + 1, N));
        double t = tk(k);
        FuncValue v = f.eval(at(t), true);
        ++evals;
        for (int it = 0; it < 12; ++it) {
            const cplx d = cplx(0, 1) * v.df;
            const double kk = std::norm(d);
            if (kk == 0.0) break;
            const double u = -(std::conj(d) * (v.f - x)).real() / kk;
            const double tn = std::clamp(t + u, lo, hi);
            if (std::abs(tn - t) < 1e-13 * std::max(1.0, std::abs(t))) break;
            t = tn;
            v = f.eval(at(t), true);
            ++evals;
        }
        NearZero z{t, std::abs(v.f - x), std::abs(v.df)};
        if (z.c < opt.near_modulus || (z.k > 0 && z.c / z.k < opt.near_distance)) near.push_back(z);
    }

    // singular regions: even-aligned cell ranges around each near-zero, merged
    struct Region {
        int k0, k1;
        std::vector<NearZero> zs;
    };
    std::vector<Region> regions;
    const int reach = std::max(2, int(std::ceil(std::max(opt.window, 2.0 * opt.near_distance) / h)));
    for (const auto& z : near) {
        const int kc = int(std::floor((z.t0 - T0) / h));
        int k0 = std::max(0, kc - reach), k1 = std::min(N, kc + 1 + reach);
        k0 -= k0 % 2;
        k1 += k1 % 2;
        k1 = std::min(k1, N);
        if (!regions.empty() && k0 <= regions.back().k1) {
            regions.back().k1 = std::max(regions.back().k1, k1);
            regions.back().zs.push_back(z);
        } else {
            regions.push_back({k0, k1, {z}});
        }
    }

    static const GaussLegendre gl16(16), gl8(8);
    double total = 0.0, quad_err = 0.0;

    // singular parts: analytic models plus Gauss-Legendre on the smooth remainder
    for (const auto& R : regions) {
        std::vector<double> cuts;
        for (int k = R.k0; k <= R.k1; ++k) cuts.push_back(tk(k));
        for (const auto& z : R.zs) {
            for (double e : {z.t0 - 0.5 * opt.window, z.t0 + 0.5 * opt.window})
                if (e > tk(R.k0) && e < tk(R.k1)) cuts.push_back(e);
        }
        std::sort(cuts.begin(), cuts.end());
        for (const auto& z : R.zs) total += z.integral(tk(R.k0), tk(R.k1));
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (b - a <= 0) continue;
            auto rem = [&](double t) {
                const FuncValue v = f.eval(at(t));
                double r = std::log(std::abs(v.f - x));
                for (const auto& z : R.zs) r -= z.log_model(t);
                return r;
            };
            const double m = 0.5 * (a + b), r = 0.5 * (b - a);
            double s16 = 0.0, s8 = 0.0;
            for (std::size_t j = 0; j < gl16.x.size(); ++j) s16 += gl16.w[j] * rem(m + r * gl16.x[j]);
            for (std::size_t j = 0; j < gl8.x.size(); ++j) s8 += gl8.w[j] * rem(m + r * gl8.x[j]);
            evals += 24;
            total += r * s16;
            quad_err += r * std::abs(s16 - s8);
        }
    }

    // regular runs: trapezoid with the endpoint correction; error from the 2h rule
    std::vector<std::pair<int, int>> runs;
    int start = 0;
    for (const auto& R : regions) {
        if (R.k0 > start) runs.push_back({start, R.k0});
        start = R.k1;
    }
    if (start < N) runs.push_back({start, N});
    for (auto [a, b] : runs) {
        const FuncValue va = f.eval(at(tk(a)), true), vb = f.eval(at(tk(b)), true);
        evals += 2;
        const double corr = dlog_dt(vb, x) - dlog_dt(va, x);
        double th = 0.5 * (g[a] + g[b]), t2 = 0.5 * (g[a] + g[b]);
        for (int k = a + 1; k < b; ++k) {
            th += g[k];
            if ((k - a) % 2 == 0) t2 += g[k];
        }
        th = th * h - h * h / 12.0 * corr;
        t2 = t2 * 2.0 * h - 4.0 * h * h / 12.0 * corr;
        total += th;
        quad_err += std::abs(th - t2) / 15.0;
    }

    JensenValue out;
    const double len = T - T0;
    out.phi = total / len;
    out.quad_err = quad_err / len;
    double ev = 0.0;
    for (int k = 0; k <= N; ++k) ev += (k == 0 || k == N ? 0.5 : 1.0) * std::min(rel[k], 1.0);
    out.eval_err = ev * h / len;

    const int nb = int(len / opt.block);
    if (nb >= 4) {
        std::vector<double> bm(std::size_t(nb), 0.0);
        std::vector<int> cnt(std::size_t(nb), 0);
        for (int k = 0; k < N; ++k) {
            const int b = std::min(nb - 1, int((tk(k) - T0) / len * nb));
            bm[b] += g[k];
            ++cnt[b];
        }
        double m = 0.0;
        for (int b = 0; b < nb; ++b) m += (bm[b] /= std::max(cnt[b], 1));
        m /= nb;
        double var = 0.0;
        for (double v : bm) var += (v - m) * (v - m);
        out.stat_err = std::sqrt(var / (nb - 1) / nb);
    }
    const FuncValue e0 = f.eval(at(T0), true), e1 = f.eval(at(T), true);
    evals += 2;
    out.flux = (std::abs(dlog_dt(e0, x)) + std::abs(dlog_dt(e1, x))) / len;
    out.err = out.quad_err + out.stat_err + out.eval_err;
    out.near_zeros = int(near.size());
    out.evaluations = evals;
    return out;
}

JensenValue jensen_torus(const TorusModel& model, cplx x, const QmcOptions& q, bool ratio)
{
    if (model.n > 12) throw std::invalid_argument("jensen_torus: n must be at most 12");
    JensenValue out;
    if (ratio) {
        if (model.J() != 2) throw std::invalid_argument("jensen_torus: ratio form needs two characters");
        if (x != cplx(0.0)) throw std::invalid_argument("jensen_torus: ratio form is for x = 0");
        const cplx target = ratio_target(model);
        const auto rm = qmc_integrate(model.n, 1, q, [&](const double* th, double* acc) {
            acc[0] += std::log(std::abs(sample_ratio(model, th).h - target));
        });
        out.phi = rm.mean(0) + std::log(std::abs(model.a_list[1]));
        out.stat_err = rm.stderr_of(0);
    } else {
        const auto rm = qmc_integrate(model.n, 1, q, [&](const double* th, double* acc) {
            acc[0] += std::log(std::abs(sample(model, th).E - x));
        });
        out.phi = rm.mean(0);
        out.stat_err = rm.stderr_of(0);
    }
    out.err = out.stat_err;
    out.evaluations = long(q.replicates) << q.log2_points;
    return out;
}

SecondDifference torus_second_difference(const TorusModel& model, double delta, cplx x, const QmcOptions& q)
{
    if (!(model.sigma - 2.0 * delta > 0.5)) throw std::invalid_argument("torus_second_difference: step too large");
    std::vector<TorusModel> ms;
    for (int k = -2; k <= 2; ++k) ms.push_back(model.at_sigma(model.sigma + k * delta));
    const auto rm = qmc_integrate(model.n, 5, q, [&](const double* th, double* acc) {
        for (int k = 0; k < 5; ++k) acc[k] += std::log(std::abs(sample(ms[k], th).E - x));
    });
    const double d2 = delta * delta;
    const auto one = rm.combine([&](const std::vector<double>& v) { return (v[3] - 2.0 * v[2] + v[1]) / d2; });
    const auto two = rm.combine([&](const std::vector<double>& v) { return (v[4] - 2.0 * v[2] + v[0]) / (4.0 * d2); });
    return {one.first, one.second + std::abs(one.first - two.first) / 3.0};
}

JensenProfile jensen_profile(const Evaluator& f, const std::vector<double>& sigmas, double T, cplx x,
                             const JensenOptions& opt)
{
    JensenProfile p;
    p.sigma_grid = sigmas;
    p.T_used = T;
    const std::size_t n = sigmas.size();
    p.phi.resize(n);
    p.phi_err.resize(n);
    p.local_err.resize(n);
    p.flux.resize(n);
    JensenOptions inner = opt;
    inner.threads = 1;
    parallel_for(int(n), opt.threads, [&](int i) {
        const JensenValue v = jensen_time_average(f, sigmas[i], T, x, inner);
        p.phi[i] = v.phi;
        p.phi_err[i] = v.err;
        p.local_err[i] = v.quad_err + v.eval_err;
        p.flux[i] = v.flux;
    });
    return derivative_profile(std::move(p));
}

JensenProfile derivative_profile(JensenProfile p)
{
    const std::size_t n = p.sigma_grid.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.dphi.assign(n, nan);
    p.dphi_err.assign(n, nan);
    p.d2phi.assign(n, nan);
    p.d2phi_err.assign(n, nan);
    if (n < 2) return p;
    if (p.local_err.size() != n) p.local_err = p.phi_err.empty() ? std::vector<double>(n, 0.0) : p.phi_err;
    if (p.flux.size() != n) p.flux.assign(n, 0.0);
    const double d = p.sigma_grid[1] - p.sigma_grid[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((p.sigma_grid[i] - p.sigma_grid[i - 1]) - d) > 1e-9 * std::max(1.0, std::abs(d)))
            throw std::invalid_argument("derivative_profile: grid spacing must be uniform");
    const auto& e = p.local_err;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? i : i + 1;
        const double fl = std::max({p.flux[a], p.flux[i], p.flux[b]});
        p.dphi[i] = (p.phi[b] - p.phi[a]) / (d * double(b - a));
        p.dphi_err[i] = (e[a] + e[b]) / (d * double(b - a)) + d * fl;
        if (i == 0 || i + 1 == n) continue;
        p.d2phi[i] = (p.phi[i + 1] - 2.0 * p.phi[i] + p.phi[i - 1]) / (d * d);
        p.d2phi_err[i] = (e[i - 1] + 2.0 * e[i] + e[i + 1]) / (d * d) + fl;
        if (d * d < 10.0 * e[i]) p.coarse = true;
    }
    return p;
}

namespace {

std::size_t grid_index(const JensenProfile& p, double s)
{
    for (std::size_t i = 0; i < p.sigma_grid.size(); ++i)
        if (std::abs(p.sigma_grid[i] - s) < 1e-9) return i;
    throw std::invalid_argument("zero_frequency: sigma is not a grid point");
}

}  // namespace

ZeroFrequency zero_frequency(const JensenProfile& p, double sigma1, double sigma2)
{
    ZeroFrequency z;
    if (sigma1 == sigma2) return z;
    const std::size_t i1 = grid_index(p, sigma1), i2 = grid_index(p, sigma2);
    const std::size_t n = p.sigma_grid.size();
    if (i1 == 0 || i2 == 0 || i1 + 1 >= n || i2 + 1 >= n) throw std::invalid_argument("zero_frequency: need interior points");
    if (p.dphi.size() != n) throw std::invalid_argument("zero_frequency: run derivative_profile first");
    const double d = p.sigma_grid[1] - p.sigma_grid[0], tp = 2.0 * std::numbers::pi;
    const double fl = *std::max_element(p.flux.begin(), p.flux.end());
    z.value = (p.dphi[i2] - p.dphi[i1]) / tp;
    z.err = (p.dphi_err[i1] + p.dphi_err[i2]) / tp + std::abs(sigma2 - sigma1) * fl / tp;
    auto fwd = [&](std::size_t i) { return (p.phi[i + 1] - p.phi[i]) / d; };
    auto bwd = [&](std::size_t i) { return (p.phi[i] - p.phi[i - 1]) / d; };
    z.lo = (bwd(i2) - fwd(i1)) / tp;
    z.hi = (fwd(i2) - bwd(i1)) / tp;
    return z;
}

LinearityReport detect_linearity(const JensenProfile& p, double sigma_min, double tol)
{
    if (!(sigma_min > 1.0)) throw std::invalid_argument("detect_linearity: sigma_min must exceed 1");
    LinearityReport rep;
    const std::size_t n = p.sigma_grid.size();
    if (p.d2phi.size() != n) return rep;
    const double d = n > 1 ? p.sigma_grid[1] - p.sigma_grid[0] : 0.0;
    std::size_t i = 1;
    while (i + 1 < n) {
        auto flat = [&](std::size_t k) {
            return p.sigma_grid[k] > sigma_min && std::isfinite(p.d2phi[k]) &&
                   std::abs(p.d2phi[k]) < 2.0 * p.d2phi_err[k];
        };
        if (!flat(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 2 < n && flat(j + 1)) ++j;
        if (j - i + 1 >= 3) {
            // least squares line through phi on the run
            double sx = 0, sy = 0, m = double(j - i + 1);
            for (std::size_t k = i; k <= j; ++k) {
                sx += p.sigma_grid[k];
                sy += p.phi[k];
            }
            const double xb = sx / m;
            double sxx = 0, sxy = 0;
            for (std::size_t k = i; k <= j; ++k) {
                sxx += (p.sigma_grid[k] - xb) * (p.sigma_grid[k] - xb);
                sxy += (p.sigma_grid[k] - xb) * p.phi[k];
            }
            LinearityInterval iv;
            iv.sigma_lo = p.sigma_grid[i];
            iv.sigma_hi = p.sigma_grid[j];
            iv.slope = sxy / sxx;
            double fl = 0.0;
            for (std::size_t k = i; k <= j; ++k) {
                iv.slope_err += std::abs(p.sigma_grid[k] - xb) / sxx * p.local_err[k];
                fl = std::max(fl, p.flux[k]);
            }
            iv.slope_err += d * fl;
            const double nn = std::exp(-iv.slope);
            if (nn >= 0.5 && nn < 1e4 + 0.5) {
                const int cand = int(std::lround(nn));
                if (cand >= 1 && std::abs(iv.slope + std::log(double(cand))) < tol) iv.n = cand;
            }
            rep.intervals.push_back(iv);
        }
        i = j + 1;
    }
    return rep;
}

}  // namespace epz
