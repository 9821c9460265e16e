#include "epz/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "epz/jensen.hpp"
#include "epz/parallel.hpp"
#include "epz/special.hpp"

namespace epz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 - c X + e X^2 for the three splitting types
void factor_shape(const PrimeLocalData& pd, const ClassCharacter& chi, double& c, double& e)
{
    switch (pd.split_type) {
    case SplitType::Inert:
        c = 0.0;
        e = -1.0;
        return;
    case SplitType::Ramified:
        c = chi.re(std::size_t(*pd.class_index));
        e = 0.0;
        return;
    case SplitType::Split:
        c = 2.0 * chi.re(std::size_t(*pd.class_index));
        e = 1.0;
        return;
    }
}

// E_n on the line: the same products with X = p^{-s}.
class ModelEvaluator : public Evaluator {
public:
    explicit ModelEvaluator(const TorusModel& m) : m_(m) {}
    FuncValue eval(cplx s, bool deriv) const override
    {
        FuncValue out{};
        for (int j = 0; j < m_.J(); ++j) {
            cplx prod = 1.0, dlog = 0.0;
            for (const auto& pd : m_.primes) {
                const double lp = std::log(double(pd.p));
                const cplx X = std::exp(-s * lp);
                double c = 0.0, e = 0.0;
                factor_shape(pd, m_.chars[j], c, e);
                const cplx den = 1.0 - c * X + e * X * X;
                prod /= den;
                dlog += (-c + 2.0 * e * X) * lp * X / den;
            }
            out.f += m_.a_list[j] * prod;
            if (deriv) out.df += m_.a_list[j] * prod * dlog;
            out.err += 4e-16 * (m_.n + 1) * std::abs(m_.a_list[j] * prod) * (1.0 + 1e-2 * std::abs(s.imag()));
        }
        out.derr = out.err * 10.0;
        return out;
    }

private:
    const TorusModel& m_;
};

}  // namespace

TorusModel TorusModel::build(const ClassGroup& G, const QuadForm& Q, int n, double sigma)
{
    if (n < 0 || n > 20) throw std::invalid_argument("TorusModel: n must lie in [0, 20]");
    if (!(sigma > 0.5)) throw std::invalid_argument("TorusModel: sigma must exceed 1/2");
    TorusModel m;
    m.n = n;
    m.sigma = sigma;
    const EpsteinCoefficients coef = epstein_coefficients(G, reduce(Q));
    m.chars = coef.chars;
    m.a_list = coef.a_list;
    for (i64 p : first_primes(n)) m.primes.push_back(classify_prime(G, p));
    return m;
}

TorusModel TorusModel::at_sigma(double s) const
{
    if (!(s > 0.5)) throw std::invalid_argument("TorusModel: sigma must exceed 1/2");
    TorusModel m = *this;
    m.sigma = s;
    return m;
}

TorusSample sample(const TorusModel& model, const double* theta)
{
    const int J = model.J();
    TorusSample out;
    out.L.assign(std::size_t(J), 1.0);
    out.Lprime.assign(std::size_t(J), 0.0);
    std::vector<cplx> dlog(std::size_t(J), 0.0);
    for (int m = 0; m < model.n; ++m) {
        const auto& pd = model.primes[m];
        const double lp = std::log(double(pd.p));
        const cplx X = std::exp(-model.sigma * lp) * std::polar(1.0, kTwoPi * theta[m]);
        for (int j = 0; j < J; ++j) {
            double c = 0.0, e = 0.0;
            factor_shape(pd, model.chars[j], c, e);
            const cplx den = 1.0 - c * X + e * X * X;
            out.L[j] /= den;
            dlog[j] -= lp * (c * X - 2.0 * e * X * X) / den;
        }
    }
    out.E = 0.0;
    out.Eprime = 0.0;
    for (int j = 0; j < J; ++j) {
        out.Lprime[j] = out.L[j] * dlog[j];
        out.E += model.a_list[j] * out.L[j];
        out.Eprime += model.a_list[j] * out.Lprime[j];
    }
    return out;
}

TorusSample sample(const TorusModel& model, const std::vector<double>& theta)
{
    if (int(theta.size()) < model.n) throw std::invalid_argument("sample: theta has too few coordinates");
    return sample(model, theta.data());
}

RatioSample sample_ratio(const TorusModel& model, const double* theta)
{
    if (model.J() != 2) throw std::invalid_argument("sample_ratio: needs exactly two characters");
    const TorusSample s = sample(model, theta);
    const cplx h = s.L[1] / s.L[0];
    return {h, h * (s.Lprime[1] / s.L[1] - s.Lprime[0] / s.L[0])};
}

LDerivs sample_L_derivs(const TorusModel& model, int j, const double* theta)
{
    cplx L = 1.0, s1 = 0.0, s2 = 0.0;
    for (int m = 0; m < model.n; ++m) {
        const auto& pd = model.primes[m];
        const double lp = std::log(double(pd.p));
        const cplx X = std::exp(-model.sigma * lp) * std::polar(1.0, kTwoPi * theta[m]);
        double c = 0.0, e = 0.0;
        factor_shape(pd, model.chars[j], c, e);
        const cplx den = 1.0 - c * X + e * X * X;
        const cplx d1 = lp * (c * X - 2.0 * e * X * X);
        const cplx d2 = -lp * lp * (c * X - 4.0 * e * X * X);
        L /= den;
        s1 -= d1 / den;
        s2 += -d2 / den + (d1 / den) * (d1 / den);
    }
    return {L, L * s1, L * (s1 * s1 + s2)};
}

std::vector<double> curve_point(const TorusModel& model, double t)
{
    std::vector<double> th(std::size_t(model.n));
    for (int m = 0; m < model.n; ++m) {
        const double v = -t * std::log(double(model.primes[m].p)) / kTwoPi;
        th[m] = v - std::floor(v);
    }
    return th;
}

std::string to_string(DensityTarget t)
{
    return t == DensityTarget::RatioAtMinusA ? "RatioAtMinusA" : "EAtX";
}

std::string to_string(DensityMethod m)
{
    return m == DensityMethod::WeightedKDE ? "WeightedKDE" : "FourierInversion";
}

cplx ratio_target(const TorusModel& model)
{
    if (model.J() != 2) throw std::invalid_argument("ratio_target: needs exactly two characters");
    return -model.a_list[0] / model.a_list[1];
}

namespace {

// value and weight |value'|^2 for the chosen target
inline void target_point(const TorusModel& model, DensityTarget target, const double* th, cplx& v, double& w)
{
    if (target == DensityTarget::RatioAtMinusA) {
        const RatioSample r = sample_ratio(model, th);
        v = r.h;
        w = std::norm(r.hprime);
    } else {
        const TorusSample s = sample(model, th);
        v = s.E;
        w = std::norm(s.Eprime);
    }
}

}  // namespace

std::vector<FourierSample> estimate_nu_hat(const TorusModel& model, const std::vector<cplx>& ys, const QmcOptions& q,
                                           DensityTarget target)
{
    const int K = int(ys.size());
    const auto rm = qmc_integrate(model.n, 2 * K, q, [&](const double* th, double* acc) {
        cplx v;
        double w;
        target_point(model, target, th, v, w);
        for (int k = 0; k < K; ++k) {
            const double ph = v.real() * ys[k].real() + v.imag() * ys[k].imag();
            acc[2 * k] += w * std::cos(ph);
            acc[2 * k + 1] += w * std::sin(ph);
        }
    });
    std::vector<FourierSample> out;
    for (int k = 0; k < K; ++k)
        out.push_back({ys[k], cplx(rm.mean(2 * k), rm.mean(2 * k + 1)),
                       std::hypot(rm.stderr_of(2 * k), rm.stderr_of(2 * k + 1))});
    return out;
}

FourierSample estimate_nu_hat(const TorusModel& model, cplx y, const QmcOptions& q, DensityTarget target)
{
    return estimate_nu_hat(model, std::vector<cplx>{y}, q, target).front();
}

DecayFit fit_nu_hat_decay(const TorusModel& model, const QmcOptions& q, DensityTarget target, double r_lo,
                          double r_hi, int n_radii, int n_dirs)
{
    std::vector<cplx> ys;
    DecayFit fit;
    for (int i = 0; i < n_radii; ++i) {
        const double r = n_radii == 1 ? r_lo : r_lo * std::pow(r_hi / r_lo, double(i) / (n_radii - 1));
        fit.radii.push_back(r);
        // nu_hat(-y) = conj nu_hat(y), so half the circle suffices
        for (int k = 0; k < n_dirs; ++k) ys.push_back(std::polar(r, std::numbers::pi * (k + 0.5) / n_dirs));
    }
    const auto nh = estimate_nu_hat(model, ys, q, target);
    std::vector<double> lx, ly;
    for (int i = 0; i < n_radii; ++i) {
        double best = -1.0, be = 0.0;
        for (int k = 0; k < n_dirs; ++k) {
            const auto& f = nh[std::size_t(i * n_dirs + k)];
            if (std::abs(f.nu_hat) > best) {
                best = std::abs(f.nu_hat);
                be = f.err;
            }
        }
        fit.max_abs.push_back(best);
        fit.max_err.push_back(be);
        if (best > 2.0 * be) {
            lx.push_back(std::log(fit.radii[i]));
            ly.push_back(std::log(best));
            fit.r_max_resolved = fit.radii[i];
        }
    }
    fit.points_used = int(lx.size());
    if (fit.points_used >= 2) {
        const double m = double(lx.size());
        double sx = 0, sy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
        }
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - sx / m) * (lx[i] - sx / m);
            sxy += (lx[i] - sx / m) * (ly[i] - sy / m);
        }
        fit.exponent = sxy / sxx;
        for (std::size_t i = 0; i < lx.size(); ++i)
            fit.K = std::max(fit.K, std::exp(ly[i] - fit.exponent * lx[i]));
    } else {
        fit.exponent = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

DensityEstimate estimate_density(const TorusModel& model, cplx x, DensityMethod method, const QmcOptions& q,
                                 DensityTarget target)
{
    if (model.n < 2) throw std::invalid_argument("estimate_density: n >= 2 required");
    if (target == DensityTarget::RatioAtMinusA) x = ratio_target(model);
    DensityEstimate out;
    out.target = target;
    out.x = x;
    out.method = method;
    out.samples_used = long(q.replicates) << q.log2_points;

    if (method == DensityMethod::WeightedKDE) {
        // pass 1: weighted moments for the bandwidth
        const auto mom = qmc_integrate(model.n, 6, q, [&](const double* th, double* acc) {
            cplx v;
            double w;
            target_point(model, target, th, v, w);
            acc[0] += w;
            acc[1] += w * w;
            acc[2] += w * v.real();
            acc[3] += w * v.real() * v.real();
            acc[4] += w * v.imag();
            acc[5] += w * v.imag() * v.imag();
        });
        const double W = mom.mean(0), W2 = mom.mean(1);
        const double mr = mom.mean(2) / W, mi = mom.mean(4) / W;
        const double vr = mom.mean(3) / W - mr * mr, vi = mom.mean(5) / W - mi * mi;
        const double neff = double(out.samples_used) * W * W / W2;
        const double sd = std::sqrt(std::max(0.5 * (vr + vi), 1e-300));
        const double h0 = sd * std::pow(neff, -1.0 / 6.0);
        // pass 2: Gaussian kernels at h0 * 2^{1-k}; halve until the estimate is stable within noise
        constexpr int H = 16;
        double hs[H];
        for (int k = 0; k < H; ++k) hs[k] = h0 * std::ldexp(1.0, 1 - k);
        const auto ks = qmc_integrate(model.n, H, q, [&](const double* th, double* acc) {
            cplx v;
            double w;
            target_point(model, target, th, v, w);
            const double d2 = std::norm(v - x);
            for (int k = 0; k < H; ++k)
                acc[k] += w * std::exp(-0.5 * d2 / (hs[k] * hs[k])) / (kTwoPi * hs[k] * hs[k]);
        });
        auto stable = [&](int k) {
            return std::abs(ks.mean(k) - ks.mean(k + 1)) <= 2.0 * (ks.stderr_of(k) + ks.stderr_of(k + 1));
        };
        int sel = H - 2;
        for (int k = 1; k + 2 < H; ++k) {
            if (stable(k) && stable(k + 1)) {
                sel = k;
                break;
            }
        }
        out.bandwidth = hs[sel];
        out.G_double = ks.mean(sel - 1);
        out.G_half = ks.mean(sel + 1);
        double G = ks.mean(sel);
        double err = ks.stderr_of(sel) + std::abs(G - out.G_half);
        if (G < 0) {
            err += -G;
            G = 0.0;
        }
        out.G = G;
        out.G_err = std::max(err, 1e-300);
        return out;
    }

    const DecayFit fit = fit_nu_hat_decay(model, q, target);
    if (!(fit.points_used >= 3) || !(fit.exponent < -2.0))
        throw DomainError("estimate_density: Fourier transform decay too slow or unresolved for inversion");
    const double Y = std::max(fit.r_max_resolved, 10.0);
    out.bandwidth = Y;
    const auto ks = qmc_integrate(model.n, 1, q, [&](const double* th, double* acc) {
        cplx v;
        double w;
        target_point(model, target, th, v, w);
        const double r = std::abs(v - x);
        // (2 pi)^{-2} int_{|y| <= Y} e^{i <z, y>} dy = Y J_1(Y r) / (2 pi r)
        const double k = Y * r < 1e-8 ? Y * Y / (2.0 * kTwoPi) : Y * std::cyl_bessel_j(1.0, Y * r) / (kTwoPi * r);
        acc[0] += w * k;
    });
    const double alpha = -fit.exponent;
    const double tail = fit.K * std::pow(Y, 2.0 - alpha) / (alpha - 2.0) / kTwoPi;
    out.G = ks.mean(0);
    out.G_err = ks.stderr_of(0) + tail;
    return out;
}

PredictedConstant predicted_constant(const ClassGroup& G, const QuadForm& Q, double sigma1, double sigma2, int n,
                                     int quadrature_points, const QmcOptions& q, DensityTarget target)
{
    PredictedConstant out;
    if (sigma1 == sigma2) return out;
    if (!(sigma1 > 0.5 && sigma2 > sigma1)) throw std::invalid_argument("predicted_constant: need 1/2 < sigma1 < sigma2");
    const TorusModel base = TorusModel::build(G, Q, n, sigma1);
    const GaussLegendre gl(quadrature_points);
    const double mid = 0.5 * (sigma1 + sigma2), rad = 0.5 * (sigma2 - sigma1);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double s = mid + rad * gl.x[i];
        const DensityEstimate d = estimate_density(base.at_sigma(s), 0.0, DensityMethod::WeightedKDE, q, target);
        out.sigmas.push_back(s);
        out.G.push_back(d.G);
        out.G_err.push_back(d.G_err);
        out.value += rad * gl.w[i] * d.G;
        out.err += rad * gl.w[i] * d.G_err;
    }
    return out;
}

std::vector<MomentCheck> check_moment_bound(const TorusModel& model, const std::vector<std::pair<int, int>>& orders,
                                            double eps, const QmcOptions& q)
{
    if (!(eps > 0 && eps < model.sigma - 0.5)) throw std::invalid_argument("check_moment_bound: need 0 < eps < sigma - 1/2");
    for (auto [m, k] : orders)
        if (m < 0 || k < 0 || m > 2 || k > 2) throw std::invalid_argument("check_moment_bound: orders up to 2");
    const int J = model.J(), O = int(orders.size());
    const auto rm = qmc_integrate(model.n, 2 * J * O, q, [&](const double* th, double* acc) {
        for (int j = 0; j < J; ++j) {
            const LDerivs d = sample_L_derivs(model, j, th);
            const cplx v[3] = {d.L, d.d1, d.d2};
            for (int o = 0; o < O; ++o) {
                const cplx z = v[orders[o].first] * std::conj(v[orders[o].second]);
                acc[2 * (j * O + o)] += z.real();
                acc[2 * (j * O + o) + 1] += z.imag();
            }
        }
    });
    const double beta = 2.0 * (model.sigma - eps);
    const double z4 = std::pow(zeta(cplx(beta, 0.0)).value.real(), 4);
    // prod over all primes of (1+x)/(1-x)^3, x = p^{-beta}: explicit up to 10^6, tail via (1-x)^{-4} and
    // pi(t) < 1.26 t / log t
    double logprod = 0.0;
    const double P = 1e6;
    for (i64 p : primes_up_to(i64(P))) {
        const double x = std::pow(double(p), -beta);
        logprod += std::log1p(x) - 3.0 * std::log1p(-x);
    }
    logprod += 4.0 * 1.01 * 1.26 * beta * std::pow(P, 1.0 - beta) / ((beta - 1.0) * std::log(P));
    const double eprod = std::exp(logprod);
    std::vector<MomentCheck> out;
    auto fact = [](int a) { return a == 2 ? 2.0 : 1.0; };
    for (int j = 0; j < J; ++j)
        for (int o = 0; o < O; ++o) {
            MomentCheck c;
            c.j = j;
            c.m = orders[o].first;
            c.k = orders[o].second;
            const int id = 2 * (j * O + o);
            c.estimate = std::hypot(rm.mean(id), rm.mean(id + 1));
            c.err = std::hypot(rm.stderr_of(id), rm.stderr_of(id + 1));
            // Cauchy on the diagonal variable, radius eps
            const double cauchy = fact(c.m) * fact(c.k) * std::pow(eps, -(c.m + c.k));
            c.majorant = cauchy * z4;
            c.euler_bound = cauchy * eprod;
            c.holds = c.estimate <= c.majorant;
            out.push_back(c);
        }
    return out;
}

double single_factor_moment_quadrature(double p, double chi, double sigma)
{
    // periodic integrand: the trapezoid rule converges geometrically
    const int N = 4096;
    const double x = std::pow(p, -sigma);
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += 1.0 / std::norm(1.0 - chi * x * std::polar(1.0, kTwoPi * k / N));
    return s / N;
}

double oscillatory_integral(const std::function<double(double)>& g, double amplitude)
{
    static const GaussLegendre gl(20);
    const int panels = 4 + int(std::ceil(2.0 * amplitude));
    cplx acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = double(i) / panels, r = 0.5 / panels;
        for (std::size_t j = 0; j < gl.x.size(); ++j) acc += gl.w[j] * r * std::polar(1.0, g(a + r + r * gl.x[j]));
    }
    return std::abs(acc);
}

OscillatoryReport check_oscillatory_bound(const ClassGroup& G, const std::vector<ClassCharacter>& chars, double sigma,
                                          const std::vector<double>& norms, int n_split, int dirs_per_norm,
                                          double delta, std::uint64_t seed)
{
    OscillatoryReport rep;
    rep.sigma = sigma;
    rep.delta = delta;
    const int J = int(chars.size());
    std::vector<PrimeLocalData> split;
    for (i64 p = 2; int(split.size()) < n_split; ++p) {
        if (!is_prime(p)) continue;
        const PrimeLocalData pd = classify_prime(G, p);
        if (pd.split_type == SplitType::Split) split.push_back(pd);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> best_per_norm(norms.size(), 0.0);
    for (const auto& pd : split) {
        const double r = std::pow(double(pd.p), -sigma);
        std::vector<double> w(static_cast<std::size_t>(J));
        for (int h = 0; h < J; ++h) w[h] = 2.0 * chars[h].re(std::size_t(*pd.class_index));
        for (std::size_t ni = 0; ni < norms.size(); ++ni) {
            for (int d = 0; d < dirs_per_norm; ++d) {
                std::vector<cplx> y(static_cast<std::size_t>(J));
                double nn = 0.0;
                for (auto& v : y) {
                    v = cplx(nd(rng), nd(rng));
                    nn += std::norm(v);
                }
                for (auto& v : y) v *= norms[ni] / std::sqrt(nn);
                cplx lin = 0.0;
                for (int h = 0; h < J; ++h) lin += w[h] * y[h];
                if (std::abs(lin) < delta * norms[ni]) {
                    ++rep.skipped;
                    continue;
                }
                // g = sum_h Re f_h y_h + Im f_h y'_h, f_h = -log(1 - w_h X + X^2), X = r e^{2 pi i theta}
                auto g = [&](double th) {
                    const cplx X = std::polar(r, kTwoPi * th);
                    double s = 0.0;
                    for (int h = 0; h < J; ++h) {
                        const cplx f = -std::log(1.0 - w[h] * X + X * X);
                        s += f.real() * y[h].real() + f.imag() * y[h].imag();
                    }
                    return s;
                };
                const double amp = norms[ni] * (-2.0 * std::log1p(-r) + 2.0 * r) * std::sqrt(double(J));
                OscillatoryPoint pt;
                pt.p = long(pd.p);
                pt.norm_y = norms[ni];
                pt.abs_integral = oscillatory_integral(g, amp);
                pt.product = pt.abs_integral * std::sqrt(r * norms[ni]);
                rep.C_fit = std::max(rep.C_fit, pt.product);
                best_per_norm[ni] = std::max(best_per_norm[ni], pt.product);
                rep.points.push_back(pt);
            }
        }
    }
    if (norms.size() >= 2) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < norms.size(); ++i)
            if (best_per_norm[i] > 0) {
                lx.push_back(std::log(norms[i]));
                ly.push_back(std::log(best_per_norm[i]));
            }
        if (lx.size() >= 2) {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                mx += lx[i];
                my += ly[i];
            }
            mx /= lx.size();
            my /= lx.size();
            double sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                sxx += (lx[i] - mx) * (lx[i] - mx);
                sxy += (lx[i] - mx) * (ly[i] - my);
            }
            rep.growth_slope = sxy / sxx;
        }
    }
    return rep;
}

ClassSumReport check_class_sum_condition(const ClassGroup& G, int trials, std::uint64_t seed)
{
    const auto all = characters(G);
    std::vector<ClassCharacter> chi;
    for (int i : character_pair_representatives(all)) chi.push_back(all[std::size_t(i)]);
    const int J = int(chi.size()), h = int(G.h);
    ClassSumReport rep;
    rep.trials = trials;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int t = 0; t < trials; ++t) {
        std::vector<cplx> y(static_cast<std::size_t>(J));
        double n2 = 0.0, weighted = 0.0;
        for (int k = 0; k < J; ++k) {
            y[k] = cplx(nd(rng), nd(rng));
            n2 += std::norm(y[k]);
            weighted += (chi[k].is_real ? 1.0 : 0.5) * std::norm(y[k]);
        }
        double best = 0.0, total = 0.0;
        for (int c = 0; c < h; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < J; ++k) s += chi[k].re(std::size_t(c)) * y[k];
            best = std::max(best, std::norm(s));
            total += std::norm(s);
        }
        if (best >= 0.5 * n2) ++rep.half_condition_met;
        if (std::sqrt(best) >= std::sqrt(n2) / 7.0) ++rep.seventh_condition_met;
        rep.min_ratio = std::min(rep.min_ratio, std::sqrt(best / n2));
        // sum over classes of |sum_h Re chi_h(C) y_h|^2 = h sum_h kappa_h |y_h|^2, kappa = 1 real, 1/2 complex
        rep.identity_max_dev = std::max(rep.identity_max_dev, std::abs(total - h * weighted) / (h * weighted));
    }
    rep.automatic = rep.half_condition_met == rep.trials;
    return rep;
}

WeylCheck check_weyl(const TorusModel& model, const std::function<double(const double*)>& F, double T,
                     const QmcOptions& q)
{
    if (!(T > 0)) throw std::invalid_argument("check_weyl: T must be positive");
    WeylCheck out;
    const int N = std::max(2, int(std::ceil(T / 0.01)));
    const double h = T / N;
    double s = 0.0;
    const int nb = std::max(1, int(T / 50.0));
    std::vector<double> bm(std::size_t(nb), 0.0);
    std::vector<int> bc(std::size_t(nb), 0);
    for (int k = 0; k <= N; ++k) {
        const double t = h * k;
        const double v = F(curve_point(model, t).data());
        s += (k == 0 || k == N ? 0.5 : 1.0) * v;
        const int b = std::min(nb - 1, int(t / T * nb));
        bm[b] += v;
        ++bc[b];
    }
    out.time_average = s * h / T;
    if (nb >= 4) {
        double m = 0;
        for (int b = 0; b < nb; ++b) m += (bm[b] /= bc[b]);
        m /= nb;
        double var = 0;
        for (double v : bm) var += (v - m) * (v - m);
        out.time_err = std::sqrt(var / (nb - 1) / nb);
    }
    const auto rm = qmc_integrate(model.n, 1, q, [&](const double* th, double* acc) { acc[0] += F(th); });
    out.torus_average = rm.mean(0);
    out.torus_err = rm.stderr_of(0);
    return out;
}

WeylCheck check_weyl_log(const TorusModel& model, double T, const QmcOptions& q)
{
    WeylCheck out;
    const ModelEvaluator ev(model);
    JensenOptions opt;
    opt.T0 = 0.0;
    opt.threads = q.threads;
    const JensenValue jv = jensen_time_average(ev, model.sigma, T, 0.0, opt);
    out.time_average = jv.phi;
    out.time_err = jv.err;
    const JensenValue tv = jensen_torus(model, 0.0, q);
    out.torus_average = tv.phi;
    out.torus_err = tv.err;
    return out;
}

}  // namespace epz
