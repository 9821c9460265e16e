#include "epz/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "epz/lfunc.hpp"
#include "epz/parallel.hpp"

namespace epz {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_floor(const FuncValue& v, cplx z, const ZeroOptions& opt)
{
    const double m = std::abs(v.f);
    if (!(m > opt.floor_factor * v.err) || !std::isfinite(m))
        throw BoundaryZero("boundary modulus " + std::to_string(m) + " below certification floor at " +
                           std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
}

double jitter(std::mt19937_64& rng, double amp)
{
    std::uniform_real_distribution<double> u(-amp, amp);
    return u(rng);
}

std::vector<ZeroRecord> dedup(std::vector<ZeroRecord> zs, double tol)
{
    std::sort(zs.begin(), zs.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
        return a.location.real() < b.location.real();
    });
    std::vector<ZeroRecord> out;
    for (const auto& z : zs) {
        bool dup = false;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (z.location.imag() - it->location.imag() > tol) break;
            if (std::abs(z.location - it->location) < tol) {
                dup = true;
                if (z.certified && !it->certified) *it = z;
                break;
            }
        }
        if (!dup) out.push_back(z);
    }
    return out;
}

}  // namespace

PhaseTrack track_segment(const Evaluator& f, cplx z0, cplx z1, const ZeroOptions& opt)
{
    PhaseTrack pt;
    const double L = std::abs(z1 - z0);
    const bool guard = opt.derivative_guard;
    FuncValue v0 = f.eval(z0, guard);
    ++pt.evaluations;
    check_floor(v0, z0, opt);
    pt.min_modulus = std::abs(v0.f);
    if (L == 0.0) return pt;
    const cplx dir = (z1 - z0) / L;
    double u = 0.0, h = std::min(opt.step, L);
    while (u < L) {
        const double hh = std::min(h, L - u);
        const bool last = hh >= L - u;
        const cplx z = last ? z1 : z0 + (u + hh) * dir;
        const FuncValue v = f.eval(z, guard);
        ++pt.evaluations;
        check_floor(v, z, opt);
        const double d = std::arg(v.f / v0.f);
        bool ok = std::abs(d) < kPi / 2.0 && std::abs(v.f - v0.f) < std::max(std::abs(v.f), std::abs(v0.f));
        // step no longer than the distance |f/f'| to a nearby zero at either end
        if (guard && ok)
            ok = hh * std::abs(v0.df) <= std::abs(v0.f) && hh * std::abs(v.df) <= std::abs(v.f);
        if (!ok) {
            if (hh < 1e-9) throw BoundaryZero("phase step unresolved near a boundary zero");
            h = 0.5 * hh;
            continue;
        }
        pt.dphase += d;
        pt.min_modulus = std::min(pt.min_modulus, std::abs(v.f));
        u = last ? L : u + hh;
        v0 = v;
        h = std::min(opt.step, 2.0 * hh);
    }
    return pt;
}

int winding_count(const Evaluator& f, const Rectangle& r, const ZeroOptions& opt, double* min_modulus,
                  long* evaluations)
{
    if (!(r.sigma1 < r.sigma2) || !(r.t1 < r.t2)) throw std::invalid_argument("winding_count: degenerate rectangle");
    const cplx c[4] = {{r.sigma1, r.t1}, {r.sigma2, r.t1}, {r.sigma2, r.t2}, {r.sigma1, r.t2}};
    double total = 0.0, mm = 1e300;
    long ev = 0;
    for (int k = 0; k < 4; ++k) {
        const PhaseTrack p = track_segment(f, c[k], c[(k + 1) % 4], opt);
        total += p.dphase;
        mm = std::min(mm, p.min_modulus);
        ev += p.evaluations;
    }
    if (min_modulus) *min_modulus = mm;
    if (evaluations) *evaluations += ev;
    return int(std::lround(total / (2.0 * kPi)));
}

int winding_circle(const Evaluator& f, cplx c, double r, const ZeroOptions& opt)
{
    constexpr int K = 32;
    ZeroOptions o = opt;
    o.step = r / 4.0;
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        const cplx a = c + std::polar(r, 2.0 * kPi * k / K);
        const cplx b = c + std::polar(r, 2.0 * kPi * (k + 1) / K);
        total += track_segment(f, a, b, o).dphase;
    }
    return int(std::lround(total / (2.0 * kPi)));
}

ZeroRecord refine_zero(const Evaluator& f, cplx seed, const ZeroOptions& opt)
{
    ZeroRecord rec;
    cplx z = seed;
    int it = 0;
    for (; it < 50; ++it) {
        const FuncValue v = f.eval(z, true);
        if (std::abs(v.f) < opt.newton_tol) break;
        if (v.df == cplx(0.0, 0.0)) throw NonConvergence("refine_zero: vanishing derivative");
        cplx dz = v.f / v.df;
        if (std::abs(dz) > 0.5) dz *= 0.5 / std::abs(dz);
        z -= dz;
        if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) {
            ++it;
            break;
        }
    }
    const FuncValue v = f.eval(z);
    rec.location = z;
    rec.residual = std::abs(v.f);
    rec.refine_iters = it;
    if (!(rec.residual < 1e-6)) throw NonConvergence("refine_zero: no convergence from seed");
    double r = opt.certify_radius;
    for (int attempt = 0; attempt < 3; ++attempt, r *= 2.0) {
        try {
            rec.multiplicity = winding_circle(f, z, r, opt);
            rec.certified = rec.multiplicity == 1 && rec.residual < 1e-9;
            return rec;
        } catch (const BoundaryZero&) {
        }
    }
    rec.multiplicity = 0;
    rec.certified = false;
    return rec;
}

std::vector<ZeroRecord> localize_zeros(const Evaluator& f, const Rectangle& rect, int count, const ZeroOptions& opt)
{
    std::vector<ZeroRecord> out;
    std::function<void(const Rectangle&, int)> rec = [&](const Rectangle& r, int n) {
        if (n <= 0) return;
        const bool small = std::max(r.width(), r.height()) < opt.min_cell;
        if (n == 1 || small) {
            const cplx c(0.5 * (r.sigma1 + r.sigma2), 0.5 * (r.t1 + r.t2));
            try {
                ZeroRecord z = refine_zero(f, c, opt);
                const double m = 1e-7;
                const Rectangle grown{r.sigma1 - m, r.sigma2 + m, r.t1 - m, r.t2 + m};
                if (grown.contains(z.location) && (z.certified || small)) {
                    out.push_back(z);
                    return;
                }
            } catch (const NonConvergence&) {
            } catch (const BoundaryZero&) {
            }
            if (small) {
                ZeroRecord z;
                z.location = c;
                z.residual = std::abs(f.eval(c).f);
                z.multiplicity = n;
                out.push_back(z);
                return;
            }
        }
        const bool split_t = r.height() >= r.width();
        for (int k = 0; k < 9; ++k) {
            const double frac = 0.5 + ((k % 2) ? 1.0 : -1.0) * 0.06 * ((k + 1) / 2);
            Rectangle lo = r, hi = r;
            if (split_t) {
                lo.t2 = hi.t1 = r.t1 + frac * r.height();
            } else {
                lo.sigma2 = hi.sigma1 = r.sigma1 + frac * r.width();
            }
            try {
                const int nl = winding_count(f, lo, opt);
                rec(lo, nl);
                rec(hi, n - nl);
                return;
            } catch (const BoundaryZero&) {
            }
        }
        throw BoundaryZero("localize_zeros: no certifiable split");
    };
    rec(rect, count);
    return dedup(out, opt.dedup);
}

namespace {

// windows [h_k, h_{k+1}] of a strip; visit(k, count) returns false to stop
struct StripScanner {
    const Evaluator& f;
    double s1, s2;
    ZeroOptions opt;

    struct Window {
        Rectangle rect;
        int count = 0;
        double min_mod = 1e300;
        int perturbations = 0;
        long evals = 0;
        std::vector<ZeroRecord> zeros;
        bool failed = false;
    };

    Window standalone(Rectangle r, std::uint64_t salt) const
    {
        Window w;
        std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ull + salt);
        const Rectangle base = r;
        for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
            try {
                w.count = winding_count(f, r, opt, &w.min_mod, &w.evals);
                w.rect = r;
                return w;
            } catch (const BoundaryZero&) {
                ++w.perturbations;
                const double p = opt.perturbation;
                r.sigma1 = base.sigma1 + jitter(rng, p);
                r.sigma2 = base.sigma2 + jitter(rng, p);
                r.t1 = base.t1 == 0.0 ? std::abs(jitter(rng, p)) : base.t1 + jitter(rng, p);
                r.t2 = base.t2 + jitter(rng, p);
            }
        }
        w.failed = true;
        w.rect = base;
        return w;
    }

    // heights h[0..K]; returns windows in order, processing batches until visit says stop
    std::vector<Window> run(const std::vector<double>& h0, const std::function<bool(const Window&)>& visit) const
    {
        const int K = int(h0.size()) - 1;
        std::vector<Window> out;
        const int batch = std::max(1, opt.threads) * 8;
        std::vector<double> h = h0;
        for (int start = 0; start < K; start += batch) {
            const int end = std::min(K, start + batch);
            // horizontal edges start..end
            std::vector<PhaseTrack> H(std::size_t(end - start + 1));
            std::vector<char> hfail(H.size(), 0);
            parallel_for(int(H.size()), opt.threads, [&](int i) {
                const int k = start + i;
                std::mt19937_64 rng(opt.seed + 7919ull * std::uint64_t(k));
                double y = h[k];
                for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
                    try {
                        H[i] = track_segment(f, {s1, y}, {s2, y}, opt);
                        h[k] = y;
                        return;
                    } catch (const BoundaryZero&) {
                        y = h0[k] == 0.0 ? std::abs(jitter(rng, opt.perturbation)) : h0[k] + jitter(rng, opt.perturbation);
                    }
                }
                hfail[i] = 1;
            });
            std::vector<Window> win(std::size_t(end - start));
            parallel_for(end - start, opt.threads, [&](int i) {
                const int k = start + i;
                Window& w = win[i];
                w.rect = {s1, s2, h[k], h[k + 1]};
                bool ok = !hfail[i] && !hfail[i + 1];
                if (ok) {
                    try {
                        const PhaseTrack R = track_segment(f, {s2, h[k]}, {s2, h[k + 1]}, opt);
                        const PhaseTrack L = track_segment(f, {s1, h[k + 1]}, {s1, h[k]}, opt);
                        const double tot = H[i].dphase + R.dphase - H[i + 1].dphase + L.dphase;
                        w.count = int(std::lround(tot / (2.0 * kPi)));
                        w.min_mod = std::min({H[i].min_modulus, H[i + 1].min_modulus, R.min_modulus, L.min_modulus});
                        w.evals = R.evaluations + L.evaluations + H[i].evaluations;
                    } catch (const BoundaryZero&) {
                        ok = false;
                    }
                }
                if (!ok) {
                    const int extra = hfail[i] || hfail[i + 1] ? 1 : 0;
                    w = standalone({s1, s2, h[k], h[k + 1]}, std::uint64_t(k));
                    w.perturbations += 1 + extra;
                }
                if (!w.failed && opt.localize && w.count > 0) {
                    try {
                        w.zeros = localize_zeros(f, w.rect, w.count, opt);
                    } catch (const BoundaryZero&) {
                    }
                }
            });
            for (auto& w : win) {
                out.push_back(std::move(w));
                if (!visit(out.back())) return out;
            }
        }
        return out;
    }
};

StripCount aggregate(const Rectangle& rect, const std::vector<StripScanner::Window>& ws, const ZeroOptions& opt)
{
    StripCount sc;
    sc.rect = rect;
    sc.boundary_min_modulus = 1e300;
    std::vector<ZeroRecord> zs;
    for (const auto& w : ws) {
        if (w.failed) throw BoundaryZero("window [" + std::to_string(w.rect.t1) + ", " + std::to_string(w.rect.t2) +
                                         "] could not be certified after perturbation");
        sc.winding_count += w.count;
        sc.boundary_min_modulus = std::min(sc.boundary_min_modulus, w.min_mod);
        sc.perturbations += w.perturbations;
        sc.evaluations += w.evals;
        sc.window_tops.push_back(w.rect.t2);
        sc.window_counts.push_back(w.count);
        zs.insert(zs.end(), w.zeros.begin(), w.zeros.end());
    }
    sc.zero_list = dedup(zs, opt.dedup);
    if (ws.empty()) sc.boundary_min_modulus = 0.0;
    return sc;
}

std::vector<double> window_heights(double t1, double t2, double W)
{
    std::vector<double> h{t1};
    const int K = std::max(1, int(std::ceil((t2 - t1) / W - 1e-9)));
    for (int k = 1; k < K; ++k) h.push_back(t1 + k * W);
    h.push_back(t2);
    return h;
}

}  // namespace

StripCount count_rectangle(const Evaluator& f, const Rectangle& rect, const ZeroOptions& opt)
{
    if (!(rect.sigma1 < rect.sigma2)) throw std::invalid_argument("count_rectangle: sigma1 must be below sigma2");
    if (!(rect.t1 < rect.t2)) {
        StripCount sc;
        sc.rect = rect;
        return sc;
    }
    StripScanner sc{f, rect.sigma1, rect.sigma2, opt};
    const auto ws = sc.run(window_heights(rect.t1, rect.t2, opt.window), [](const auto&) { return true; });
    return aggregate(rect, ws, opt);
}

StripCount count_strip(const Evaluator& f, double sigma1, double sigma2, double T, const ZeroOptions& opt)
{
    if (sigma1 <= 1.0 && sigma2 >= 1.0) throw std::domain_error("count_strip: strip contains the pole at s = 1");
    return count_rectangle(f, {sigma1, sigma2, 0.0, T}, opt);
}

LineScan scan_line(const Evaluator& f, double sigma0, double T, double tol, const ZeroOptions& opt)
{
    LineScan ls;
    ls.T = T;
    if (!(tol > 0.0) || !(T > 0.0)) return ls;
    ZeroOptions o = opt;
    o.localize = true;
    const StripCount sc = count_rectangle(f, {sigma0 - tol, sigma0 + tol, 0.0, T}, o);
    ls.winding_total = sc.winding_count;
    for (const auto& z : sc.zero_list)
        if (z.certified && std::abs(z.location.real() - sigma0) < tol) ls.zeros.push_back(z);
    ls.ratio = double(ls.zeros.size()) / T;
    return ls;
}

std::vector<NearPeriod> find_near_period(const Evaluator& f, double sigma_a, double sigma_b, double eps,
                                         double t_max, double t_ref)
{
    if (!(sigma_a > 1.0)) throw std::domain_error("find_near_period: needs sigma_a > 1");
    if (!(eps > 0.0)) throw std::domain_error("find_near_period: eps must be positive");
    constexpr int J = 40;
    std::vector<cplx> pts(J), base(J);
    for (int j = 0; j < J; ++j) {
        pts[j] = cplx(sigma_a + (sigma_b - sigma_a) * j / (J - 1), t_ref);
        base[j] = f.eval(pts[j]).f;
    }
    std::vector<NearPeriod> hits;
    int first = 0;
    for (long k = 1;; ++k) {
        const double t0 = 1.0 + 0.01 * double(k);
        if (t0 > t_max) break;
        double mx = 0.0;
        bool pass = true;
        for (int jj = 0; jj < J; ++jj) {
            const int j = (first + jj) % J;
            const double d = std::abs(f.eval(pts[j] + cplx(0.0, t0)).f - base[j]);
            mx = std::max(mx, d);
            if (d >= eps) {
                first = j;
                pass = false;
                break;
            }
        }
        if (pass) hits.push_back({t0, mx});
    }
    // best representative per cluster, clusters at least 1 apart
    std::vector<NearPeriod> out;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        NearPeriod best = hits[i];
        while (j + 1 < hits.size() && hits[j + 1].t0 - hits[i].t0 < 1.0) {
            ++j;
            if (hits[j].max_diff < best.max_diff) best = hits[j];
        }
        if (out.empty() || best.t0 - out.back().t0 >= 1.0) out.push_back(best);
        i = j + 1;
    }
    return out;
}

double domination_abscissa(const QuadForm& Q0)
{
    const QuadForm Q = reduce(Q0);
    const i64 X = 20000;
    const auto r = rep_counts(Q, X);
    const double n0 = double(Q.a);
    const double r0 = double(r[std::size_t(Q.a)]);
    const double delta = std::sqrt(double(-Q.disc()));
    const double rho = std::sqrt(double(std::max(Q(1, 1), Q(1, -1))));
    auto margin = [&](double s) {
        double sum = 0.0;
        for (i64 n = Q.a + 1; n <= X; ++n)
            if (r[n]) sum += double(r[n]) * std::exp(-s * std::log(double(n) / n0));
        const double Xd = double(X);
        double tail = s * (2.0 * kPi / delta) *
                      (std::pow(Xd, 1.0 - s) / (s - 1.0) + 2.0 * rho * std::pow(Xd, 0.5 - s) / (s - 0.5) +
                       rho * rho * std::pow(Xd, -s) / s);
        tail *= std::pow(n0, s);
        return r0 - sum - tail;
    };
    double lo = 1.05, hi = 60.0;
    if (margin(hi) <= 0.0) throw std::runtime_error("domination_abscissa: no domination below 60");
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? hi : lo) = mid;
    }
    return hi;
}

MaxRealPart max_real_part(const QuadForm& Q, double T, const ZeroOptions& opt, double stop_above, double sigma_lo)
{
    const ClassGroup G = build_class_group(Q.disc());
    if (G.h == 1) throw DomainError("max_real_part: class number one, E has an Euler product");
    MaxRealPart out;
    out.sigma_dom = domination_abscissa(Q);
    if (!(T > 1.0)) return out;
    const EpsteinEvaluator E(reduce(Q));
    ZeroOptions o = opt;
    o.localize = true;
    StripScanner sc{E, sigma_lo, out.sigma_dom, o};
    bool stop = false;
    sc.run(window_heights(1.0, T, o.window), [&](const StripScanner::Window& w) {
        if (w.failed) throw BoundaryZero("max_real_part: window could not be certified");
        out.T_scanned = w.rect.t2;
        for (const auto& z : w.zeros) {
            if (!z.certified) continue;
            ++out.zeros_found;
            if (z.location.real() > out.value) {
                out.value = z.location.real();
                out.witness = z;
            }
            if (stop_above > 0.0 && z.location.real() > stop_above) stop = true;
        }
        return !stop;
    });
    return out;
}

}  // namespace epz
