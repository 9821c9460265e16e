#pragma once

#include <functional>
#include <string>
#include <vector>

#include "epz/qmc.hpp"
#include "epz/quadforms.hpp"

namespace epz {

// Euler products with the phases p^{-it} replaced by independent angles theta_m.
struct TorusModel {
    int n = 0;
    double sigma = 1.0;
    std::vector<PrimeLocalData> primes;  // first n primes
    std::vector<ClassCharacter> chars;   // one per character pair
    std::vector<double> a_list;

    static TorusModel build(const ClassGroup& G, const QuadForm& Q, int n, double sigma);
    TorusModel at_sigma(double s) const;
    int J() const { return int(a_list.size()); }
};

struct TorusSample {
    cplx E, Eprime;  // Eprime = d/dsigma
    std::vector<cplx> L, Lprime;
};

TorusSample sample(const TorusModel& model, const double* theta);
TorusSample sample(const TorusModel& model, const std::vector<double>& theta);

// h = L_2 / L_1 for a two-character model, with dh/dsigma.
struct RatioSample {
    cplx h, hprime;
};
RatioSample sample_ratio(const TorusModel& model, const double* theta);

// L, L', L'' of one character (sigma-derivatives).
struct LDerivs {
    cplx L, d1, d2;
};
LDerivs sample_L_derivs(const TorusModel& model, int j, const double* theta);

// gamma_n(t) mod 1
std::vector<double> curve_point(const TorusModel& model, double t);

enum class DensityTarget { RatioAtMinusA, EAtX };
enum class DensityMethod { WeightedKDE, FourierInversion };

std::string to_string(DensityTarget t);
std::string to_string(DensityMethod m);

// Value of the model quantity whose zero set is counted: E itself, or h for the ratio target.
cplx ratio_target(const TorusModel& model);  // -a_1/a_2

struct FourierSample {
    cplx y;
    cplx nu_hat;
    double err = 0.0;
};

// nu_hat(y) = int e^{i <V, y>} |V'|^2 dtheta, V = E or h; <x, y> = Re x Re y + Im x Im y.
std::vector<FourierSample> estimate_nu_hat(const TorusModel& model, const std::vector<cplx>& ys,
                                           const QmcOptions& q, DensityTarget target = DensityTarget::EAtX);
FourierSample estimate_nu_hat(const TorusModel& model, cplx y, const QmcOptions& q,
                              DensityTarget target = DensityTarget::EAtX);

struct DecayFit {
    double exponent = 0.0;  // slope of log max|nu_hat| against log |y|
    double K = 0.0;         // |nu_hat| <= K |y|^exponent on the fitted points
    int points_used = 0;
    double r_max_resolved = 0.0;  // largest radius above the noise floor
    std::vector<double> radii, max_abs, max_err;
};
DecayFit fit_nu_hat_decay(const TorusModel& model, const QmcOptions& q, DensityTarget target = DensityTarget::EAtX,
                          double r_lo = 10.0, double r_hi = 100.0, int n_radii = 9, int n_dirs = 8);

struct DensityEstimate {
    DensityTarget target = DensityTarget::EAtX;
    cplx x;
    double G = 0.0;
    double G_err = 0.0;
    DensityMethod method = DensityMethod::WeightedKDE;
    long samples_used = 0;
    double bandwidth = 0.0;     // KDE h, or the Fourier cutoff Y
    double G_half = 0.0;        // KDE at h/2
    double G_double = 0.0;      // KDE at 2h
};

// For the ratio target x is ignored and -a is used.
DensityEstimate estimate_density(const TorusModel& model, cplx x, DensityMethod method, const QmcOptions& q,
                                 DensityTarget target = DensityTarget::EAtX);

struct PredictedConstant {
    double value = 0.0;
    double err = 0.0;
    std::vector<double> sigmas, G, G_err;
};
// int_{sigma1}^{sigma2} G_sigma(target) dsigma by Gauss-Legendre.
PredictedConstant predicted_constant(const ClassGroup& G, const QuadForm& Q, double sigma1, double sigma2, int n,
                                     int quadrature_points, const QmcOptions& q,
                                     DensityTarget target = DensityTarget::EAtX);

struct MomentCheck {
    int j = 0, m = 0, k = 0;  // int L^{(m)} conj(L^{(k)})
    double estimate = 0.0;
    double err = 0.0;
    double majorant = 0.0;  // m! k! eps^{-(m+k)} zeta(2(sigma - eps))^4
    double euler_bound = 0.0;  // same with the exact product prod (1+x)/(1-x)^3 over all primes
    bool holds = false;
};
// orders (m, k) with m, k <= 2
std::vector<MomentCheck> check_moment_bound(const TorusModel& model, const std::vector<std::pair<int, int>>& orders,
                                            double eps, const QmcOptions& q);

// int_0^1 |prod_j factor|^2 for a single ramified prime, by quadrature
double single_factor_moment_quadrature(double p, double chi, double sigma);

struct OscillatoryPoint {
    long p = 0;
    double norm_y = 0.0;
    double abs_integral = 0.0;
    double product = 0.0;  // |int e^{ig}| sqrt(r ||y||)
};
struct OscillatoryReport {
    double sigma = 0.0;
    double delta = 0.0;
    std::vector<OscillatoryPoint> points;
    double C_fit = 0.0;         // max product
    double growth_slope = 0.0;  // log-log slope of the per-radius max product
    int skipped = 0;            // y failing the delta condition
};
// K_{0,k}(y) for the first `n_split` split primes, y in C^J with ||y|| on a log grid.
OscillatoryReport check_oscillatory_bound(const ClassGroup& G, const std::vector<ClassCharacter>& chars,
                                          double sigma, const std::vector<double>& norms, int n_split,
                                          int dirs_per_norm, double delta, std::uint64_t seed);

// |int_0^1 exp(i g(theta)) dtheta| by composite Gauss-Legendre with panels resolving the phase.
double oscillatory_integral(const std::function<double(double)>& g, double amplitude);

struct ClassSumReport {
    int trials = 0;
    int half_condition_met = 0;     // max_C |sum_h Re chi_h(C) y_h|^2 >= (1/2) sum |y_h|^2
    int seventh_condition_met = 0;  // max_C |...| >= ||y|| / 7
    double min_ratio = 1e300;       // min over trials of max_C |...| / ||y||
    double identity_max_dev = 0.0;  // orthogonality identity, relative
    bool automatic = false;         // J <= 24 makes 1/sqrt 2 >= 1/7 automatic
};
ClassSumReport check_class_sum_condition(const ClassGroup& G, int trials, std::uint64_t seed);

struct WeylCheck {
    double time_average = 0.0, time_err = 0.0;
    double torus_average = 0.0, torus_err = 0.0;
};
// F bounded on the torus; time side uses the trapezoid rule on t in [0, T] with step 0.01.
WeylCheck check_weyl(const TorusModel& model, const std::function<double(const double*)>& F, double T,
                     const QmcOptions& q);
// F = log|E_{n,sigma}|: time side via the singularity-aware Jensen quadrature.
WeylCheck check_weyl_log(const TorusModel& model, double T, const QmcOptions& q);

}  // namespace epz
