#pragma once

#include <optional>
#include <vector>

#include "epz/epstein.hpp"
#include "epz/qmc.hpp"
#include "epz/randmodel.hpp"

namespace epz {

struct JensenOptions {
    double T0 = 1.0;
    double step = 0.05;
    double near_modulus = 1e-3;   // |f - x| below this at the line minimum: log-singular treatment
    double near_distance = 0.1;   // or estimated distance of the zero to the line below this
    double window = 1e-2;         // width of the window around each near-zero
    double block = 50.0;          // block length for the statistical error
    int threads = 1;
};

struct JensenValue {
    double phi = 0.0;
    double err = 0.0;       // quad_err + stat_err + eval_err
    double quad_err = 0.0;
    double stat_err = 0.0;  // block-mean standard error
    double eval_err = 0.0;  // from the evaluator's error bound
    double flux = 0.0;      // (|d/dt log|f-x|| at both ends) / (T - T0)
    int near_zeros = 0;
    long evaluations = 0;
};

// (1/(T-T0)) int_{T0}^{T} log|f(sigma+it) - x| dt
JensenValue jensen_time_average(const Evaluator& f, double sigma, double T, cplx x, const JensenOptions& opt = {});

// int log|E_{n,sigma}(theta) - x| dtheta, or the ratio form int log|h + a| + log|a_2| (x must be 0).
JensenValue jensen_torus(const TorusModel& model, cplx x, const QmcOptions& q, bool ratio = false);

// (phi(s+d) - 2 phi(s) + phi(s-d)) / d^2 on common torus points; err adds |d2(d) - d2(2d)| / 3.
struct SecondDifference {
    double value = 0.0;
    double err = 0.0;
};
SecondDifference torus_second_difference(const TorusModel& model, double delta, cplx x, const QmcOptions& q);

struct JensenProfile {
    std::vector<double> sigma_grid;
    std::vector<double> phi;
    std::vector<double> phi_err;    // statistical + quadrature
    std::vector<double> local_err;  // quadrature + evaluation only (enters differences)
    std::vector<double> flux;
    double T_used = 0.0;
    std::vector<double> dphi, dphi_err;
    std::vector<double> d2phi, d2phi_err;
    bool coarse = false;  // spacing^2 < 10 x error somewhere
};

JensenProfile jensen_profile(const Evaluator& f, const std::vector<double>& sigmas, double T, cplx x,
                             const JensenOptions& opt = {});
JensenProfile derivative_profile(JensenProfile profile);

struct ZeroFrequency {
    double value = 0.0;
    double err = 0.0;
    double lo = 0.0, hi = 0.0;  // one-sided difference sandwich
};
ZeroFrequency zero_frequency(const JensenProfile& profile, double sigma1, double sigma2);

struct LinearityInterval {
    double sigma_lo = 0.0, sigma_hi = 0.0;
    double slope = 0.0, slope_err = 0.0;
    std::optional<int> n;  // slope ~ -log n
};
struct LinearityReport {
    std::vector<LinearityInterval> intervals;
};
LinearityReport detect_linearity(const JensenProfile& profile, double sigma_min, double tol = 1e-2);

}  // namespace epz
