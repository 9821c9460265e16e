#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "epz/epstein.hpp"

namespace epz {

struct Rectangle {
    double sigma1 = 0.0, sigma2 = 0.0, t1 = 0.0, t2 = 0.0;

    bool contains(cplx z) const
    {
        return z.real() >= sigma1 && z.real() <= sigma2 && z.imag() >= t1 && z.imag() <= t2;
    }
    double width() const { return sigma2 - sigma1; }
    double height() const { return t2 - t1; }
};

struct ZeroRecord {
    cplx location;
    double residual = 0.0;
    bool certified = false;
    int refine_iters = 0;
    int multiplicity = 1;  // winding in the certification disk
};

struct StripCount {
    Rectangle rect;
    int winding_count = 0;
    std::vector<ZeroRecord> zero_list;
    double boundary_min_modulus = 0.0;
    int perturbations = 0;
    long evaluations = 0;
    std::vector<double> window_tops;  // upper height of each window
    std::vector<int> window_counts;
};

class BoundaryZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ZeroOptions {
    double step = 0.05;            // initial boundary step
    double floor_factor = 10.0;    // |f| must exceed this times the error bound
    double window = 5.0;           // strip window height
    int max_retries = 5;           // boundary perturbations
    double perturbation = 1e-4;
    std::uint64_t seed = 20240101;
    double min_cell = 1e-3;        // quadtree floor
    double newton_tol = 1e-10;
    double certify_radius = 1e-4;
    double dedup = 1e-6;
    bool localize = true;
    bool derivative_guard = true;  // bound each phase step by |f / f'|
    int threads = 1;
};

struct PhaseTrack {
    double dphase = 0.0;
    double min_modulus = 0.0;
    long evaluations = 0;
};

// Continuous change of arg f along the straight segment z0 -> z1.
PhaseTrack track_segment(const Evaluator& f, cplx z0, cplx z1, const ZeroOptions& opt = {});

// Zeros minus poles inside rect; throws BoundaryZero when the boundary is not certifiable.
int winding_count(const Evaluator& f, const Rectangle& rect, const ZeroOptions& opt = {},
                  double* min_modulus = nullptr, long* evaluations = nullptr);

// Winding of f around the circle |s - c| = r.
int winding_circle(const Evaluator& f, cplx c, double r, const ZeroOptions& opt = {});

// Newton from seed, then winding certification on a small circle.
ZeroRecord refine_zero(const Evaluator& f, cplx seed, const ZeroOptions& opt = {});

// Zeros in a rectangle with a known winding number.
std::vector<ZeroRecord> localize_zeros(const Evaluator& f, const Rectangle& rect, int count,
                                       const ZeroOptions& opt = {});

StripCount count_strip(const Evaluator& f, double sigma1, double sigma2, double T, const ZeroOptions& opt = {});
StripCount count_rectangle(const Evaluator& f, const Rectangle& rect, const ZeroOptions& opt = {});

struct LineScan {
    std::vector<ZeroRecord> zeros;  // certified, |Re - sigma0| < tol
    double T = 0.0;
    double ratio = 0.0;  // count / T
    int winding_total = 0;
};
LineScan scan_line(const Evaluator& f, double sigma0, double T, double tol, const ZeroOptions& opt = {});

struct NearPeriod {
    double t0 = 0.0;
    double max_diff = 0.0;
};
// t0 in (1, t_max] on a 0.01 grid with max_j |f(s_j + i t0) - f(s_j)| < eps over 40 points
// s_j on [sigma_a, sigma_b] + i t_ref; returns are at least 1 apart.
std::vector<NearPeriod> find_near_period(const Evaluator& f, double sigma_a, double sigma_b, double eps,
                                         double t_max, double t_ref = 0.0);

// Abscissa beyond which the leading Dirichlet term dominates the rest.
double domination_abscissa(const QuadForm& Q);

struct MaxRealPart {
    double value = -1e300;  // lower bound for sup Re rho; -inf when no zero found
    ZeroRecord witness;
    double sigma_dom = 0.0;
    double T_scanned = 0.0;
    int zeros_found = 0;
};
// Scans (1, sigma_dom) x (1, T); stop_above > 0 ends the scan at the first certified zero with Re > stop_above.
MaxRealPart max_real_part(const QuadForm& Q, double T, const ZeroOptions& opt = {}, double stop_above = 0.0,
                          double sigma_lo = 1.0001);

}  // namespace epz
