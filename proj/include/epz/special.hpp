#pragma once

#include <complex>
#include <vector>

namespace epz {

using cplx = std::complex<double>;

// log Gamma; the imaginary part is not tied to a particular branch,
// only exp(lgamma(z)) is meaningful.
cplx lgamma(cplx z);
cplx rgamma(cplx z);  // 1/Gamma, zero at the poles
cplx digamma(cplx z);

// log sin(pi z), stable for large |Im z|
cplx log_sin_pi(cplx z);
cplx cot_pi(cplx z);

// B_{2k}/(2k)! for k = 0..kmax (entry 0 is 1)
const std::vector<double>& bernoulli_over_factorial();

struct ZetaValue {
    cplx value;
    cplx deriv;
    double err = 0.0;
};

// Euler-Maclaurin cut-off for zeta(z) with 20 correction terms.
int zeta_cutoff(cplx z);

// zeta(z) by Euler-Maclaurin; pw[n] = n^{-z} for 1 <= n <= N (pw[0] unused).
ZetaValue zeta_em(cplx z, const std::vector<cplx>& pw, int N, bool deriv);
ZetaValue zeta(cplx z, bool deriv = false);

// Hurwitz zeta(z, q) for Re z > 1, q > 0.
cplx hurwitz_zeta(cplx z, double q);

// n^{-s} for n = 1..N, built multiplicatively from prime powers.
class PowerTable {
public:
    PowerTable(cplx s, int N);
    const std::vector<cplx>& pw() const { return pw_; }
    cplx operator[](int n) const { return pw_[n]; }
    int size() const { return N_; }

private:
    int N_;
    std::vector<cplx> pw_;
};

double log_int(int n);  // cached log n

struct BesselK {
    cplx k;   // K_nu(x) * exp(pi |Im nu| / 2)
    cplx dk;  // dK_nu(x)/dnu, same scaling
};

// Modified Bessel function of the second kind with complex order, scaled.
// Steepest-descent contours for the integral 1/2 int exp(-x cosh w + nu w) dw.
BesselK bessel_k_scaled(cplx nu, double x, bool deriv = false);

// Rough log of |K_nu(x)| exp(pi|Im nu|/2) from the saddle point, for truncation.
double bessel_k_log_magnitude(cplx nu, double x);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n);
};

}  // namespace epz
