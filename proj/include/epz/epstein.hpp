#pragma once

#include <complex>
#include <stdexcept>

#include "epz/quadforms.hpp"

namespace epz {

struct FuncValue {
    cplx f;
    cplx df;           // zero unless requested
    double err = 0.0;  // bound on |f - exact|
    double derr = 0.0;
};

// An analytic function of s with error bounds; zeros and jensen work against this.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual FuncValue eval(cplx s, bool deriv = false) const = 0;
};

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct CompletedValue {
    cplx s;
    cplx lambda;  // (sqrt|D|/2pi)^s Gamma(s) E(s)
    cplx raw;     // E(s)
    double err = 0.0;
};

// E(s,Q) = sum' Q(m,n)^{-s} continued to C \ {1}.
// Fourier-Bessel expansion in m with the Bessel series truncated adaptively.
class EpsteinEvaluator : public Evaluator {
public:
    explicit EpsteinEvaluator(const QuadForm& Q, double target_abs_error = 1e-13);

    FuncValue eval(cplx s, bool deriv = false) const override;
    cplx value(cplx s) const { return eval(s).f; }
    cplx derivative(cplx s) const { return eval(s, true).df; }

    CompletedValue completed(cplx s) const;
    // e^{pi|t|/2} Lambda(s): same zeros, no underflow at large |t|
    cplx completed_scaled(cplx s, double* err = nullptr) const;

    const QuadForm& form() const { return Q_; }
    double sqrt_abs_disc() const { return delta_; }
    double target_abs_error() const { return target_; }
    // Bessel terms used at s (diagnostic)
    int bessel_truncation(cplx s) const;

private:
    FuncValue eval_series(cplx s, bool deriv) const;
    FuncValue eval_circle(cplx s, bool deriv) const;

    QuadForm Q_;
    double delta_;
    double target_;
};

struct OracleValue {
    cplx value;
    double err = 0.0;
};

// Box sum |m|,|n| <= radius with asymptotic corrections for the omitted lattice points.
OracleValue eval_lattice_oracle(const QuadForm& Q, cplx s, int radius);

// The uncorrected box sum Q(m,n)^{-s}, |m|,|n| <= radius.
cplx lattice_box_sum(const QuadForm& Q, cplx s, int radius);

// |e^{pi|t|/2} (Lambda(s) - Lambda(1-s))|
double check_functional_equation(const EpsteinEvaluator& E, cplx s);

}  // namespace epz
