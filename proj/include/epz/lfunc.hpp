#pragma once

#include <map>
#include <memory>
#include <vector>

#include "epz/epstein.hpp"
#include "epz/quadforms.hpp"

namespace epz {

// Local data for every prime up to pmax.
std::map<i64, PrimeLocalData> local_data(const ClassGroup& G, i64 pmax);

// Euler factor coefficients b_{p^k}, k = 0..kmax, for one prime.
std::vector<double> prime_power_coefficients(const PrimeLocalData& pd, const ClassCharacter& chi, int kmax);

// b_1..b_M (index 0 unused) of L(s, chi).
std::vector<double> coefficients(const ClassCharacter& chi, const std::map<i64, PrimeLocalData>& local, int M);
std::vector<double> coefficients(const ClassGroup& G, const ClassCharacter& chi, int M);

struct LSeries {
    ClassCharacter character;
    std::vector<double> b;
    std::map<i64, PrimeLocalData> local;

    LSeries(const ClassGroup& G, const ClassCharacter& chi, int M);
    cplx dirichlet_sum(cplx s) const;  // sum_{m <= M} b_m m^{-s}
};

// #{(x, y) : Q(x, y) = m}
i64 rep_count_oracle(const QuadForm& Q, i64 m);
// r_Q(m) for all m <= M at once
std::vector<i64> rep_counts(const QuadForm& Q, i64 M);

// Class group together with an Epstein evaluator per class.
class HeckeFamily {
public:
    explicit HeckeFamily(i64 D, double target_abs_error = 1e-13);

    const ClassGroup& group() const { return G_; }
    const std::vector<ClassCharacter>& chars() const { return chi_; }
    const EpsteinEvaluator& epstein(int cls) const { return *E_[cls]; }

    // L(s, chi) = (1/w) sum_C chi(C) E(s, Q_C)
    FuncValue eval_L(const ClassCharacter& chi, cplx s, bool deriv = false) const;
    FuncValue eval_L(int char_index, cplx s, bool deriv = false) const { return eval_L(chi_[char_index], s, deriv); }

private:
    ClassGroup G_;
    std::vector<ClassCharacter> chi_;
    std::vector<std::unique_ptr<EpsteinEvaluator>> E_;
};

struct TruncatedEuler {
    int n = 0;  // primes p_1..p_n
    ClassCharacter character;
    std::vector<PrimeLocalData> primes;

    TruncatedEuler(const ClassGroup& G, const ClassCharacter& chi, int n);
};

// L_n(s, chi) and its s-derivative
FuncValue eval_truncated(const TruncatedEuler& tr, cplx s, bool deriv = false);

// E_n(s) = sum_j a_j L_n(s, chi_j)
class TruncatedEpstein : public Evaluator {
public:
    TruncatedEpstein(const ClassGroup& G, const QuadForm& Q, int n);
    FuncValue eval(cplx s, bool deriv = false) const override;
    const EpsteinCoefficients& coefficients() const { return coef_; }
    const std::vector<TruncatedEuler>& factors() const { return tr_; }

private:
    EpsteinCoefficients coef_;
    std::vector<TruncatedEuler> tr_;
};

struct MeanSquare {
    int n = 0;
    double value = 0.0;  // (1/(T-1)) int_1^T |L - L_n|^2 dt
    double err = 0.0;    // step-halving difference plus evaluation error
};

// One pass over t in [1, T] shared by every n.
std::vector<MeanSquare> mean_square_truncation(const HeckeFamily& F, int char_index, double sigma,
                                               const std::vector<int>& ns, double T, double step = 0.05);
MeanSquare check_mean_square_truncation(const HeckeFamily& F, int char_index, double sigma, int n, double T);

}  // namespace epz
