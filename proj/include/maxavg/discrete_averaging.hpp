#pragma once

#include "maxavg/exponent_region.hpp"
#include "maxavg/signal.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace maxavg {

using IntMatrix = std::vector<std::vector<long>>;

// Throws std::invalid_argument on non-integer entries.
IntMatrix integer_matrix(const AveragingMatrix& a);

// (2N+1)^-m sum over the cube of prod_i |phi_i(x + sum_j a_ij n_j)|; signed drops the absolute values.
double average_at(const IntMatrix& a, const std::vector<Signal>& signals, long N, long x, bool absolute = true);

struct MaximalValue {
  double value = 0;
  long argmax_n = 1;
};

// Largest N at which the numerator can still change; needs rank(A) = m.
long search_bound(const IntMatrix& a, const std::vector<Signal>& signals, long x);

// sup over N >= 1 (ties to the smallest N). cap > 0 restricts to N <= cap.
MaximalValue maximal_at(const IntMatrix& a, const std::vector<Signal>& signals, long x, long cap = 0);

Signal maximal_operator(const IntMatrix& a, const std::vector<Signal>& signals, long lo, long hi, long cap = 0);

// Cyclic shift on Z/NZ with uniform probability.
struct FiniteSystem {
  long size = 1;
  explicit FiniteSystem(long n);
  long shift(long x, long k) const {
    long r = (x + k) % size;
    return r < 0 ? r + size : r;
  }
};

double ergodic_average(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long L,
                       long x, bool absolute = false);

// Exact mean over (Z/NZ)^m, the L -> infinity limit of ergodic_average.
double period_mean(const IntMatrix& a, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long x,
                   bool absolute = false);

// Labels eps in {0,1}^m \ {0}: label k = 1..2^m-1 has eps_j = bit (m-1-j) of k.
struct CubeSpec {
  std::size_t m = 1;
  explicit CubeSpec(std::size_t dim);
  std::size_t count() const { return (std::size_t{1} << m) - 1; }
  std::vector<std::string> labels() const;
  IntMatrix matrix() const;
};

// functions are ordered as spec.labels().
double cube_average(const CubeSpec& spec, const FiniteSystem& sys, const std::vector<std::vector<double>>& f, long L,
                    long x, bool absolute = false);

// sup_x |average(L) - period mean| for each L in the schedule.
std::vector<double> convergence_probe(const IntMatrix& a, const FiniteSystem& sys,
                                      const std::vector<std::vector<double>>& f, const std::vector<long>& schedule,
                                      bool absolute = false);

// prod_i (M |f_i|^{q_i})^{1/q_i}(x) with q_i = dual / x_i; x_i = 0 uses the sup norm.
double holder_baseline(const std::vector<Signal>& signals, const ExponentTuple& exponents, long x);

struct TransferenceReport {
  long system_size = 0;
  long L = 0;
  long M = 0;
  double kappa = 1;
  double ergodic_ratio = 0;        // sup_{N <= L} maximal ratio on Z/NZ
  double integer_ratio_max = 0;    // worst truncated-embedding ratio on Z
  double pointwise_gap = 0;        // max over x of left_x - right_x, <= 0 when the sum inequality holds
  double truncated_integer_ratio = 0;  // the original signals on Z with sup_{N <= L}
  bool sum_inequality_holds = false;
  bool ratio_inequality_holds = false;
};

// Periodizes signals onto Z/NZ and compares the finitary maximal ratio with the
// Z-ratio of the truncated orbit signals phi_i(l) = f_i(S^l x), |l| <= (M+1)L.
TransferenceReport transference_check(const IntMatrix& a, const std::vector<Signal>& signals, long N, long L,
                                      const ExponentTuple& exponents);

}  // namespace maxavg

namespace maxavg {

struct EvaluationWindow {
  long lo = 0;
  long hi = 0;
  bool exact = false;  // false: truncated to [-8R, 8R], R the largest support radius
};

// Window outside of which the uncapped maximal operator vanishes, when [A | 1] has
// full column rank; otherwise a truncation.
EvaluationWindow evaluation_window(const IntMatrix& a, const std::vector<Signal>& signals);

// ||T* f||_{p'} / prod ||f_i||_{p_i} with p' = 1/dual, over the given values.
double operator_ratio(const Signal& output, const std::vector<Signal>& signals, const ExponentTuple& exponents);

}  // namespace maxavg
