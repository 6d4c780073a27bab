#pragma once

#include <span>
#include <utility>
#include <vector>

#include "busyq/distribution.hpp"
#include "busyq/error.hpp"
#include "busyq/model.hpp"
#include "busyq/rational.hpp"

namespace busyq {

/// Dense lower-triangular matrix, 1-based indices, packed rows.
template <class Num>
class Triangular {
 public:
  explicit Triangular(int n) : n_(n), cells_(static_cast<size_t>(n) * (n + 1) / 2, Num(0)) {}

  int dim() const { return n_; }

  Num& at(int i, int j) { return cells_[index(i, j)]; }
  const Num& at(int i, int j) const { return cells_[index(i, j)]; }

  /// Zero above the diagonal.
  Num get(int i, int j) const {
    check_row(i);
    check_row(j);
    return j > i ? Num(0) : cells_[index(i, j)];
  }

 private:
  size_t index(int i, int j) const {
    check_row(i);
    if (j < 1 || j > i)
      throw Error(ErrorKind::IndexOutOfRange, "triangular entry (" + std::to_string(i) +
                                                  "," + std::to_string(j) + ")");
    return static_cast<size_t>(i) * (i - 1) / 2 + (j - 1);
  }
  void check_row(int i) const {
    if (i < 1 || i > n_)
      throw Error(ErrorKind::IndexOutOfRange,
                  "index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }

  int n_;
  std::vector<Num> cells_;
};

using TriangularMatrix = Triangular<Rational>;

// ---- analytic routes -------------------------------------------------------

/// Phase recursion for s_n (general strictly decreasing rate sequence).
BusyPeriodDistribution busy_dist_recursion(const Model& model);

/// Same recursion written with binomial coefficients; proportional rates only.
BusyPeriodDistribution busy_dist_recursion_binomial(const Model& model);

/// Coefficient matrix (A)_{n,i} = rho_n^{-i} * prod_{k=i}^{n-1} lambda_k / (lambda_k - lambda_n).
TriangularMatrix matrix_A(const Model& model);

/// Right-hand side b_n = prod_{k=1}^{n-1} lambda_k / (lambda_k - lambda_n); b_1 = 1.
std::vector<Rational> vector_b(const Model& model);

/// Exact inverse computed diagonal by diagonal:
/// inv(n,n) = 1/A(n,n), inv(n,i) = -inv(i,i) * sum_{k=i+1}^{n} inv(n,k) A(k,i).
TriangularMatrix invert_lower_triangular(const TriangularMatrix& a);

/// s = A^{-1} b.
BusyPeriodDistribution busy_dist_matrix(const Model& model);

/// Signed weight of one allocation: exponents over the contiguous phase range
/// starting at first_index; M is the number of nonzero exponents and the
/// result is (-1)^(M-1) * prod_{m=0}^{M} prod_{k=k_(m)}^{k_(m+1)-1}
/// lambda_k / (lambda_k - lambda_{k_(m+1)}).
Rational b_coefficient(const Model& model, std::span<const int> exponents, int first_index);

/// Binomial form of the same coefficient; proportional rates only:
/// (-1)^(M-1) * prod_m binom(N - k_(m), k_(m+1) - k_(m)).
Rational b_coefficient_binomial(const Model& model, std::span<const int> exponents,
                                int first_index);

/// Explicit inverse entry (A^{-1})_{i,i-n} as the signed sum over feasible
/// allocations of order n; n = 0 gives rho_i^i.
Rational a_inverse_explicit(const Model& model, int i, int n);

/// Main explicit formula: each s_i as the signed sum over the 2^(i-1)
/// feasible allocations of order i. Evaluated incrementally along the
/// allocation tree with the top levels fanned out across workers
/// (0 = library default); results are identical for any worker count.
BusyPeriodDistribution busy_dist_explicit(const Model& model, int workers = 0);

/// Reference evaluation of the same sum: one allocation at a time, each
/// coefficient recomputed from scratch. Kept for testing the fast kernel.
BusyPeriodDistribution busy_dist_explicit_serial(const Model& model);

// ---- generating functions and joint distribution ---------------------------

struct GeneratingFunctionValue {
  int phase = 0;
  Rational z;
  Rational value;
};

/// P_n(z) via the product form, consuming s_1..s_{n-1} from the recursion
/// route; P_1(z) = 1 by convention. Throws PoleAtArgument when z equals
/// 1/rho_j for some j < n.
GeneratingFunctionValue gf_evaluate(const Model& model, int n, const Rational& z);

/// Joint law of the busy-period size sequence, as exact probabilities per
/// composition of N. Compositions with more than max_periods parts are
/// folded into `remainder`.
struct JointBusyDistribution {
  std::vector<std::pair<std::vector<int>, Rational>> probabilities;
  Rational remainder;
  int max_periods = 0;
};

JointBusyDistribution joint_busy_dist(const Model& model, int max_periods);

// ---- float64 mirror --------------------------------------------------------

/// Runs the selected analytic route (or the oracle DP) entirely in float64.
FloatDistribution busy_dist_f64(const Model& model, Method method, int workers = 0);

/// Measures the alternating-sign cancellation of the explicit formula in
/// float64 against the exact route.
struct CancellationReport {
  int n = 0;
  std::vector<double> float_s;
  std::vector<double> exact_s;  // exact values rendered to float64
  double max_abs_deviation = 0.0;
};

CancellationReport cancellation_report(const Model& model, int workers = 0);

}  // namespace busyq
