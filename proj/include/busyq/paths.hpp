#pragma once

#include <functional>
#include <span>
#include <vector>

#include "busyq/model.hpp"
#include "busyq/rational.hpp"

namespace busyq {

/// Staircase walk from (0,0) to (n,n) staying weakly above the diagonal,
/// encoded by the number of right-jumps u_j taken at each phase j = 1..n.
struct DyckPath {
  std::vector<int> jumps;

  int order() const { return static_cast<int>(jumps.size()); }
};

using PathVisitor = std::function<void(const DyckPath&)>;

/// True iff u has nonnegative entries, prefix sums bounded by their index,
/// and total sum equal to the order.
bool is_dyck(std::span<const int> u);
bool is_dyck(const DyckPath& u);

/// Streams every Dyck path of the given order exactly once, in ascending
/// lexicographic order of (u_1,...,u_n). The visited object is reused; do
/// not retain it past the callback. Order 0 yields the single empty path.
void enumerate_dyck(int order, const PathVisitor& visit);

/// A path is feasible when it returns to the diagonal at the end of every
/// run of right-jumps: u_j != 0 implies u_1 + ... + u_j = j. Non-Dyck input
/// classifies as not feasible. The empty path is not feasible.
bool is_feasible(std::span<const int> u);
bool is_feasible(const DyckPath& u);

/// The equivalent run-length characterization (u_1 in {0,1}; after a run of
/// k-1 zeros the next entry is 0 or k; after a nonzero entry, 0 or 1; total
/// sum equals the order). Kept separate so tests can check the two
/// definitions against each other.
bool matches_run_rules(std::span<const int> u);

/// Streams the 2^(order-1) feasible paths, ascending lexicographic.
void enumerate_feasible(int order, const PathVisitor& visit);

/// Probability of the path under the embedded-chain measure:
/// prod_j rho_j^(u_j) * (1 - rho_j) whenever the prefix sum stays strictly
/// below j. Requires the path order to match the model.
Rational path_weight(const Model& model, const DyckPath& u);

/// Smallest k >= 1 with u_1 + ... + u_k = k: the order of the first
/// excursion, i.e. the number of customers served in the first busy period.
int first_return(std::span<const int> u);
int first_return(const DyckPath& u);

/// Diagonal-touch skeleton of a feasible path: `excursions` is the number of
/// nonzero entries M, `touches` is (k_0, k_1, ..., k_M, k_{M+1}) with k_0 the
/// first index, k_1..k_M the nonzero positions and k_{M+1} the last index.
struct ExcursionDecomposition {
  int excursions = 0;
  std::vector<int> touches;
};

ExcursionDecomposition excursion_decomposition(const DyckPath& u);

}  // namespace busyq
