#pragma once

#include <vector>

#include "busyq/distribution.hpp"
#include "busyq/model.hpp"
#include "busyq/rational.hpp"

namespace busyq {

/// Ground truth computed straight from the embedded-chain transition law by
/// a forward sweep over the lattice, one phase at a time, tracking the mass
/// that has not yet touched the diagonal. Shares no formula code with the
/// analytic routes. O(N^2) states; the cap only bounds output size.
BusyPeriodDistribution busy_dist_bruteforce(const Model& model, int cap = 16);

/// Second independent route: enumerate all Catalan(N) Dyck paths, weight
/// each one, and group by first diagonal return.
BusyPeriodDistribution busy_dist_enumeration(const Model& model, int cap = 14);

/// p_n(i): probability the chain first enters phase n at state (i, n)
/// without having touched the diagonal. p_n(n-1) = p_n(n) = 0 for n >= 2.
Rational p_n_i_bruteforce(const Model& model, int n, int i);

/// float64 mirror of the DP sweep.
std::vector<double> busy_dist_bruteforce_f64(const Model& model, int cap = 16);

}  // namespace busyq
