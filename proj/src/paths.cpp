#include "busyq/paths.hpp"

#include "busyq/error.hpp"

namespace busyq {

bool is_dyck(std::span<const int> u) {
  const int n = static_cast<int>(u.size());
  long sum = 0;
  for (int k = 1; k <= n; ++k) {
    if (u[k - 1] < 0) return false;
    sum += u[k - 1];
    if (k < n && sum > k) return false;
  }
  return sum == n;
}

bool is_dyck(const DyckPath& u) { return is_dyck(std::span<const int>(u.jumps)); }

namespace {

void enumerate_dyck_rec(int n, int pos, int sum, DyckPath& path, const PathVisitor& visit) {
  if (pos == n - 1) {
    path.jumps[pos] = n - sum;
    visit(path);
    return;
  }
  const int max_jump = (pos + 1) - sum;  // prefix sum through pos+1 stays <= pos+1
  for (int v = 0; v <= max_jump; ++v) {
    path.jumps[pos] = v;
    enumerate_dyck_rec(n, pos + 1, sum + v, path, visit);
  }
}

}  // namespace

void enumerate_dyck(int order, const PathVisitor& visit) {
  DyckPath path;
  if (order <= 0) {
    visit(path);
    return;
  }
  path.jumps.assign(order, 0);
  enumerate_dyck_rec(order, 0, 0, path, visit);
}

bool is_feasible(std::span<const int> u) {
  if (u.empty()) return false;
  if (!is_dyck(u)) return false;
  long sum = 0;
  for (int j = 1; j <= static_cast<int>(u.size()); ++j) {
    sum += u[j - 1];
    if (u[j - 1] != 0 && sum != j) return false;
  }
  return true;
}

bool is_feasible(const DyckPath& u) { return is_feasible(std::span<const int>(u.jumps)); }

bool matches_run_rules(std::span<const int> u) {
  if (u.empty()) return false;
  long sum = 0;
  int zero_run = 0;
  for (int v : u) {
    if (v < 0) return false;
    if (v == 0) {
      ++zero_run;
    } else {
      if (v != zero_run + 1) return false;
      zero_run = 0;
    }
    sum += v;
  }
  return sum == static_cast<long>(u.size());
}

namespace {

// Feasible paths are exactly the compositions of the order: a composition
// (c_1,...,c_M) puts u = c_m at position c_1+...+c_m and zero elsewhere.
// Choosing parts largest-first yields ascending lexicographic u.
void enumerate_feasible_rec(int n, int pos, DyckPath& path, const PathVisitor& visit) {
  if (pos == n) {
    visit(path);
    return;
  }
  for (int part = n - pos; part >= 1; --part) {
    path.jumps[pos + part - 1] = part;
    enumerate_feasible_rec(n, pos + part, path, visit);
    path.jumps[pos + part - 1] = 0;
  }
}

}  // namespace

void enumerate_feasible(int order, const PathVisitor& visit) {
  if (order <= 0) return;
  DyckPath path;
  path.jumps.assign(order, 0);
  enumerate_feasible_rec(order, 0, path, visit);
}

Rational path_weight(const Model& model, const DyckPath& u) {
  if (u.order() != model.n())
    throw Error(ErrorKind::OrderMismatch,
                "path order " + std::to_string(u.order()) + " does not match N = " +
                    std::to_string(model.n()));
  Rational w(1);
  long prefix = 0;
  for (int j = 1; j <= model.n(); ++j) {
    const Rational& rho = model.rho(j);
    w *= rho.pow(u.jumps[j - 1]);
    prefix += u.jumps[j - 1];
    if (prefix < j) w *= Rational(1) - rho;
  }
  return w;
}

int first_return(std::span<const int> u) {
  if (u.empty()) throw Error(ErrorKind::IndexOutOfRange, "first_return of empty path");
  long sum = 0;
  for (int k = 1; k <= static_cast<int>(u.size()); ++k) {
    sum += u[k - 1];
    if (sum == k) return k;
  }
  throw Error(ErrorKind::IndexOutOfRange, "path never returns to the diagonal");
}

int first_return(const DyckPath& u) { return first_return(std::span<const int>(u.jumps)); }

ExcursionDecomposition excursion_decomposition(const DyckPath& u) {
  if (!is_feasible(u))
    throw Error(ErrorKind::NotFeasible, "path is not a feasible allocation");
  ExcursionDecomposition out;
  out.touches.push_back(1);
  for (int j = 1; j <= u.order(); ++j) {
    if (u.jumps[j - 1] != 0) {
      out.touches.push_back(j);
      ++out.excursions;
    }
  }
  out.touches.push_back(u.order());
  return out;
}

}  // namespace busyq
