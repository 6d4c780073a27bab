#include "busyq/oracle.hpp"

#include <string>
#include <type_traits>

#include "busyq/error.hpp"
#include "busyq/paths.hpp"

namespace busyq {

namespace {

void check_cap(const Model& m, int cap, const char* what) {
  if (m.n() > cap)
    throw Error(ErrorKind::CapExceeded, std::string(what) + ": N = " +
                                            std::to_string(m.n()) + " exceeds cap " +
                                            std::to_string(cap));
}

template <class Num>
Num rho_of(const Model& m, int j) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return m.rho(j);
  } else {
    return m.rho_f64(j);
  }
}

// Forward sweep over phases. `in[i]` is the probability of entering phase j
// at (i, j) with the diagonal untouched; within the phase, service steps
// move mass up the column with probability rho_j:
//   q[i] = in[i] + q[i-1] * rho_j
// the step from (j-1, j) absorbs into s_j, and arrivals carry
// q[i] * (1 - rho_j) into phase j+1. The start (0,0) steps up with
// probability one, so phase 1 is entered at (0,1) with mass one.
template <class Num>
std::vector<Num> sweep_s(const Model& m) {
  const int N = m.n();
  std::vector<Num> s(N, Num(0));
  std::vector<Num> in(N + 1, Num(0));
  in[0] = Num(1);
  std::vector<Num> q(N + 1, Num(0));
  for (int j = 1; j <= N; ++j) {
    const Num rho = rho_of<Num>(m, j);
    q[0] = in[0];
    for (int i = 1; i <= j - 1; ++i) q[i] = in[i] + q[i - 1] * rho;
    s[j - 1] = q[j - 1] * rho;
    if (j < N) {
      const Num up = Num(1) - rho;
      for (int i = 0; i <= j - 1; ++i) in[i] = q[i] * up;
      in[j] = Num(0);
    }
  }
  return s;
}

}  // namespace

BusyPeriodDistribution busy_dist_bruteforce(const Model& model, int cap) {
  check_cap(model, cap, "oracle DP");
  return BusyPeriodDistribution{sweep_s<Rational>(model), Method::Oracle, model.digest()};
}

std::vector<double> busy_dist_bruteforce_f64(const Model& model, int cap) {
  check_cap(model, cap, "oracle DP");
  return sweep_s<double>(model);
}

BusyPeriodDistribution busy_dist_enumeration(const Model& model, int cap) {
  check_cap(model, cap, "path enumeration");
  const int N = model.n();
  std::vector<Rational> s(N, Rational(0));
  enumerate_dyck(N, [&](const DyckPath& u) {
    s[first_return(u) - 1] += path_weight(model, u);
  });
  return BusyPeriodDistribution{std::move(s), Method::Oracle, model.digest()};
}

Rational p_n_i_bruteforce(const Model& model, int n, int i) {
  const int N = model.n();
  if (n < 1 || n > N || i < 0 || i > n)
    throw Error(ErrorKind::IndexOutOfRange,
                "p_" + std::to_string(n) + "(" + std::to_string(i) + ") out of range");
  if (n == 1) return i == 0 ? Rational(1) : Rational(0);
  if (i >= n - 1) return Rational(0);

  // Same sweep as above, stopped at phase n-1; the answer is the arrival
  // flow out of (i, n-1).
  std::vector<Rational> in(N + 1, Rational(0));
  in[0] = Rational(1);
  std::vector<Rational> q(N + 1, Rational(0));
  for (int j = 1; j <= n - 1; ++j) {
    const Rational& rho = model.rho(j);
    q[0] = in[0];
    for (int k = 1; k <= j - 1; ++k) q[k] = in[k] + q[k - 1] * rho;
    const Rational up = Rational(1) - rho;
    for (int k = 0; k <= j - 1; ++k) in[k] = q[k] * up;
    in[j] = Rational(0);
  }
  return in[i];
}

}  // namespace busyq
