#include "busyq/exact.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "busyq/oracle.hpp"
#include "busyq/paths.hpp"

namespace busyq {

namespace {

template <class Num>
Num to_num(const Rational& r) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return r;
  } else {
    return r.to_double();
  }
}

template <class Num>
bool num_is_zero(const Num& x) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return x.is_zero();
  } else {
    return x == 0.0;
  }
}

template <class Num>
Num num_pow(const Num& base, int e) {
  if constexpr (std::is_same_v<Num, Rational>) {
    return base.pow(e);
  } else {
    return std::pow(base, e);
  }
}

// 1-based copies of the model rates, in the requested scalar type.
template <class Num>
std::vector<Num> lambdas(const Model& m) {
  std::vector<Num> v(m.n() + 1, Num(0));
  for (int j = 1; j <= m.n(); ++j) v[j] = to_num<Num>(m.lambda(j));
  return v;
}

template <class Num>
std::vector<Num> rhos(const Model& m) {
  std::vector<Num> v(m.n() + 1, Num(0));
  for (int j = 1; j <= m.n(); ++j) v[j] = to_num<Num>(m.rho(j));
  return v;
}

template <class Num>
Num ratio_or_throw(const Num& lam_k, const Num& lam_n) {
  Num d = lam_k - lam_n;
  if (num_is_zero(d))
    throw Error(ErrorKind::DegenerateRates, "equal arrival rates in ratio");
  return lam_k / d;
}

template <class Num>
std::vector<Num> recursion_s_impl(const Model& m) {
  const int N = m.n();
  const auto lam = lambdas<Num>(m);
  const auto rho = rhos<Num>(m);
  std::vector<Num> s(N + 1, Num(0));
  s[1] = rho[1];
  std::vector<Num> suffix(N + 2, Num(1));
  for (int n = 2; n <= N; ++n) {
    // suffix[i] = prod_{k=i}^{n-1} lambda_k / (lambda_k - lambda_n)
    suffix[n] = Num(1);
    for (int i = n - 1; i >= 1; --i)
      suffix[i] = ratio_or_throw(lam[i], lam[n]) * suffix[i + 1];
    Num acc = num_pow(rho[n], n) * suffix[1];
    Num rho_pow = rho[n];
    for (int i = n - 1; i >= 1; --i) {
      acc -= s[i] * rho_pow * suffix[i];
      rho_pow = rho_pow * rho[n];
    }
    s[n] = acc;
  }
  return std::vector<Num>(s.begin() + 1, s.end());
}

template <class Num>
std::vector<Num> binomial_s_impl(const Model& m) {
  const int N = m.n();
  const auto rho = rhos<Num>(m);
  std::vector<Num> s(N + 1, Num(0));
  s[1] = rho[1];
  for (int n = 2; n <= N; ++n) {
    Num acc = num_pow(rho[n], n) * to_num<Num>(Rational::binomial(N - 1, n - 1));
    Num rho_pow = rho[n];
    for (int i = n - 1; i >= 1; --i) {
      acc -= s[i] * rho_pow * to_num<Num>(Rational::binomial(N - i, n - i));
      rho_pow = rho_pow * rho[n];
    }
    s[n] = acc;
  }
  return std::vector<Num>(s.begin() + 1, s.end());
}

template <class Num>
Triangular<Num> matrix_A_impl(const Model& m) {
  const int N = m.n();
  const auto lam = lambdas<Num>(m);
  const auto rho = rhos<Num>(m);
  Triangular<Num> A(N);
  for (int n = 1; n <= N; ++n) {
    Num suffix(1);  // prod_{k=i}^{n-1} lambda_k / (lambda_k - lambda_n), i = n down to 1
    Num inv_rho_pow = num_pow(Num(1) / rho[n], n);
    for (int i = n; i >= 1; --i) {
      A.at(n, i) = inv_rho_pow * suffix;
      if (i > 1) {
        suffix = ratio_or_throw(lam[i - 1], lam[n]) * suffix;
        inv_rho_pow = inv_rho_pow * rho[n];
      }
    }
  }
  return A;
}

template <class Num>
std::vector<Num> vector_b_impl(const Model& m) {
  const int N = m.n();
  const auto lam = lambdas<Num>(m);
  std::vector<Num> b(N);
  for (int n = 1; n <= N; ++n) {
    Num prod(1);
    for (int k = 1; k < n; ++k) prod *= ratio_or_throw(lam[k], lam[n]);
    b[n - 1] = prod;
  }
  return b;
}

template <class Num>
Triangular<Num> invert_impl(const Triangular<Num>& a) {
  const int N = a.dim();
  Triangular<Num> inv(N);
  for (int n = 1; n <= N; ++n) {
    if (num_is_zero(a.at(n, n)))
      throw Error(ErrorKind::SingularMatrix, "zero diagonal at row " + std::to_string(n));
    inv.at(n, n) = Num(1) / a.at(n, n);
  }
  // Diagonal by diagonal: all (n, n-1), then all (n, n-2), down to (N, 1).
  for (int d = 1; d < N; ++d) {
    for (int n = d + 1; n <= N; ++n) {
      const int i = n - d;
      Num acc(0);
      for (int k = i + 1; k <= n; ++k) acc += inv.at(n, k) * a.at(k, i);
      inv.at(n, i) = -(inv.at(i, i) * acc);
    }
  }
  return inv;
}

template <class Num>
std::vector<Num> matrix_s_impl(const Model& m) {
  const auto A = matrix_A_impl<Num>(m);
  const auto inv = invert_impl<Num>(A);
  const auto b = vector_b_impl<Num>(m);
  const int N = m.n();
  std::vector<Num> s(N, Num(0));
  for (int n = 1; n <= N; ++n) {
    Num acc(0);
    for (int i = 1; i <= n; ++i) acc += inv.at(n, i) * b[i - 1];
    s[n - 1] = acc;
  }
  return s;
}

// Diagonal-touch positions k_(0..M+1) for an exponent vector over the
// contiguous index range [first, first + len - 1].
std::vector<int> touch_indices(std::span<const int> exponents, int first) {
  std::vector<int> kk;
  kk.push_back(first);
  for (int t = 0; t < static_cast<int>(exponents.size()); ++t)
    if (exponents[t] != 0) kk.push_back(first + t);
  kk.push_back(first + static_cast<int>(exponents.size()) - 1);
  return kk;
}

template <class Num>
Num b_from_touches(const std::vector<int>& kk, const std::vector<Num>& lam) {
  const int M = static_cast<int>(kk.size()) - 2;
  Num prod(1);
  for (int m = 0; m <= M; ++m) {
    const int hi = kk[m + 1];
    for (int k = kk[m]; k < hi; ++k) prod *= ratio_or_throw(lam[k], lam[hi]);
  }
  return (M - 1) & 1 ? -prod : prod;
}

void check_b_args(const Model& m, std::span<const int> exponents, int first) {
  if (exponents.empty())
    throw Error(ErrorKind::EmptyAllocation, "exponent vector is empty");
  if (first < 1 || first + static_cast<int>(exponents.size()) - 1 > m.n())
    throw Error(ErrorKind::IndexOutOfRange, "exponent indices outside 1..N");
  bool any = false;
  for (int e : exponents) any = any || e != 0;
  if (!any)
    throw Error(ErrorKind::EmptyAllocation, "exponent vector has no nonzero entry");
}

// Walks the composition tree of feasible allocations, sharing partial
// products between siblings. An excursion from touch t to touch r = t + c
// contributes
//   rho_r^c * prod_{k=max(t,1)}^{r-1} lambda_k / (lambda_k - lambda_r),
// and `flip` negates it: false for the first excursion of the sum,
// true for every later one, which realizes the (-1)^(M-1) sign.
template <class Num>
void allocation_subtree(const std::vector<Num>& lam, const std::vector<Num>& rho, int end,
                        int t, Num w, bool flip, Num& acc) {
  if (t == end) {
    acc += w;
    return;
  }
  for (int r = t + 1; r <= end; ++r) {
    Num f = num_pow(rho[r], r - t);
    for (int k = std::max(t, 1); k < r; ++k) f *= ratio_or_throw(lam[k], lam[r]);
    Num child = w * f;
    if (flip) child = -child;
    allocation_subtree(lam, rho, end, r, child, true, acc);
  }
}

template <class Num>
std::vector<Num> explicit_s_impl(const Model& m, int workers) {
  const int N = m.n();
  const auto lam = lambdas<Num>(m);
  const auto rho = rhos<Num>(m);

  // One task per (entry i, first diagonal touch r): the subtree below the
  // first excursion. Fixed partition, so the result does not depend on the
  // worker count; per-entry reduction runs left to right over r.
  struct Task {
    int entry;
    int first_touch;
  };
  std::vector<Task> tasks;
  for (int i = 1; i <= N; ++i)
    for (int r = 1; r <= i; ++r) tasks.push_back({i, r});

  std::vector<Num> partial(tasks.size(), Num(0));
  const int total = static_cast<int>(tasks.size());
#ifdef _OPENMP
  const int nw = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nw)
#else
  (void)workers;
#endif
  for (int t = 0; t < total; ++t) {
    const auto [i, r] = tasks[t];
    Num w = num_pow(rho[r], r);
    for (int k = 1; k < r; ++k) w *= ratio_or_throw(lam[k], lam[r]);
    Num acc(0);
    allocation_subtree(lam, rho, i, r, w, true, acc);
    partial[t] = acc;
  }

  std::vector<Num> s(N, Num(0));
  for (int t = 0; t < total; ++t) s[tasks[t].entry - 1] += partial[t];
  return s;
}

BusyPeriodDistribution make_dist(const Model& m, std::vector<Rational> s, Method method) {
  return BusyPeriodDistribution{std::move(s), method, m.digest()};
}

void require_proportional(const Model& m) {
  if (m.source() != RateSource::Proportional)
    throw Error(ErrorKind::RequiresProportionalMode,
                "this route needs proportional rates lambda_j = lambda*(N-j)");
}

}  // namespace

BusyPeriodDistribution busy_dist_recursion(const Model& model) {
  return make_dist(model, recursion_s_impl<Rational>(model), Method::Recursion);
}

BusyPeriodDistribution busy_dist_recursion_binomial(const Model& model) {
  require_proportional(model);
  return make_dist(model, binomial_s_impl<Rational>(model), Method::RecursionBinomial);
}

TriangularMatrix matrix_A(const Model& model) { return matrix_A_impl<Rational>(model); }

std::vector<Rational> vector_b(const Model& model) { return vector_b_impl<Rational>(model); }

TriangularMatrix invert_lower_triangular(const TriangularMatrix& a) {
  return invert_impl<Rational>(a);
}

BusyPeriodDistribution busy_dist_matrix(const Model& model) {
  return make_dist(model, matrix_s_impl<Rational>(model), Method::MatrixInverse);
}

Rational b_coefficient(const Model& model, std::span<const int> exponents, int first_index) {
  check_b_args(model, exponents, first_index);
  return b_from_touches(touch_indices(exponents, first_index), lambdas<Rational>(model));
}

Rational b_coefficient_binomial(const Model& model, std::span<const int> exponents,
                                int first_index) {
  require_proportional(model);
  check_b_args(model, exponents, first_index);
  const auto kk = touch_indices(exponents, first_index);
  const int M = static_cast<int>(kk.size()) - 2;
  Rational prod(1);
  for (int m = 0; m <= M; ++m)
    prod *= Rational::binomial(model.n() - kk[m], kk[m + 1] - kk[m]);
  return (M - 1) & 1 ? -prod : prod;
}

Rational a_inverse_explicit(const Model& model, int i, int n) {
  if (i < 1 || i > model.n() || n < 0 || n > i - 1)
    throw Error(ErrorKind::IndexOutOfRange,
                "need 1 <= i <= N and 0 <= n <= i-1, got i=" + std::to_string(i) +
                    " n=" + std::to_string(n));
  const int base = i - n;
  Rational prefactor = model.rho(base).pow(base);
  if (n == 0) return prefactor;

  // Literal sum over U_n with the exponent vector (base, u_1, ..., u_n).
  Rational acc(0);
  std::vector<int> exponents(n + 1, 0);
  exponents[0] = base;
  enumerate_feasible(n, [&](const DyckPath& u) {
    for (int t = 0; t < n; ++t) exponents[t + 1] = u.jumps[t];
    Rational term = b_coefficient(model, exponents, base);
    for (int t = 1; t <= n; ++t) term *= model.rho(base + t).pow(u.jumps[t - 1]);
    acc += term;
  });
  return prefactor * acc;
}

BusyPeriodDistribution busy_dist_explicit(const Model& model, int workers) {
  return make_dist(model, explicit_s_impl<Rational>(model, workers), Method::ExplicitFormula);
}

BusyPeriodDistribution busy_dist_explicit_serial(const Model& model) {
  const int N = model.n();
  std::vector<Rational> s(N, Rational(0));
  std::vector<int> exponents;
  for (int i = 1; i <= N; ++i) {
    Rational acc(0);
    enumerate_feasible(i, [&](const DyckPath& u) {
      exponents.assign(u.jumps.begin(), u.jumps.end());
      Rational term = b_coefficient(model, exponents, 1);
      for (int j = 1; j <= i; ++j) term *= model.rho(j).pow(u.jumps[j - 1]);
      acc += term;
    });
    s[i - 1] = acc;
  }
  return make_dist(model, std::move(s), Method::ExplicitFormula);
}

GeneratingFunctionValue gf_evaluate(const Model& model, int n, const Rational& z) {
  if (n < 1 || n > model.n())
    throw Error(ErrorKind::PhaseOutOfRange,
                "phase " + std::to_string(n) + " outside 1.." + std::to_string(model.n()));
  if (n == 1) return GeneratingFunctionValue{1, z, Rational(1)};
  for (int j = 1; j < n; ++j) {
    if (z * model.rho(j) == Rational(1))
      throw Error(ErrorKind::PoleAtArgument,
                  "z = 1/rho_" + std::to_string(j) + " is a pole of P_" + std::to_string(n));
  }
  const auto s = recursion_s_impl<Rational>(model);
  // suffix[i] = prod_{j=i}^{n-1} G_{rho_j}(z)
  std::vector<Rational> suffix(n + 1, Rational(1));
  for (int j = n - 1; j >= 1; --j) {
    const Rational& rho = model.rho(j);
    suffix[j] = (Rational(1) - rho) / (Rational(1) - rho * z) * suffix[j + 1];
  }
  Rational value = suffix[1];
  Rational zpow = z;
  for (int i = 1; i <= n - 1; ++i) {
    value -= s[i - 1] * zpow * suffix[i];
    zpow *= z;
  }
  return GeneratingFunctionValue{n, z, value};
}

JointBusyDistribution joint_busy_dist(const Model& model, int max_periods) {
  if (max_periods < 1)
    throw Error(ErrorKind::NonPositiveParameter, "max_periods must be >= 1");
  const int N = model.n();

  // Residual distributions: s^(m) is the first-busy-period law when m
  // customers remain, i.e. the model restricted to the last m rates.
  std::vector<std::vector<Rational>> tail_s(N + 1);
  for (int m = 1; m <= N; ++m) {
    std::vector<Rational> rates(model.lambda_seq().end() - m, model.lambda_seq().end());
    tail_s[m] = recursion_s_impl<Rational>(Model::from_sequence(std::move(rates), model.mu()));
  }

  JointBusyDistribution out;
  out.max_periods = max_periods;
  out.remainder = Rational(0);
  std::vector<int> parts;
  auto rec = [&](auto&& self, int remaining, const Rational& prob) -> void {
    if (remaining == 0) {
      out.probabilities.emplace_back(parts, prob);
      return;
    }
    if (static_cast<int>(parts.size()) == max_periods) {
      // Every continuation uses more than max_periods busy periods; the
      // residual composition measure is a probability measure, so the
      // whole branch carries exactly `prob`.
      out.remainder += prob;
      return;
    }
    for (int c = remaining; c >= 1; --c) {
      parts.push_back(c);
      self(self, remaining - c, prob * tail_s[remaining][c - 1]);
      parts.pop_back();
    }
  };
  rec(rec, N, Rational(1));
  return out;
}

FloatDistribution busy_dist_f64(const Model& model, Method method, int workers) {
  std::vector<double> s;
  switch (method) {
    case Method::Recursion:
      s = recursion_s_impl<double>(model);
      break;
    case Method::RecursionBinomial:
      require_proportional(model);
      s = binomial_s_impl<double>(model);
      break;
    case Method::MatrixInverse:
      s = matrix_s_impl<double>(model);
      break;
    case Method::ExplicitFormula:
      s = explicit_s_impl<double>(model, workers);
      break;
    case Method::Oracle:
      s = busy_dist_bruteforce_f64(model);
      break;
    case Method::MonteCarlo:
      throw Error(ErrorKind::BadConfig, "montecarlo is not an analytic route");
  }
  return FloatDistribution{std::move(s), method, model.digest()};
}

CancellationReport cancellation_report(const Model& model, int workers) {
  CancellationReport rep;
  rep.n = model.n();
  rep.float_s = explicit_s_impl<double>(model, workers);
  const auto exact = explicit_s_impl<Rational>(model, workers);
  rep.exact_s.reserve(exact.size());
  for (const Rational& v : exact) rep.exact_s.push_back(v.to_double());
  for (size_t i = 0; i < exact.size(); ++i)
    rep.max_abs_deviation =
        std::max(rep.max_abs_deviation, std::fabs(rep.float_s[i] - rep.exact_s[i]));
  return rep;
}

}  // namespace busyq
