#pragma once

#include <string>
#include <vector>

#include "busyq/error.hpp"
#include "busyq/rational.hpp"

namespace busyq {

enum class Method {
  Recursion,
  RecursionBinomial,
  MatrixInverse,
  ExplicitFormula,
  Oracle,
  MonteCarlo,
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Recursion: return "recursion";
    case Method::RecursionBinomial: return "binomial";
    case Method::MatrixInverse: return "matrix";
    case Method::ExplicitFormula: return "explicit";
    case Method::Oracle: return "oracle";
    case Method::MonteCarlo: return "montecarlo";
  }
  return "unknown";
}

/// Exact distribution (s_1,...,s_N) of the number of customers served in the
/// first busy period, tagged with the route that produced it.
struct BusyPeriodDistribution {
  std::vector<Rational> s;  // s[i-1] = P(S = i)
  Method method{};
  std::string model_digest;

  int order() const { return static_cast<int>(s.size()); }

  const Rational& at(int i) const {
    if (i < 1 || i > order())
      throw Error(ErrorKind::IndexOutOfRange,
                  "s_" + std::to_string(i) + " outside 1.." + std::to_string(order()));
    return s[i - 1];
  }

  Rational sum() const {
    Rational total(0);
    for (const Rational& v : s) total += v;
    return total;
  }
};

/// float64 mirror of a distribution route (benchmarking and cancellation
/// measurement only; never used to assert correctness).
struct FloatDistribution {
  std::vector<double> s;
  Method method{};
  std::string model_digest;
};

}  // namespace busyq
