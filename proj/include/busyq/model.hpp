#pragma once

#include <string>
#include <vector>

#include "busyq/rational.hpp"

namespace busyq {

enum class RateSource { Proportional, ExplicitSequence };

/// Validated queue parameters: pool size N, per-phase arrival rates
/// lambda_1 > ... > lambda_N = 0 and service rate mu > 0. Immutable after
/// construction; phases are indexed 1..N everywhere.
class Model {
 public:
  /// Proportional rates lambda_j = lambda * (N - j).
  static Model from_rate(int n, const Rational& lambda, const Rational& mu);

  /// Explicit strictly decreasing sequence ending in zero. A sequence that
  /// happens to be proportional is detected and tagged as such, so the two
  /// construction paths behave identically downstream.
  static Model from_sequence(std::vector<Rational> lambda_seq, const Rational& mu);

  /// Config document: {"n": N, "lambda": "p/q", "mu": "p/q"}
  ///               or {"lambda_seq": ["p/q", ...], "mu": "p/q"}.
  /// Rates must be "p/q"/decimal strings or integers; binary floats are
  /// rejected so exactness is preserved end to end.
  static Model from_json(const std::string& json_text);
  static Model load_config(const std::string& path);

  int n() const { return static_cast<int>(lambda_.size()); }
  const std::vector<Rational>& lambda_seq() const { return lambda_; }
  const Rational& lambda(int j) const;  // 1-based phase index
  const Rational& mu() const { return mu_; }
  RateSource source() const { return source_; }

  /// rho_j = mu / (mu + lambda_j); rho_N = 1 since lambda_N = 0.
  const Rational& rho(int j) const;

  /// rho_j rendered to float64 once at construction (sampling and the
  /// float evaluation mode share this rendering).
  double rho_f64(int j) const;

  /// Stable 16-hex-digit digest of (N, lambda sequence, mu).
  const std::string& digest() const { return digest_; }

 private:
  Model(std::vector<Rational> lambda_seq, Rational mu, RateSource source);

  std::vector<Rational> lambda_;
  Rational mu_;
  RateSource source_;
  std::vector<Rational> rho_;
  std::vector<double> rho_f64_;
  std::string digest_;
};

}  // namespace busyq
