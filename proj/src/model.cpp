#include "busyq/model.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "busyq/error.hpp"

namespace busyq {

namespace {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Rational rate_from_json(const nlohmann::json& v, const char* key) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float())
    throw Error(ErrorKind::BadConfig,
                std::string(key) + " must be an exact rational: use a \"p/q\" "
                "or decimal string, or an integer, not a binary float");
  throw Error(ErrorKind::BadConfig, std::string(key) + " has unsupported type");
}

}  // namespace

Model::Model(std::vector<Rational> lambda_seq, Rational mu, RateSource source)
    : lambda_(std::move(lambda_seq)), mu_(std::move(mu)), source_(source) {
  const int N = n();
  rho_.reserve(N);
  rho_f64_.reserve(N);
  for (int j = 0; j < N; ++j) {
    rho_.push_back(mu_ / (mu_ + lambda_[j]));
    rho_f64_.push_back(rho_.back().to_double());
  }
  std::ostringstream canon;
  canon << "n=" << N << ";lambda=";
  for (int j = 0; j < N; ++j) canon << (j ? "," : "") << lambda_[j].str();
  canon << ";mu=" << mu_.str();
  digest_ = fnv1a_hex(canon.str());
}

Model Model::from_rate(int n, const Rational& lambda, const Rational& mu) {
  if (n < 1) throw Error(ErrorKind::NonPositiveParameter, "n must be >= 1");
  if (lambda.sign() <= 0)
    throw Error(ErrorKind::NonPositiveParameter, "lambda must be > 0");
  if (mu.sign() <= 0) throw Error(ErrorKind::NonPositiveParameter, "mu must be > 0");
  std::vector<Rational> seq;
  seq.reserve(n);
  for (int j = 1; j <= n; ++j) seq.push_back(lambda * Rational(n - j));
  return Model(std::move(seq), mu, RateSource::Proportional);
}

Model Model::from_sequence(std::vector<Rational> lambda_seq, const Rational& mu) {
  if (lambda_seq.empty())
    throw Error(ErrorKind::NonPositiveParameter, "lambda sequence must be nonempty");
  if (mu.sign() <= 0) throw Error(ErrorKind::NonPositiveParameter, "mu must be > 0");
  const int N = static_cast<int>(lambda_seq.size());
  for (int j = 0; j + 1 < N; ++j) {
    if (!(lambda_seq[j] > lambda_seq[j + 1]))
      throw Error(ErrorKind::NotStrictlyDecreasing,
                  "lambda sequence must be strictly decreasing (entry " +
                      std::to_string(j + 1) + " is not above entry " +
                      std::to_string(j + 2) + ")");
  }
  if (!lambda_seq.back().is_zero())
    throw Error(ErrorKind::LastRateNonzero, "last arrival rate must be zero");

  // lambda_j = base * (N - j) for base = lambda_{N-1}?
  RateSource source = RateSource::Proportional;
  if (N >= 2) {
    const Rational& base = lambda_seq[N - 2];
    for (int j = 0; j < N; ++j) {
      if (lambda_seq[j] != base * Rational(N - (j + 1))) {
        source = RateSource::ExplicitSequence;
        break;
      }
    }
  }
  return Model(std::move(lambda_seq), mu, source);
}

Model Model::from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::BadConfig, "config must be a JSON object");

  const bool has_seq = doc.contains("lambda_seq");
  const bool has_rate = doc.contains("n") || doc.contains("lambda");
  if (has_seq && has_rate)
    throw Error(ErrorKind::BadConfig,
                "config must use either {n, lambda, mu} or {lambda_seq, mu}, not both");
  if (!doc.contains("mu")) throw Error(ErrorKind::BadConfig, "config is missing \"mu\"");
  Rational mu = rate_from_json(doc.at("mu"), "mu");

  if (has_seq) {
    const auto& arr = doc.at("lambda_seq");
    if (!arr.is_array() || arr.empty())
      throw Error(ErrorKind::BadConfig, "lambda_seq must be a nonempty array");
    std::vector<Rational> seq;
    seq.reserve(arr.size());
    for (const auto& v : arr) seq.push_back(rate_from_json(v, "lambda_seq entry"));
    return from_sequence(std::move(seq), mu);
  }
  if (!doc.contains("n") || !doc.contains("lambda"))
    throw Error(ErrorKind::BadConfig, "config needs both \"n\" and \"lambda\"");
  if (!doc.at("n").is_number_integer())
    throw Error(ErrorKind::BadConfig, "\"n\" must be an integer");
  int n = doc.at("n").get<int>();
  Rational lambda = rate_from_json(doc.at("lambda"), "lambda");
  return from_rate(n, lambda, mu);
}

Model Model::load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadConfig, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const Rational& Model::lambda(int j) const {
  if (j < 1 || j > n())
    throw Error(ErrorKind::PhaseOutOfRange,
                "phase " + std::to_string(j) + " outside 1.." + std::to_string(n()));
  return lambda_[j - 1];
}

const Rational& Model::rho(int j) const {
  if (j < 1 || j > n())
    throw Error(ErrorKind::PhaseOutOfRange,
                "phase " + std::to_string(j) + " outside 1.." + std::to_string(n()));
  return rho_[j - 1];
}

double Model::rho_f64(int j) const {
  if (j < 1 || j > n())
    throw Error(ErrorKind::PhaseOutOfRange,
                "phase " + std::to_string(j) + " outside 1.." + std::to_string(n()));
  return rho_f64_[j - 1];
}

}  // namespace busyq
