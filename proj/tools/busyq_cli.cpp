// busyq: exact busy-period distributions for a single-server queue with a
// finite pool of exponentially arriving customers. Subcommands expose the
// analytic routes (recursion, binomial recursion, triangular-system inverse,
// signed sum over feasible allocations), a lattice DP oracle, path
// enumeration and a seeded Monte Carlo validator.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "busyq/error.hpp"
#include "busyq/exact.hpp"
#include "busyq/model.hpp"
#include "busyq/montecarlo.hpp"
#include "busyq/oracle.hpp"
#include "busyq/paths.hpp"

using busyq::BusyPeriodDistribution;
using busyq::Error;
using busyq::ErrorKind;
using busyq::Method;
using busyq::Model;
using busyq::Rational;
using json = nlohmann::ordered_json;

namespace {

struct ModelFlags {
  int n = 0;
  std::string lambda;
  std::string mu;
  std::string lambda_seq;
  std::string config;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--n", f.n, "pool size N (with --lambda)");
  cmd->add_option("--lambda", f.lambda, "base arrival rate (rates lambda*(N-j))");
  cmd->add_option("--mu", f.mu, "service rate");
  cmd->add_option("--lambda-seq", f.lambda_seq,
                  "comma-separated strictly decreasing rates ending in 0");
  cmd->add_option("--config", f.config, "model config JSON file");
}

Model build_model(const ModelFlags& f) {
  const bool has_config = !f.config.empty();
  const bool has_seq = !f.lambda_seq.empty();
  const bool has_rate = f.n != 0 || !f.lambda.empty();
  const int sources = int(has_config) + int(has_seq) + int(has_rate);
  if (sources != 1)
    throw Error(ErrorKind::BadConfig,
                "specify exactly one model source: --config FILE, --lambda-seq LIST, "
                "or --n N --lambda RATE (with --mu)");
  if (has_config) return Model::load_config(f.config);
  if (has_seq) {
    if (f.mu.empty()) throw Error(ErrorKind::BadConfig, "--lambda-seq needs --mu");
    std::vector<Rational> seq;
    std::stringstream ss(f.lambda_seq);
    std::string item;
    while (std::getline(ss, item, ',')) seq.push_back(Rational::parse(item));
    return Model::from_sequence(std::move(seq), Rational::parse(f.mu));
  }
  if (f.n == 0 || f.lambda.empty() || f.mu.empty())
    throw Error(ErrorKind::BadConfig, "proportional model needs --n, --lambda and --mu");
  return Model::from_rate(f.n, Rational::parse(f.lambda), Rational::parse(f.mu));
}

int default_workers() {
  if (const char* env = std::getenv("BUSYQ_WORKERS")) return std::atoi(env);
  return 0;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::BadConfig, "cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// RFC 4180: quote a field when it contains commas or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Method parse_method(const std::string& name) {
  if (name == "recursion") return Method::Recursion;
  if (name == "binomial") return Method::RecursionBinomial;
  if (name == "matrix") return Method::MatrixInverse;
  if (name == "explicit") return Method::ExplicitFormula;
  if (name == "oracle") return Method::Oracle;
  throw Error(ErrorKind::BadConfig, "unknown method \"" + name + "\"");
}

BusyPeriodDistribution run_exact(const Model& m, Method method, int workers, int cap) {
  switch (method) {
    case Method::Recursion: return busyq::busy_dist_recursion(m);
    case Method::RecursionBinomial: return busyq::busy_dist_recursion_binomial(m);
    case Method::MatrixInverse: return busyq::busy_dist_matrix(m);
    case Method::ExplicitFormula: return busyq::busy_dist_explicit(m, workers);
    case Method::Oracle: return busyq::busy_dist_bruteforce(m, cap);
    default: throw Error(ErrorKind::BadConfig, "method not available here");
  }
}

std::vector<Method> methods_for_all(const Model& m, int cap) {
  std::vector<Method> out = {Method::Recursion};
  if (m.source() == busyq::RateSource::Proportional)
    out.push_back(Method::RecursionBinomial);
  out.push_back(Method::MatrixInverse);
  out.push_back(Method::ExplicitFormula);
  if (m.n() <= cap) out.push_back(Method::Oracle);
  return out;
}

json exact_block(const BusyPeriodDistribution& d) {
  json block;
  block["method"] = busyq::method_name(d.method);
  json entries = json::array();
  for (int i = 1; i <= d.order(); ++i)
    entries.push_back(
        {{"i", i}, {"exact", d.at(i).str()}, {"decimal", d.at(i).decimal17()}});
  block["s"] = entries;
  block["sum_check"] = d.sum().str();
  return block;
}

json float_block(const busyq::FloatDistribution& d) {
  json block;
  block["method"] = busyq::method_name(d.method);
  json entries = json::array();
  double sum = 0.0;
  for (size_t i = 0; i < d.s.size(); ++i) {
    sum += d.s[i];
    entries.push_back({{"i", i + 1}, {"decimal", double17(d.s[i])}});
  }
  block["s"] = entries;
  block["sum_check"] = double17(sum);
  return block;
}

int cmd_dist(const Model& m, const std::string& method_sel, const std::string& mode,
             const std::string& format, std::ostream& out, int workers, int cap) {
  const bool all = method_sel == "all";
  std::vector<Method> methods =
      all ? methods_for_all(m, cap) : std::vector<Method>{parse_method(method_sel)};

  if (mode == "float") {
    std::vector<busyq::FloatDistribution> results;
    for (Method method : methods) results.push_back(busyq::busy_dist_f64(m, method, workers));
    if (format == "csv") {
      out << (all ? "method,i,decimal\n" : "i,decimal\n");
      for (const auto& d : results)
        for (size_t i = 0; i < d.s.size(); ++i) {
          if (all) out << busyq::method_name(d.method) << ",";
          out << (i + 1) << "," << double17(d.s[i]) << "\n";
        }
      return 0;
    }
    json doc;
    doc["n"] = m.n();
    doc["mode"] = "float";
    doc["model_digest"] = m.digest();
    if (all) {
      json blocks = json::array();
      for (const auto& d : results) blocks.push_back(float_block(d));
      doc["methods"] = blocks;
    } else {
      doc.update(float_block(results.front()));
    }
    out << doc.dump(2) << "\n";
    return 0;
  }

  std::vector<BusyPeriodDistribution> results;
  for (Method method : methods) results.push_back(run_exact(m, method, workers, cap));
  if (format == "csv") {
    out << (all ? "method,i,exact,decimal\n" : "i,exact,decimal\n");
    for (const auto& d : results)
      for (int i = 1; i <= d.order(); ++i) {
        if (all) out << busyq::method_name(d.method) << ",";
        out << i << "," << csv_field(d.at(i).str()) << "," << d.at(i).decimal17() << "\n";
      }
    return 0;
  }
  json doc;
  doc["n"] = m.n();
  doc["mode"] = "exact";
  doc["model_digest"] = m.digest();
  if (all) {
    json blocks = json::array();
    for (const auto& d : results) blocks.push_back(exact_block(d));
    doc["methods"] = blocks;
  } else {
    doc.update(exact_block(results.front()));
  }
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_validate(const Model& m, std::ostream& out, int workers, int cap,
                 const std::string& corrupt) {
  std::vector<BusyPeriodDistribution> results;
  results.push_back(busyq::busy_dist_recursion(m));
  results.push_back(busyq::busy_dist_matrix(m));
  results.push_back(busyq::busy_dist_explicit(m, workers));
  if (m.n() <= cap) results.push_back(busyq::busy_dist_bruteforce(m, cap));
  if (m.source() == busyq::RateSource::Proportional)
    results.push_back(busyq::busy_dist_recursion_binomial(m));

  if (!corrupt.empty()) {
    Method victim = parse_method(corrupt);
    for (auto& d : results)
      if (d.method == victim) d.s[0] += Rational(1, 1000000);
  }

  out << "entry";
  for (const auto& d : results) out << "\t" << busyq::method_name(d.method);
  out << "\n";
  for (int i = 1; i <= m.n(); ++i) {
    out << i;
    for (const auto& d : results) out << "\t" << d.at(i).str();
    out << "\n";
  }

  const auto& reference = results.front();
  for (const auto& d : results) {
    for (int i = 1; i <= m.n(); ++i) {
      if (d.at(i) != reference.at(i)) {
        out << "MISMATCH at entry " << i << ": " << busyq::method_name(d.method) << " = "
            << d.at(i).str() << " vs " << busyq::method_name(reference.method) << " = "
            << reference.at(i).str() << "\n";
        return 1;
      }
    }
  }
  if (reference.sum() != Rational(1)) {
    out << "MISMATCH: total mass = " << reference.sum().str() << " != 1\n";
    return 1;
  }
  out << "OK: " << results.size() << " methods agree entrywise and sum to 1\n";
  return 0;
}

int cmd_paths(int order, bool feasible_only, const std::optional<Model>& m,
              const std::string& format, std::ostream& out) {
  const bool csv = format == "csv";
  json rows = json::array();
  long count = 0;
  if (csv) out << "u,feasible,weight,first_return\n";
  auto visit = [&](const busyq::DyckPath& u) {
    const bool feasible = busyq::is_feasible(u);
    if (feasible_only && !feasible) return;
    ++count;
    std::string weight;
    if (m) weight = busyq::path_weight(*m, u).str();
    if (csv) {
      std::string joined;
      for (int j = 0; j < u.order(); ++j)
        joined += (j ? "," : "") + std::to_string(u.jumps[j]);
      out << csv_field(joined) << "," << (feasible ? 1 : 0) << "," << weight << ","
          << busyq::first_return(u) << "\n";
    } else {
      json row;
      row["u"] = u.jumps;
      row["feasible"] = feasible;
      if (m) row["weight"] = weight;
      row["first_return"] = busyq::first_return(u);
      rows.push_back(row);
    }
  };
  if (feasible_only) {
    busyq::enumerate_feasible(order, visit);
  } else {
    busyq::enumerate_dyck(order, visit);
  }
  if (!csv) {
    json doc;
    doc["order"] = order;
    doc["count"] = count;
    doc["paths"] = rows;
    out << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_inverse(const Model& m, const std::string& format, std::ostream& out) {
  auto A = busyq::matrix_A(m);
  auto inv = busyq::invert_lower_triangular(A);
  if (format == "csv") {
    out << "matrix,i,j,value\n";
    for (int i = 1; i <= m.n(); ++i)
      for (int j = 1; j <= i; ++j)
        out << "A," << i << "," << j << "," << csv_field(A.at(i, j).str()) << "\n";
    for (int i = 1; i <= m.n(); ++i)
      for (int j = 1; j <= i; ++j)
        out << "Ainv," << i << "," << j << "," << csv_field(inv.at(i, j).str()) << "\n";
    return 0;
  }
  auto dump_rows = [&](const busyq::TriangularMatrix& t) {
    json rows = json::array();
    for (int i = 1; i <= t.dim(); ++i) {
      json row = json::array();
      for (int j = 1; j <= i; ++j) row.push_back(t.at(i, j).str());
      rows.push_back(row);
    }
    return rows;
  };
  json doc;
  doc["n"] = m.n();
  doc["model_digest"] = m.digest();
  doc["A"] = dump_rows(A);
  doc["A_inv"] = dump_rows(inv);
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const Model& m, std::uint64_t reps, std::uint64_t seed, bool joint,
                 const std::string& format, std::ostream& out, int workers) {
  busyq::SimulationReport rep = joint ? busyq::estimate_joint_busy(m, reps, seed, workers)
                                      : busyq::estimate_busy_dist(m, reps, seed, workers);
  if (format == "csv") {
    out << "kind,key,count,freq,stderr\n";
    for (int i = 1; i <= rep.n; ++i)
      out << "first," << i << "," << rep.counts[i - 1] << "," << double17(rep.freq[i - 1])
          << "," << double17(rep.std_error[i - 1]) << "\n";
    for (const auto& e : rep.joint_entries) {
      std::string key;
      for (size_t t = 0; t < e.composition.size(); ++t)
        key += (t ? "+" : "") + std::to_string(e.composition[t]);
      out << "joint," << key << "," << e.count << "," << double17(e.freq) << ","
          << double17(e.std_error) << "\n";
    }
    return 0;
  }
  json doc;
  doc["n"] = rep.n;
  doc["algorithm"] = rep.algorithm;
  doc["seed"] = rep.seed;
  doc["replications"] = rep.replications;
  doc["model_digest"] = rep.model_digest;
  json f = json::array();
  for (int i = 1; i <= rep.n; ++i)
    f.push_back({{"i", i},
                 {"count", rep.counts[i - 1]},
                 {"freq", rep.freq[i - 1]},
                 {"stderr", rep.std_error[i - 1]}});
  doc["f"] = f;
  if (rep.joint) {
    json jrows = json::array();
    for (const auto& e : rep.joint_entries)
      jrows.push_back({{"composition", e.composition},
                       {"count", e.count},
                       {"freq", e.freq},
                       {"stderr", e.std_error}});
    doc["joint"] = jrows;
  }
  out << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact busy-period distributions for the finite-pool M/M/1 queue"};
  app.require_subcommand(1);

  std::string format = "json", out_path, mode = "exact", method = "recursion", corrupt;
  int workers = default_workers();
  int cap = 16;
  int order = 1;
  bool feasible_only = false, joint = false;
  std::uint64_t reps = 100000, seed = 0;

  ModelFlags mf;

  auto* dist = app.add_subcommand("dist", "busy-period distribution by one or all methods");
  add_model_flags(dist, mf);
  dist->add_option("--method", method, "recursion|binomial|matrix|explicit|oracle|all");
  dist->add_option("--mode", mode, "exact|float")->check(CLI::IsMember({"exact", "float"}));
  dist->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  dist->add_option("--out", out_path, "output file (default stdout)");
  dist->add_option("--workers", workers, "worker threads (0 = auto)");
  dist->add_option("--cap", cap, "oracle DP size cap");

  auto* validate = app.add_subcommand("validate", "cross-check all routes entrywise");
  add_model_flags(validate, mf);
  validate->add_option("--workers", workers, "worker threads (0 = auto)");
  validate->add_option("--cap", cap, "oracle DP size cap");
  validate->add_option("--out", out_path, "output file (default stdout)");
  validate->add_option("--corrupt", corrupt, "test hook: perturb one method")->group("");

  auto* paths = app.add_subcommand("paths", "enumerate Dyck paths / feasible allocations");
  add_model_flags(paths, mf);
  paths->add_option("--order", order, "path order n")->required()->check(CLI::Range(1, 24));
  paths->add_flag("--feasible-only", feasible_only, "only the 2^(n-1) feasible allocations");
  paths->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  paths->add_option("--out", out_path, "output file (default stdout)");

  auto* inverse = app.add_subcommand("inverse", "print A and A^-1");
  add_model_flags(inverse, mf);
  inverse->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  inverse->add_option("--out", out_path, "output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo estimates");
  add_model_flags(simulate, mf);
  simulate->add_option("--reps", reps, "number of replications");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_flag("--joint", joint, "estimate the joint busy-period law");
  simulate->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--out", out_path, "output file (default stdout)");
  simulate->add_option("--workers", workers, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    Output output(out_path);
    std::ostream& out = output.stream();
    if (app.got_subcommand(paths)) {
      std::optional<Model> m;
      if (!mf.config.empty() || !mf.lambda_seq.empty() || mf.n != 0 || !mf.lambda.empty())
        m = build_model(mf);
      if (m && m->n() != order)
        throw Error(ErrorKind::OrderMismatch, "model N must equal --order for weights");
      return cmd_paths(order, feasible_only, m, format, out);
    }
    Model m = build_model(mf);
    if (app.got_subcommand(dist)) return cmd_dist(m, method, mode, format, out, workers, cap);
    if (app.got_subcommand(validate)) return cmd_validate(m, out, workers, cap, corrupt);
    if (app.got_subcommand(inverse)) return cmd_inverse(m, format, out);
    if (app.got_subcommand(simulate))
      return cmd_simulate(m, reps, seed, joint, format, out, workers);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::CapExceeded ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
