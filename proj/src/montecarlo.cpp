#include "busyq/montecarlo.hpp"

#include <cmath>
#include <map>
#include <span>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "busyq/error.hpp"

namespace busyq {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// splitmix64, one independent stream per replication index.
struct SplitMix {
  std::uint64_t state;

  static SplitMix stream(std::uint64_t seed, std::uint64_t replication) {
    return SplitMix{mix64(seed + kGolden) ^ mix64((replication + 1) * kGolden)};
  }

  std::uint64_t next() {
    state += kGolden;
    return mix64(state);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

void simulate_into(std::span<const double> rho_f64, std::uint64_t seed,
                   std::uint64_t replication, std::vector<int>& u) {
  const int N = static_cast<int>(rho_f64.size());
  SplitMix gen = SplitMix::stream(seed, replication);
  u.assign(N, 0);
  int services = 0, arrivals = 0;
  while (services < N) {
    if (services == arrivals) {
      ++arrivals;  // diagonal: forced arrival, no draw
      continue;
    }
    if (gen.uniform01() < rho_f64[arrivals - 1]) {
      ++services;
      ++u[arrivals - 1];
    } else {
      ++arrivals;
    }
  }
}

std::vector<double> rho_table(const Model& m) {
  std::vector<double> rho(m.n());
  for (int j = 1; j <= m.n(); ++j) rho[j - 1] = m.rho_f64(j);
  return rho;
}

SimulationReport base_report(const Model& m, std::uint64_t reps, std::uint64_t seed) {
  if (reps < 1) throw Error(ErrorKind::NonPositiveParameter, "replications must be >= 1");
  SimulationReport rep;
  rep.algorithm = "splitmix64";
  rep.seed = seed;
  rep.replications = reps;
  rep.model_digest = m.digest();
  rep.n = m.n();
  rep.counts.assign(m.n(), 0);
  return rep;
}

void fill_first_period_stats(SimulationReport& rep) {
  const double R = static_cast<double>(rep.replications);
  rep.freq.resize(rep.counts.size());
  rep.std_error.resize(rep.counts.size());
  for (size_t i = 0; i < rep.counts.size(); ++i) {
    const double f = static_cast<double>(rep.counts[i]) / R;
    rep.freq[i] = f;
    rep.std_error[i] = std::sqrt(f * (1.0 - f) / R);
  }
}

int thread_count(int workers) {
#ifdef _OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
  return 1;
#endif
}

}  // namespace

DyckPath simulate_chain(const Model& model, std::uint64_t seed, std::uint64_t replication) {
  DyckPath path;
  simulate_into(rho_table(model), seed, replication, path.jumps);
  return path;
}

SimulationReport estimate_busy_dist(const Model& model, std::uint64_t replications,
                                    std::uint64_t seed, int workers) {
  SimulationReport rep = base_report(model, replications, seed);
  const auto rho = rho_table(model);
  const int N = model.n();
  const long long total = static_cast<long long>(replications);
  const int nw = thread_count(workers);

#ifdef _OPENMP
#pragma omp parallel num_threads(nw)
#endif
  {
    std::vector<std::uint64_t> local(N, 0);
    std::vector<int> u;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long r = 0; r < total; ++r) {
      simulate_into(rho, seed, static_cast<std::uint64_t>(r), u);
      ++local[first_return(u) - 1];
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    for (int i = 0; i < N; ++i) rep.counts[i] += local[i];
  }
  (void)nw;
  fill_first_period_stats(rep);
  return rep;
}

SimulationReport estimate_joint_busy(const Model& model, std::uint64_t replications,
                                     std::uint64_t seed, int workers) {
  SimulationReport rep = base_report(model, replications, seed);
  rep.joint = true;
  const auto rho = rho_table(model);
  const int N = model.n();
  const long long total = static_cast<long long>(replications);
  const int nw = thread_count(workers);

  std::map<std::vector<int>, std::uint64_t> joint;
#ifdef _OPENMP
#pragma omp parallel num_threads(nw)
#endif
  {
    std::vector<std::uint64_t> local(N, 0);
    std::map<std::vector<int>, std::uint64_t> local_joint;
    std::vector<int> u, parts;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long r = 0; r < total; ++r) {
      simulate_into(rho, seed, static_cast<std::uint64_t>(r), u);
      parts.clear();
      int sum = 0, last = 0;
      for (int j = 1; j <= N; ++j) {
        sum += u[j - 1];
        if (sum == j) {
          parts.push_back(j - last);
          last = j;
        }
      }
      ++local[parts.front() - 1];
      ++local_joint[parts];
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      for (int i = 0; i < N; ++i) rep.counts[i] += local[i];
      for (auto& [k, v] : local_joint) joint[k] += v;
    }
  }
  (void)nw;
  fill_first_period_stats(rep);

  const double R = static_cast<double>(replications);
  rep.joint_entries.reserve(joint.size());
  for (auto& [composition, count] : joint) {
    const double f = static_cast<double>(count) / R;
    rep.joint_entries.push_back(
        {composition, count, f, std::sqrt(f * (1.0 - f) / R)});
  }
  return rep;
}

}  // namespace busyq
