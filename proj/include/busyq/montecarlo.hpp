#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "busyq/model.hpp"
#include "busyq/paths.hpp"

namespace busyq {

/// Empirical busy-period estimates from seeded simulation of the embedded
/// chain. Streams are split per replication index, so reports are identical
/// for any worker count.
struct SimulationReport {
  std::string algorithm;  // RNG identifier ("splitmix64")
  std::uint64_t seed = 0;
  std::uint64_t replications = 0;
  std::string model_digest;
  int n = 0;

  // First busy period: counts[i-1] replications had first return at i.
  std::vector<std::uint64_t> counts;
  std::vector<double> freq;
  std::vector<double> std_error;  // sqrt(f(1-f)/R)

  // Joint busy-period sizes, present when requested: one entry per observed
  // composition of N, ordered lexicographically.
  bool joint = false;
  struct JointEntry {
    std::vector<int> composition;
    std::uint64_t count = 0;
    double freq = 0.0;
    double std_error = 0.0;
  };
  std::vector<JointEntry> joint_entries;
};

/// One trajectory from (0,0) to (N,N) as a Dyck path. Diagonal states step
/// up without consuming randomness; every above-diagonal step draws one
/// uniform variate and compares against rho_j rendered to float64.
DyckPath simulate_chain(const Model& model, std::uint64_t seed, std::uint64_t replication);

SimulationReport estimate_busy_dist(const Model& model, std::uint64_t replications,
                                    std::uint64_t seed, int workers = 0);

SimulationReport estimate_joint_busy(const Model& model, std::uint64_t replications,
                                     std::uint64_t seed, int workers = 0);

}  // namespace busyq
