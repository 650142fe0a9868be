// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "appsched/power.hpp"
#include "appsched/scenario.hpp"
#include "appsched/scheduler.hpp"

namespace appsched {

// Outcome of one policy over all Monte Carlo replicas. The trajectory is the
// pointwise mean of the per-replica end-of-frame rates; phi and the power
// allocation are the first replica's, kept for inspection and tests.
struct RunResult {
  std::string policy_name;
  Matrix trajectory;        // (frame, ue), averaged over replicas
  Matrix final_phi;         // replica 0
  Vector min_rb_assignments;  // per UE, minimum over replicas of RBs won
  bool has_power = false;
  PowerAllocation final_power;        // replica 0, when power control ran
  std::vector<double> power_objective;  // replica 0's ascent trace
  std::uint64_t seed = 0;
  std::string config_digest;
};

// Everything one replica produced; exposed for tests and for run()'s
// aggregation.
struct ReplicaOutput {
  Matrix trajectory;      // (frame, ue)
  Matrix final_phi;
  Vector rb_assignments;  // per UE over the whole run
  bool has_power = false;
  PowerAllocation power;
  std::vector<double> power_objective;
};

ReplicaOutput simulate_replica(const ScenarioConfig& config, Policy policy,
                               Index replica);

// Runs monte_carlo_iters independent replicas (parallelized, deterministic:
// replica RNG substreams only depend on the config seed and replica index)
// and averages the trajectories pointwise.
RunResult run(const ScenarioConfig& config, Policy policy);

struct CompareResult {
  RunResult app_aware;
  RunResult weighted_pf;
};

// Both policies over identical channel realizations (same replica seeds).
CompareResult compare(const ScenarioConfig& config);

// CSV with header frame,ue,policy,throughput,utility; one row per
// (frame, ue) per result, 12 significant digits, LF line endings. The `ue`
// column is 1-based.
void write_csv(std::span<const RunResult> results,
               std::span<const UtilityFunction> utilities, std::ostream& os);
void write_csv(std::span<const RunResult> results,
               std::span<const UtilityFunction> utilities,
               const std::string& path);

// Self-contained SVG line chart of the throughput trajectories; the second
// result, when present, is drawn dashed.
void write_svg(std::span<const RunResult> results, const std::string& path);

}  // namespace appsched
