// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "appsched/rng.hpp"
#include "appsched/scheduler.hpp"
#include "appsched/types.hpp"
#include "appsched/utility.hpp"

namespace appsched {

// Full description of one simulation: topology, traffic mix, physical
// constants, run lengths and every solver knob. Immutable once loaded.
struct ScenarioConfig {
  double area_m = 500.0;                    // square side
  std::vector<std::array<double, 2>> enb_positions_m = {{250.0, 250.0}};
  Index num_ues = 1;
  std::vector<UtilityFunction> ue_utilities;
  std::vector<Index> ue_cells;              // empty -> nearest eNodeB
  RbGrid rb_grid;
  double noise_w = 3.5e-15;                 // thermal noise per UE per RB
  double rb_bandwidth = 0.015;              // rate units per log2(1+SINR)
  double power_budget_w = 40.0;             // per eNodeB per slot
  std::uint64_t seed = 7;
  Index monte_carlo_iters = 1;
  Index frames = 2000;
  Policy policy = Policy::AppAware;
  Vector weights;                           // weighted-PF; empty -> unity
  bool unity_gain = false;
  double unity_snr_db = 60.0;               // reference SNR in unity-gain mode
  bool power_control = false;
  double alpha = 0.0;                       // <= 0 -> scale-free default
  double tol = 1e-8;
  Index max_iters = 10000;
  double r_floor = 1e-3;
  double shadowing_sigma_db = 8.0;
  double doppler_hz = 5.0;
  double frame_duration_s = 1e-3;
  bool fixed_topology = false;              // reuse UE positions across replicas
  GainAggregation gain_aggregation = GainAggregation::Mean;

  bool operator==(const ScenarioConfig& other) const;
};

// Throws std::invalid_argument naming the first violated field.
void validate(const ScenarioConfig& config);

// The built-in six-user single-cell benchmark scenario, addressable from the
// CLI as preset "paper-sec6": three sigmoidal users (a,b) = (5,10), (3,20),
// (1,30) and three logarithmic users k = 15, 3, 0.5 with r_max = 100, a
// 100x2 resource grid, 500 m area, 3.5e-15 W noise and 200 Monte Carlo
// iterations of 2000 frames.
ScenarioConfig paper_preset();

// Parse a JSON config document. Unknown keys are rejected; all invariants
// are enforced. Errors carry the offending field name.
ScenarioConfig load_config(const std::string& text);

// Canonical serialization; load_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

// FNV-1a of the canonical serialization, as fixed-width hex.
std::string config_hash(const ScenarioConfig& config);

// n i.i.d. uniform positions in the area square, one per row.
Matrix place_ues(Rng& rng, double area_m, Index n);

// Serving cell per UE: the configured assignment, or nearest eNodeB.
std::vector<Index> resolve_ue_cells(const ScenarioConfig& config,
                                    const Matrix& ue_positions_m);

}  // namespace appsched
