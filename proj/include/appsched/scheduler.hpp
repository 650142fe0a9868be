// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "appsched/channel.hpp"
#include "appsched/power.hpp"
#include "appsched/types.hpp"
#include "appsched/utility.hpp"

namespace appsched {

enum class Policy { AppAware, WeightedPf };

// Online scheduling state. phi(ue, rb) is the proportion of the frames in
// which the RB was assigned to the UE; after every completed frame each RB's
// phi column sums to 1 over the UEs of its serving cell. rates holds the
// per-UE throughput, i.e. the row sums of phi .* H against the most recent
// frame's throughput matrix.
struct ScheduleState {
  Matrix phi;    // (ue, rb)
  Vector rates;  // rate units
  Index frame = 1;

  static ScheduleState make(Index num_ues, Index num_rbs);
};

// Inputs that stay fixed across frames.
struct SchedulerContext {
  Policy policy = Policy::AppAware;
  std::vector<UtilityFunction> utilities;  // one per UE
  Vector weights;                          // weighted-PF priority weights
  std::vector<Index> ue_cell;              // serving eNodeB per UE
  double rb_bandwidth = 1.0;               // rate units per log2(1+SINR)
  double rate_floor = 1e-3;
};

// Dot product of a phi row with a throughput row (one UE's total rate).
// Throws std::invalid_argument if the lengths differ.
double total_throughput(const Vector& phi_row, const Vector& h_row);

// Argmax_i of marginal_ratio(u_i, r_i) * H_i; ties go to the lowest index.
Index select_ue_app_aware(const Vector& rates, const Vector& h_col,
                          std::span<const UtilityFunction> utilities,
                          double rate_floor);

// Argmax_i of w_i * H_i / max(r_i, floor); ties go to the lowest index.
Index select_ue_weighted_pf(const Vector& weights, const Vector& h_col,
                            const Vector& rates, double rate_floor);

// Online recurrence for one RB column at frame k:
//   scheduled:  phi <- (k-1)/k * phi + 1/k
//   others:     phi <- (k-1)/k * phi
// At k=1 this resets the column to the fresh assignment.
void update_phi(ScheduleState& state, Index rb, Index scheduled_ue);

// Per-UE-per-RB Shannon throughputs for one frame, including inter-cell
// interference.
Matrix throughput_matrix(const ChannelRealization& channel,
                         const PowerAllocation& powers,
                         const SchedulerContext& ctx);

struct FrameResult {
  // assignment(ue, rb) counts this frame's allocations (0/1 single cell).
  std::vector<Index> winner;  // per (cell*rbs + rb): winning UE index
  Matrix h;                   // the frame's throughput matrix
};

// One frame of the online algorithm: compute H, freeze the per-UE rates from
// the current phi and this frame's H, assign every RB in ascending index
// order under the active policy, apply the phi recurrence, then refresh the
// rates and advance the frame counter.
FrameResult schedule_frame(ScheduleState& state,
                           const ChannelRealization& channel,
                           const PowerAllocation& powers,
                           const SchedulerContext& ctx);

}  // namespace appsched
