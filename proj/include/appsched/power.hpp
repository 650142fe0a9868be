// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "appsched/channel.hpp"
#include "appsched/types.hpp"
#include "appsched/utility.hpp"

namespace appsched {

enum class GainAggregation { Mean, Median };

// Per-eNodeB, per-RB downlink transmit power. Feasibility means p >= 0
// everywhere and, for every eNodeB and time slot, the powers of that slot's
// frequency chunks sum to at most budget_w.
struct PowerAllocation {
  Matrix p;  // (enb, rb), watts
  RbGrid grid;
  double budget_w = 1.0;
};

// Budget split equally over the frequency chunks of every slot.
PowerAllocation uniform_power(Index num_enbs, const RbGrid& grid,
                              double budget_w);

bool power_feasible(const PowerAllocation& power, double tol = 1e-12);

// The power controller's reduced view of the channel: one representative
// gain per (serving cell, interfering cell, RB) obtained by aggregating the
// per-UE gains of the serving cell's attached population, plus one
// representative noise per (cell, RB).
struct AggregatedGains {
  std::vector<Matrix> g;  // [cell b] -> (cell l, rb): gain from l towards b's UEs
  Matrix noise;           // (cell, rb), watts
};

AggregatedGains aggregate_gains(const ChannelRealization& channel,
                                std::span<const Index> ue_cell, Index num_enbs,
                                GainAggregation how = GainAggregation::Mean);

// SINR of cell b's representative user on one RB:
//   g[b][b]*p[b] / (noise[b] + sum_{l != b} g[b][l]*p[l]).
double cell_sinr(const PowerAllocation& power, const AggregatedGains& gains,
                 Index cell, Index rb);

// Per-UE rates implied by a power vector and the solved schedule:
//   r_i = sum_z phi*(i,z) * B * log2(1 + SINR_{cell(i),z}).
Vector power_rates(const PowerAllocation& power, const Matrix& phi_star,
                   const AggregatedGains& gains,
                   std::span<const Index> ue_cell, double rb_bandwidth);

// Global objective Y(P) = sum_i log U_i(r_i(P)). Returns -infinity when any
// rate is zero (log U undefined), which callers treat as "infeasible point".
double objective_y(const PowerAllocation& power, const Matrix& phi_star,
                   const AggregatedGains& gains,
                   std::span<const UtilityFunction> utilities,
                   std::span<const Index> ue_cell, double rb_bandwidth);

// Analytic dY/dP for every (cell, rb): the own-cell rate improvement term
// plus the interference penalty on every other cell.
Matrix gradient_y(const PowerAllocation& power, const Matrix& phi_star,
                  const AggregatedGains& gains,
                  std::span<const UtilityFunction> utilities,
                  std::span<const Index> ue_cell, double rb_bandwidth);

// Single entry of gradient_y, matching the per-coordinate derivative.
double gradient_y_entry(const PowerAllocation& power, const Matrix& phi_star,
                        const AggregatedGains& gains,
                        std::span<const UtilityFunction> utilities,
                        std::span<const Index> ue_cell, double rb_bandwidth,
                        Index cell, Index rb);

// Projected ascent step for one eNodeB's slot: clamp p + alpha*grad at zero
// per chunk; if the clamped candidate exceeds the budget, rescale it onto
// the budget with equality.
Vector power_update(const Vector& p_slot, const Vector& grad_slot,
                    double alpha, double budget_w);

struct PowerTrace {
  PowerAllocation power;
  std::vector<double> objective;  // Y after each sweep, objective[0] = Y(P0)
  bool converged = false;
};

// Synchronous projected-gradient sweeps: every sweep evaluates the gradient
// at the pre-sweep allocation, then updates every (eNodeB, slot) block. Stops
// when |dY| < tol or after max_iters sweeps. alpha <= 0 selects the scale-free
// default 1e-3 * budget / max|gradient(P0)|. Throws std::invalid_argument if
// Y(P0) is not finite.
PowerTrace iterate_power(const PowerAllocation& p0, const Matrix& phi_star,
                         const AggregatedGains& gains,
                         std::span<const UtilityFunction> utilities,
                         std::span<const Index> ue_cell, double rb_bandwidth,
                         double alpha, int max_iters, double tol);

}  // namespace appsched
