// SPDX-License-Identifier: Apache-2.0
#include "appsched/scheduler.hpp"

#include <stdexcept>

namespace appsched {

ScheduleState ScheduleState::make(Index num_ues, Index num_rbs) {
  ScheduleState s;
  s.phi = Matrix::Zero(num_ues, num_rbs);
  s.rates = Vector::Zero(num_ues);
  s.frame = 1;
  return s;
}

double total_throughput(const Vector& phi_row, const Vector& h_row) {
  if (phi_row.size() != h_row.size())
    throw std::invalid_argument("total_throughput: phi and H rows differ in length");
  return phi_row.dot(h_row);
}

namespace {

// Shared argmax with lowest-index tie-breaking over weight_i * H_i.
Index argmax_weighted(const Vector& weight, const Vector& h_col) {
  Index best = 0;
  double best_metric = weight[0] * h_col[0];
  for (Index i = 1; i < weight.size(); ++i) {
    const double m = weight[i] * h_col[i];
    if (m > best_metric) {
      best_metric = m;
      best = i;
    }
  }
  return best;
}

}  // namespace

Index select_ue_app_aware(const Vector& rates, const Vector& h_col,
                          std::span<const UtilityFunction> utilities,
                          double rate_floor) {
  Vector ratio(rates.size());
  for (Index i = 0; i < rates.size(); ++i)
    ratio[i] = marginal_ratio(utilities[static_cast<std::size_t>(i)], rates[i],
                              rate_floor);
  return argmax_weighted(ratio, h_col);
}

Index select_ue_weighted_pf(const Vector& weights, const Vector& h_col,
                            const Vector& rates, double rate_floor) {
  Vector metric(rates.size());
  for (Index i = 0; i < rates.size(); ++i)
    metric[i] = weights[i] / std::max(rates[i], rate_floor);
  return argmax_weighted(metric, h_col);
}

void update_phi(ScheduleState& state, Index rb, Index scheduled_ue) {
  const double k = static_cast<double>(state.frame);
  const double keep = (k - 1.0) / k;
  state.phi.col(rb) *= keep;
  state.phi(scheduled_ue, rb) += 1.0 / k;
}

Matrix throughput_matrix(const ChannelRealization& channel,
                         const PowerAllocation& powers,
                         const SchedulerContext& ctx) {
  const Index num_ues = channel.noise.rows();
  const Index num_rbs = channel.noise.cols();
  const Index num_enbs = static_cast<Index>(channel.gain.size());
  Matrix h(num_ues, num_rbs);
  for (Index i = 0; i < num_ues; ++i) {
    const Index b = ctx.ue_cell[static_cast<std::size_t>(i)];
    for (Index z = 0; z < num_rbs; ++z) {
      double interference = 0.0;
      for (Index l = 0; l < num_enbs; ++l)
        if (l != b) interference += channel.gain[l](i, z) * powers.p(l, z);
      h(i, z) = rb_throughput(ctx.rb_bandwidth, channel.gain[b](i, z),
                              powers.p(b, z), channel.noise(i, z), interference);
    }
  }
  return h;
}

FrameResult schedule_frame(ScheduleState& state,
                           const ChannelRealization& channel,
                           const PowerAllocation& powers,
                           const SchedulerContext& ctx) {
  const Index num_ues = state.phi.rows();
  const Index num_rbs = state.phi.cols();
  const Index num_enbs = static_cast<Index>(channel.gain.size());

  FrameResult out;
  out.h = throughput_matrix(channel, powers, ctx);

  // Rates are frozen for the whole frame: the selection metric reads the
  // proportions of the previous frame against this frame's throughputs.
  Vector rates = (state.phi.array() * out.h.array()).rowwise().sum();

  // Per-frame selection weights; the per-RB metric is weight_i * H(i, z).
  Vector weight(num_ues);
  for (Index i = 0; i < num_ues; ++i) {
    const auto& u = ctx.utilities[static_cast<std::size_t>(i)];
    weight[i] = ctx.policy == Policy::AppAware
                    ? marginal_ratio(u, rates[i], ctx.rate_floor)
                    : ctx.weights[i] / std::max(rates[i], ctx.rate_floor);
  }

  const double k = static_cast<double>(state.frame);
  const double keep = (k - 1.0) / k;
  out.winner.assign(static_cast<std::size_t>(num_enbs * num_rbs), -1);
  state.phi *= keep;
  for (Index z = 0; z < num_rbs; ++z) {
    for (Index b = 0; b < num_enbs; ++b) {
      Index best = -1;
      double best_metric = 0.0;
      for (Index i = 0; i < num_ues; ++i) {
        if (ctx.ue_cell[static_cast<std::size_t>(i)] != b) continue;
        const double m = weight[i] * out.h(i, z);
        if (best < 0 || m > best_metric) {
          best_metric = m;
          best = i;
        }
      }
      if (best >= 0) {
        state.phi(best, z) += 1.0 / k;
        out.winner[static_cast<std::size_t>(b * num_rbs + z)] = best;
      }
    }
  }

  state.rates = (state.phi.array() * out.h.array()).rowwise().sum();
  state.frame += 1;
  return out;
}

}  // namespace appsched
