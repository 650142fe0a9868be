// SPDX-License-Identifier: Apache-2.0
#include "appsched/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace appsched {

namespace {
constexpr double kInvLn2 = 1.4426950408889634;
}

PowerAllocation uniform_power(Index num_enbs, const RbGrid& grid,
                              double budget_w) {
  if (!(budget_w > 0.0))
    throw std::invalid_argument("uniform_power: budget must be > 0");
  PowerAllocation out;
  out.grid = grid;
  out.budget_w = budget_w;
  out.p = Matrix::Constant(num_enbs, grid.size(),
                           budget_w / static_cast<double>(grid.num_freq));
  return out;
}

bool power_feasible(const PowerAllocation& power, double tol) {
  if ((power.p.array() < 0.0).any()) return false;
  for (Index b = 0; b < power.p.rows(); ++b)
    for (Index q = 0; q < power.grid.num_slots; ++q) {
      const double slot_sum =
          power.p.row(b).segment(q * power.grid.num_freq, power.grid.num_freq).sum();
      if (slot_sum > power.budget_w + tol) return false;
    }
  return true;
}

AggregatedGains aggregate_gains(const ChannelRealization& channel,
                                std::span<const Index> ue_cell, Index num_enbs,
                                GainAggregation how) {
  if (static_cast<Index>(channel.gain.size()) < num_enbs)
    throw std::invalid_argument("aggregate_gains: realization covers fewer cells");
  const Index num_rbs = channel.noise.cols();
  AggregatedGains out;
  out.g.assign(num_enbs, Matrix::Zero(num_enbs, num_rbs));
  out.noise = Matrix::Zero(num_enbs, num_rbs);

  for (Index b = 0; b < num_enbs; ++b) {
    std::vector<Index> members;
    for (Index i = 0; i < static_cast<Index>(ue_cell.size()); ++i)
      if (ue_cell[static_cast<std::size_t>(i)] == b) members.push_back(i);
    if (members.empty())
      throw std::invalid_argument("aggregate_gains: cell has no attached UEs");

    std::vector<double> vals(members.size());
    for (Index z = 0; z < num_rbs; ++z) {
      for (Index l = 0; l < num_enbs; ++l) {
        for (std::size_t m = 0; m < members.size(); ++m)
          vals[m] = channel.gain[l](members[m], z);
        if (how == GainAggregation::Mean) {
          double acc = 0.0;
          for (double v : vals) acc += v;
          out.g[b](l, z) = acc / static_cast<double>(vals.size());
        } else {
          std::vector<double> tmp = vals;
          const std::size_t mid = tmp.size() / 2;
          std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
          double med = tmp[mid];
          if (tmp.size() % 2 == 0) {
            const double lo = *std::max_element(tmp.begin(), tmp.begin() + mid);
            med = 0.5 * (med + lo);
          }
          out.g[b](l, z) = med;
        }
      }
      for (std::size_t m = 0; m < members.size(); ++m)
        vals[m] = channel.noise(members[m], z);
      double acc = 0.0;
      for (double v : vals) acc += v;
      out.noise(b, z) = acc / static_cast<double>(vals.size());
    }
  }
  return out;
}

double cell_sinr(const PowerAllocation& power, const AggregatedGains& gains,
                 Index cell, Index rb) {
  double interference = 0.0;
  for (Index l = 0; l < power.p.rows(); ++l)
    if (l != cell) interference += gains.g[cell](l, rb) * power.p(l, rb);
  return gains.g[cell](cell, rb) * power.p(cell, rb) /
         (gains.noise(cell, rb) + interference);
}

Vector power_rates(const PowerAllocation& power, const Matrix& phi_star,
                   const AggregatedGains& gains,
                   std::span<const Index> ue_cell, double rb_bandwidth) {
  const Index num_ues = phi_star.rows();
  const Index num_rbs = phi_star.cols();
  const Index num_enbs = power.p.rows();

  // log2(1 + SINR_{b,z}) for every cell and RB, shared by the cell's UEs.
  Matrix log_rate(num_enbs, num_rbs);
  for (Index b = 0; b < num_enbs; ++b)
    for (Index z = 0; z < num_rbs; ++z)
      log_rate(b, z) = std::log1p(cell_sinr(power, gains, b, z)) * kInvLn2;

  Vector rates(num_ues);
  for (Index i = 0; i < num_ues; ++i) {
    const Index b = ue_cell[static_cast<std::size_t>(i)];
    rates[i] = rb_bandwidth * phi_star.row(i).dot(log_rate.row(b));
  }
  return rates;
}

double objective_y(const PowerAllocation& power, const Matrix& phi_star,
                   const AggregatedGains& gains,
                   std::span<const UtilityFunction> utilities,
                   std::span<const Index> ue_cell, double rb_bandwidth) {
  const Vector rates = power_rates(power, phi_star, gains, ue_cell, rb_bandwidth);
  double y = 0.0;
  for (Index i = 0; i < rates.size(); ++i) {
    const double u = evaluate(utilities[static_cast<std::size_t>(i)], rates[i]);
    if (!(u > 0.0)) return -std::numeric_limits<double>::infinity();
    y += std::log(u);
  }
  return y;
}

Matrix gradient_y(const PowerAllocation& power, const Matrix& phi_star,
                  const AggregatedGains& gains,
                  std::span<const UtilityFunction> utilities,
                  std::span<const Index> ue_cell, double rb_bandwidth) {
  const Index num_ues = phi_star.rows();
  const Index num_rbs = phi_star.cols();
  const Index num_enbs = power.p.rows();

  // Total received power per (cell, rb) and the interference-only part.
  Matrix total(num_enbs, num_rbs), interf(num_enbs, num_rbs);
  for (Index b = 0; b < num_enbs; ++b)
    for (Index z = 0; z < num_rbs; ++z) {
      double acc = 0.0;
      for (Index l = 0; l < num_enbs; ++l)
        if (l != b) acc += gains.g[b](l, z) * power.p(l, z);
      interf(b, z) = gains.noise(b, z) + acc;
      total(b, z) = interf(b, z) + gains.g[b](b, z) * power.p(b, z);
    }

  const Vector rates = power_rates(power, phi_star, gains, ue_cell, rb_bandwidth);

  // Per-cell sums of (U'/U) * phi*(i,z) over the cell's UEs.
  Matrix ratio_phi = Matrix::Zero(num_enbs, num_rbs);
  for (Index i = 0; i < num_ues; ++i) {
    const auto& u = utilities[static_cast<std::size_t>(i)];
    const double ratio = derivative(u, rates[i]) / evaluate(u, rates[i]);
    ratio_phi.row(ue_cell[static_cast<std::size_t>(i)]) +=
        ratio * phi_star.row(i);
  }

  Matrix grad(num_enbs, num_rbs);
  const double scale = rb_bandwidth * kInvLn2;
  for (Index b = 0; b < num_enbs; ++b)
    for (Index z = 0; z < num_rbs; ++z) {
      double g = ratio_phi(b, z) * gains.g[b](b, z) / total(b, z);
      for (Index o = 0; o < num_enbs; ++o) {
        if (o == b) continue;
        g -= ratio_phi(o, z) * gains.g[o](o, z) * power.p(o, z) *
             gains.g[o](b, z) / (interf(o, z) * total(o, z));
      }
      grad(b, z) = scale * g;
    }
  return grad;
}

double gradient_y_entry(const PowerAllocation& power, const Matrix& phi_star,
                        const AggregatedGains& gains,
                        std::span<const UtilityFunction> utilities,
                        std::span<const Index> ue_cell, double rb_bandwidth,
                        Index cell, Index rb) {
  return gradient_y(power, phi_star, gains, utilities, ue_cell, rb_bandwidth)(
      cell, rb);
}

Vector power_update(const Vector& p_slot, const Vector& grad_slot,
                    double alpha, double budget_w) {
  if (p_slot.size() != grad_slot.size())
    throw std::invalid_argument("power_update: size mismatch");
  if (!(alpha >= 0.0)) throw std::invalid_argument("power_update: alpha must be >= 0");
  if (!(budget_w > 0.0)) throw std::invalid_argument("power_update: budget must be > 0");
  Vector candidate = (p_slot + alpha * grad_slot).cwiseMax(0.0);
  const double sum = candidate.sum();
  if (sum <= budget_w) return candidate;
  return candidate * (budget_w / sum);
}

PowerTrace iterate_power(const PowerAllocation& p0, const Matrix& phi_star,
                         const AggregatedGains& gains,
                         std::span<const UtilityFunction> utilities,
                         std::span<const Index> ue_cell, double rb_bandwidth,
                         double alpha, int max_iters, double tol) {
  if (!power_feasible(p0))
    throw std::invalid_argument("iterate_power: infeasible starting point");

  PowerTrace trace;
  trace.power = p0;
  double y = objective_y(p0, phi_star, gains, utilities, ue_cell, rb_bandwidth);
  if (!std::isfinite(y))
    throw std::invalid_argument("iterate_power: objective not finite at start");
  trace.objective.push_back(y);

  const Index freqs = p0.grid.num_freq;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix grad = gradient_y(trace.power, phi_star, gains, utilities,
                                   ue_cell, rb_bandwidth);
    if (it == 0 && alpha <= 0.0) {
      const double gmax = grad.cwiseAbs().maxCoeff();
      alpha = gmax > 0.0 ? 1e-3 * p0.budget_w / gmax : 0.0;
    }
    for (Index b = 0; b < trace.power.p.rows(); ++b)
      for (Index q = 0; q < p0.grid.num_slots; ++q) {
        const Vector p_slot = trace.power.p.row(b).segment(q * freqs, freqs);
        const Vector g_slot = grad.row(b).segment(q * freqs, freqs);
        trace.power.p.row(b).segment(q * freqs, freqs) =
            power_update(p_slot, g_slot, alpha, p0.budget_w);
      }
    const double y_new = objective_y(trace.power, phi_star, gains, utilities,
                                     ue_cell, rb_bandwidth);
    trace.objective.push_back(y_new);
    const double dy = std::abs(y_new - y);
    y = y_new;
    if (dy < tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

}  // namespace appsched
