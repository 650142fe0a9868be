// SPDX-License-Identifier: Apache-2.0
#include "appsched/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace appsched {

namespace {

Matrix enb_matrix(const ScenarioConfig& cfg) {
  Matrix m(static_cast<Index>(cfg.enb_positions_m.size()), 2);
  for (std::size_t b = 0; b < cfg.enb_positions_m.size(); ++b) {
    m(static_cast<Index>(b), 0) = cfg.enb_positions_m[b][0];
    m(static_cast<Index>(b), 1) = cfg.enb_positions_m[b][1];
  }
  return m;
}

ChannelModel::Params channel_params(const ScenarioConfig& cfg) {
  ChannelModel::Params p;
  p.grid = cfg.rb_grid;
  p.noise_w = cfg.noise_w;
  p.shadowing_sigma_db = cfg.shadowing_sigma_db;
  p.doppler_hz = cfg.doppler_hz;
  p.frame_duration_s = cfg.frame_duration_s;
  p.unity_gain = cfg.unity_gain;
  // Noise that makes a uniform budget split hit the reference SNR exactly.
  const double per_rb_power =
      cfg.power_budget_w / static_cast<double>(cfg.rb_grid.num_freq);
  p.unity_noise_w = per_rb_power / std::pow(10.0, cfg.unity_snr_db / 10.0);
  return p;
}

constexpr std::uint64_t kPositionsTag = 0x706f73;  // "pos"
constexpr std::uint64_t kChannelTag = 0x6368616e;  // "chan"

const char* policy_name(Policy p) {
  return p == Policy::AppAware ? "app-aware" : "weighted-pf";
}

}  // namespace

ReplicaOutput simulate_replica(const ScenarioConfig& cfg, Policy policy,
                               Index replica) {
  const Rng master(cfg.seed);
  const Rng replica_rng = master.substream(static_cast<std::uint64_t>(replica) + 1);

  Rng pos_rng = cfg.fixed_topology ? master.substream(kPositionsTag)
                                   : replica_rng.substream(kPositionsTag);
  const Matrix positions = place_ues(pos_rng, cfg.area_m, cfg.num_ues);
  const std::vector<Index> ue_cells = resolve_ue_cells(cfg, positions);
  const Index num_enbs = static_cast<Index>(cfg.enb_positions_m.size());

  Rng chan_rng = replica_rng.substream(kChannelTag);
  ChannelModel model(channel_params(cfg), positions, enb_matrix(cfg), chan_rng);

  const PowerAllocation powers =
      uniform_power(num_enbs, cfg.rb_grid, cfg.power_budget_w);

  SchedulerContext ctx;
  ctx.policy = policy;
  ctx.utilities = cfg.ue_utilities;
  ctx.weights = cfg.weights.size() != 0 ? cfg.weights : Vector::Ones(cfg.num_ues);
  ctx.ue_cell = ue_cells;
  ctx.rb_bandwidth = cfg.rb_bandwidth;
  ctx.rate_floor = cfg.r_floor;

  ScheduleState state = ScheduleState::make(cfg.num_ues, cfg.rb_grid.size());

  ReplicaOutput out;
  out.trajectory.resize(cfg.frames, cfg.num_ues);
  out.rb_assignments = Vector::Zero(cfg.num_ues);
  for (Index frame = 0; frame < cfg.frames; ++frame) {
    const ChannelRealization channel = model.next_frame();
    const FrameResult fr = schedule_frame(state, channel, powers, ctx);
    out.trajectory.row(frame) = state.rates.transpose();
    for (Index w : fr.winner)
      if (w >= 0) out.rb_assignments[w] += 1.0;
  }
  out.final_phi = state.phi;

  if (cfg.power_control) {
    const AggregatedGains gains =
        aggregate_gains(model.static_realization(), ue_cells, num_enbs,
                        cfg.gain_aggregation);
    const PowerTrace trace = iterate_power(
        powers, state.phi, gains, cfg.ue_utilities, ue_cells, cfg.rb_bandwidth,
        cfg.alpha, static_cast<int>(cfg.max_iters), cfg.tol);
    out.has_power = true;
    out.power = trace.power;
    out.power_objective = trace.objective;
  }
  return out;
}

RunResult run(const ScenarioConfig& cfg, Policy policy) {
  validate(cfg);
  const Index n = cfg.monte_carlo_iters;
  std::vector<ReplicaOutput> replicas(static_cast<std::size_t>(n));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<Index>(static_cast<Index>(hw), n));
  if (workers <= 1) {
    for (Index m = 0; m < n; ++m)
      replicas[static_cast<std::size_t>(m)] = simulate_replica(cfg, policy, m);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (Index m = static_cast<Index>(w); m < n;
             m += static_cast<Index>(workers))
          replicas[static_cast<std::size_t>(m)] = simulate_replica(cfg, policy, m);
      });
    for (auto& t : pool) t.join();
  }

  RunResult result;
  result.policy_name = policy_name(policy);
  result.seed = cfg.seed;
  result.config_digest = config_hash(cfg);
  result.trajectory = Matrix::Zero(cfg.frames, cfg.num_ues);
  // Replica order is fixed so the reduction is bit-reproducible regardless
  // of thread scheduling.
  for (const auto& rep : replicas) result.trajectory += rep.trajectory;
  result.trajectory /= static_cast<double>(n);
  result.final_phi = replicas[0].final_phi;
  result.min_rb_assignments = replicas[0].rb_assignments;
  for (const auto& rep : replicas)
    result.min_rb_assignments = result.min_rb_assignments.cwiseMin(rep.rb_assignments);
  result.has_power = replicas[0].has_power;
  if (result.has_power) {
    result.final_power = replicas[0].power;
    result.power_objective = replicas[0].power_objective;
  }
  return result;
}

CompareResult compare(const ScenarioConfig& cfg) {
  CompareResult out;
  out.app_aware = run(cfg, Policy::AppAware);
  out.weighted_pf = run(cfg, Policy::WeightedPf);
  return out;
}

namespace {

void append_csv(std::span<const RunResult> results,
                std::span<const UtilityFunction> utilities, std::ostream& os) {
  os << "frame,ue,policy,throughput,utility\n";
  char buf[64];
  for (const auto& result : results) {
    for (Index frame = 0; frame < result.trajectory.rows(); ++frame) {
      for (Index ue = 0; ue < result.trajectory.cols(); ++ue) {
        const double rate = result.trajectory(frame, ue);
        const double util = evaluate(utilities[static_cast<std::size_t>(ue)], rate);
        os << (frame + 1) << ',' << (ue + 1) << ',' << result.policy_name << ',';
        std::snprintf(buf, sizeof buf, "%.12g", rate);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.12g", util);
        os << buf << '\n';
      }
    }
  }
}

}  // namespace

void write_csv(std::span<const RunResult> results,
               std::span<const UtilityFunction> utilities, std::ostream& os) {
  append_csv(results, utilities, os);
}

void write_csv(std::span<const RunResult> results,
               std::span<const UtilityFunction> utilities,
               const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary keeps LF endings
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  append_csv(results, utilities, os);
  os.flush();
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_svg(std::span<const RunResult> results, const std::string& path) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                  "#d62728", "#9467bd", "#8c564b",
                                  "#e377c2", "#7f7f7f"};
  const double width = 860, height = 520;
  const double ml = 60, mr = 170, mt = 20, mb = 45;

  Index frames = 0;
  double ymax = 1e-9;
  for (const auto& r : results) {
    frames = std::max(frames, r.trajectory.rows());
    if (r.trajectory.size() > 0) ymax = std::max(ymax, r.trajectory.maxCoeff());
  }
  if (frames < 2) frames = 2;
  ymax *= 1.05;

  auto x_of = [&](double frame) {
    return ml + (width - ml - mr) * frame / static_cast<double>(frames - 1);
  };
  auto y_of = [&](double v) { return height - mb - (height - mt - mb) * v / ymax; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = ymax * t / 4.0;
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    svg << buf << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">frame</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">throughput</text>\n";

  double legend_y = mt + 10;
  for (std::size_t ri = 0; ri < results.size(); ++ri) {
    const auto& r = results[ri];
    const char* dash = ri == 0 ? "" : " stroke-dasharray=\"6 4\"";
    for (Index ue = 0; ue < r.trajectory.cols(); ++ue) {
      const char* color = kColors[static_cast<std::size_t>(ue) % 8];
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\"" << dash
          << " stroke-width=\"1.4\" points=\"";
      for (Index f = 0; f < r.trajectory.rows(); ++f)
        svg << x_of(static_cast<double>(f)) << ','
            << y_of(r.trajectory(f, ue)) << ' ';
      svg << "\"/>\n";
      svg << "<line x1=\"" << width - mr + 12 << "\" x2=\"" << width - mr + 34
          << "\" y1=\"" << legend_y << "\" y2=\"" << legend_y << "\" stroke=\""
          << color << "\"" << dash << " stroke-width=\"1.6\"/>\n";
      svg << "<text x=\"" << width - mr + 40 << "\" y=\"" << legend_y + 4
          << "\" font-size=\"12\">UE " << ue + 1 << " (" << r.policy_name
          << ")</text>\n";
      legend_y += 18;
    }
  }
  svg << "</svg>\n";

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_svg: cannot open " + path);
  os << svg.str();
  if (!os) throw std::runtime_error("write_svg: write failed for " + path);
}

}  // namespace appsched
