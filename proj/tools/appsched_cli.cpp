// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: run a scenario, compare scheduling policies, sweep a
// scalar config field, or list the built-in presets. Emits CSV (and
// optionally SVG) artifacts plus a summary table on stdout.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "appsched/sim.hpp"

namespace {

using namespace appsched;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string policy = "app-aware";
  bool unity_gain = false;
  bool power_control = false;
  bool fixed_topology = false;
  bool svg = false;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_policy) {
  cmd->add_option("--config", o.config_path, "Path to a JSON scenario config");
  cmd->add_option("--preset", o.preset, "Built-in preset name (paper-sec6)");
  if (with_policy)
    cmd->add_option("--policy", o.policy, "app-aware or weighted-pf")
        ->check(CLI::IsMember({"app-aware", "weighted-pf"}));
  cmd->add_flag("--unity-gain", o.unity_gain, "Override all channel gains to 1");
  cmd->add_flag("--power-control", o.power_control,
                "Run projected-gradient power control after scheduling");
  cmd->add_flag("--fixed-topology", o.fixed_topology,
                "Reuse one UE placement across Monte Carlo iterations");
  cmd->add_flag("--svg", o.svg, "Also emit an SVG line chart");
  cmd->add_option("--seed", o.seed, "Override the RNG seed");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

ScenarioConfig resolve_config(const CommonOpts& o) {
  if (o.config_path.empty() == o.preset.empty())
    throw std::invalid_argument("provide exactly one of --config or --preset");
  ScenarioConfig cfg;
  if (!o.preset.empty()) {
    if (o.preset != "paper-sec6")
      throw std::invalid_argument("unknown preset '" + o.preset + "'");
    cfg = paper_preset();
  } else {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = load_config(ss.str());
  }
  if (o.unity_gain) cfg.unity_gain = true;
  if (o.power_control) cfg.power_control = true;
  if (o.fixed_topology) cfg.fixed_topology = true;
  if (o.seed) cfg.seed = *o.seed;
  cfg.policy = o.policy == "weighted-pf" ? Policy::WeightedPf : Policy::AppAware;
  validate(cfg);
  return cfg;
}

void print_summary(const ScenarioConfig& cfg, const RunResult& r) {
  std::printf("policy %s  seed %llu  config %s\n", r.policy_name.c_str(),
              static_cast<unsigned long long>(r.seed), r.config_digest.c_str());
  std::printf("%4s  %-12s  %-14s  %-10s\n", "ue", "traffic", "throughput",
              "utility");
  const Index last = r.trajectory.rows() - 1;
  for (Index ue = 0; ue < r.trajectory.cols(); ++ue) {
    const auto& u = cfg.ue_utilities[static_cast<std::size_t>(ue)];
    const double rate = r.trajectory(last, ue);
    std::printf("%4lld  %-12s  %-14.6g  %-10.6g\n",
                static_cast<long long>(ue + 1),
                u.kind == UtilityFunction::Kind::Sigmoidal ? "sigmoidal"
                                                           : "logarithmic",
                rate, evaluate(u, rate));
  }
  if (r.has_power) {
    std::printf("power control: %zu sweeps, objective %.6g -> %.6g\n",
                r.power_objective.size() - 1, r.power_objective.front(),
                r.power_objective.back());
  }
}

std::filesystem::path out_file(const CommonOpts& o, const char* name) {
  std::filesystem::create_directories(o.out_dir);
  return std::filesystem::path(o.out_dir) / name;
}

int cmd_run(const CommonOpts& o) {
  const ScenarioConfig cfg = resolve_config(o);
  const RunResult result = run(cfg, cfg.policy);
  const RunResult results[] = {result};
  write_csv(results, cfg.ue_utilities, out_file(o, "run.csv").string());
  if (o.svg) write_svg(results, out_file(o, "run.svg").string());
  print_summary(cfg, result);
  return 0;
}

int cmd_compare(const CommonOpts& o) {
  const ScenarioConfig cfg = resolve_config(o);
  const CompareResult cr = compare(cfg);
  const RunResult results[] = {cr.app_aware, cr.weighted_pf};
  write_csv(results, cfg.ue_utilities, out_file(o, "compare.csv").string());
  if (o.svg) write_svg(results, out_file(o, "compare.svg").string());
  print_summary(cfg, cr.app_aware);
  std::printf("\n");
  print_summary(cfg, cr.weighted_pf);

  double sum_app = 0.0, sum_pf = 0.0;
  const Index last = cr.app_aware.trajectory.rows() - 1;
  for (Index ue = 0; ue < cfg.num_ues; ++ue) {
    const auto& u = cfg.ue_utilities[static_cast<std::size_t>(ue)];
    sum_app += evaluate(u, cr.app_aware.trajectory(last, ue));
    sum_pf += evaluate(u, cr.weighted_pf.trajectory(last, ue));
  }
  std::printf("\ntotal utility: app-aware %.6g, weighted-pf %.6g\n", sum_app,
              sum_pf);
  return 0;
}

struct SweepOpts {
  std::string field;
  double from = 0.0, to = 0.0;
  int steps = 2;
};

int cmd_sweep(const CommonOpts& o, const SweepOpts& s) {
  static const std::set<std::string> numeric_fields = {
      "rb_bandwidth", "power_budget_w", "noise_w",   "unity_snr_db",
      "r_floor",      "alpha",          "doppler_hz", "shadowing_sigma_db"};
  if (!numeric_fields.count(s.field))
    throw std::invalid_argument("sweep: unsupported field '" + s.field + "'");
  if (s.steps < 2) throw std::invalid_argument("sweep: need --steps >= 2");

  const ScenarioConfig base = resolve_config(o);
  std::ofstream os(out_file(o, "sweep.csv"), std::ios::binary);
  if (!os) throw std::runtime_error("sweep: cannot open output");
  os << "value,ue,policy,throughput,utility\n";
  char buf[64];
  for (int step = 0; step < s.steps; ++step) {
    const double value = s.from + (s.to - s.from) * step / (s.steps - 1);
    ScenarioConfig cfg = base;
    if (s.field == "rb_bandwidth") cfg.rb_bandwidth = value;
    else if (s.field == "power_budget_w") cfg.power_budget_w = value;
    else if (s.field == "noise_w") cfg.noise_w = value;
    else if (s.field == "unity_snr_db") cfg.unity_snr_db = value;
    else if (s.field == "r_floor") cfg.r_floor = value;
    else if (s.field == "alpha") cfg.alpha = value;
    else if (s.field == "doppler_hz") cfg.doppler_hz = value;
    else cfg.shadowing_sigma_db = value;
    validate(cfg);
    const RunResult r = run(cfg, cfg.policy);
    const Index last = r.trajectory.rows() - 1;
    for (Index ue = 0; ue < cfg.num_ues; ++ue) {
      const auto& u = cfg.ue_utilities[static_cast<std::size_t>(ue)];
      const double rate = r.trajectory(last, ue);
      std::snprintf(buf, sizeof buf, "%.12g", value);
      os << buf << ',' << ue + 1 << ',' << r.policy_name << ',';
      std::snprintf(buf, sizeof buf, "%.12g", rate);
      os << buf << ',';
      std::snprintf(buf, sizeof buf, "%.12g", evaluate(u, rate));
      os << buf << '\n';
    }
    std::printf("sweep %s=%g done\n", s.field.c_str(), value);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE downlink scheduling and power-allocation simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts, compare_opts, sweep_opts_common;
  SweepOpts sweep_opts;

  CLI::App* c_run = app.add_subcommand("run", "Simulate one policy");
  add_common(c_run, run_opts, true);
  CLI::App* c_cmp =
      app.add_subcommand("compare", "Run both policies on identical channels");
  add_common(c_cmp, compare_opts, false);
  CLI::App* c_sweep =
      app.add_subcommand("sweep", "Vary one scalar config field over a range");
  add_common(c_sweep, sweep_opts_common, true);
  c_sweep->add_option("--field", sweep_opts.field, "Config field to vary")->required();
  c_sweep->add_option("--from", sweep_opts.from, "First value")->required();
  c_sweep->add_option("--to", sweep_opts.to, "Last value")->required();
  c_sweep->add_option("--steps", sweep_opts.steps, "Number of values")->required();
  CLI::App* c_preset = app.add_subcommand("preset", "Preset utilities");
  CLI::App* c_preset_list = c_preset->add_subcommand("list", "List built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(run_opts);
    if (c_cmp->parsed()) return cmd_compare(compare_opts);
    if (c_sweep->parsed()) return cmd_sweep(sweep_opts_common, sweep_opts);
    if (c_preset->parsed()) {
      if (c_preset_list->parsed() || c_preset->get_subcommands().empty()) {
        std::printf("paper-sec6  one eNodeB, six UEs (3 sigmoidal + 3 logarithmic), 200 RBs\n");
        return 0;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
