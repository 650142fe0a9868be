// SPDX-License-Identifier: Apache-2.0
#include "appsched/sim.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

using namespace appsched;

namespace {

// Small fading scenario that runs in milliseconds.
ScenarioConfig small_config() {
  ScenarioConfig c = paper_preset();
  c.rb_grid = RbGrid{10, 2};
  c.frames = 40;
  c.monte_carlo_iters = 3;
  c.seed = 11;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("single-replica run equals the replica itself") {
  ScenarioConfig c = small_config();
  c.monte_carlo_iters = 1;
  const RunResult r = run(c, Policy::AppAware);
  const ReplicaOutput rep = simulate_replica(c, Policy::AppAware, 0);
  CHECK((r.trajectory.array() == rep.trajectory.array()).all());
  CHECK((r.final_phi.array() == rep.final_phi.array()).all());
}

TEST_CASE("runs are deterministic and policy-independent channels") {
  const ScenarioConfig c = small_config();
  const RunResult a = run(c, Policy::AppAware);
  const RunResult b = run(c, Policy::AppAware);
  CHECK((a.trajectory.array() == b.trajectory.array()).all());
  CHECK(a.config_digest == b.config_digest);

  // Identical seeds give both policies identical channel realizations, so a
  // single-UE scenario yields identical rates under either policy.
  ScenarioConfig one = small_config();
  one.num_ues = 1;
  one.ue_utilities = {UtilityFunction::logarithmic(3.0, 100.0)};
  const RunResult app = run(one, Policy::AppAware);
  const RunResult pf = run(one, Policy::WeightedPf);
  CHECK((app.trajectory.array() == pf.trajectory.array()).all());
}

TEST_CASE("trajectory is the pointwise mean over replicas") {
  const ScenarioConfig c = small_config();
  const RunResult r = run(c, Policy::AppAware);
  Matrix mean = Matrix::Zero(c.frames, c.num_ues);
  for (Index m = 0; m < c.monte_carlo_iters; ++m)
    mean += simulate_replica(c, Policy::AppAware, m).trajectory;
  mean /= static_cast<double>(c.monte_carlo_iters);
  CHECK((r.trajectory.array() == mean.array()).all());
}

TEST_CASE("fixed topology shares placements across replicas") {
  ScenarioConfig c = small_config();
  c.fixed_topology = true;
  c.doppler_hz = 0.0;
  c.shadowing_sigma_db = 0.0;
  // With frozen shadowing/fading and one shared placement, replicas are
  // identical, so the mean equals any single replica.
  const RunResult r = run(c, Policy::AppAware);
  const ReplicaOutput rep = simulate_replica(c, Policy::AppAware, 1);
  CHECK((r.trajectory.row(c.frames - 1).array() ==
         rep.trajectory.row(c.frames - 1).array()).all());
}

TEST_CASE("csv format") {
  ScenarioConfig c = small_config();
  c.monte_carlo_iters = 1;
  c.frames = 1;
  c.num_ues = 1;
  c.ue_utilities = {UtilityFunction::logarithmic(3.0, 100.0)};
  const RunResult r = run(c, Policy::AppAware);

  std::ostringstream os;
  const RunResult results[] = {r};
  write_csv(results, c.ue_utilities, os);
  const std::string text = os.str();

  // Header plus one row per (frame, ue); LF endings only.
  CHECK(text.find("frame,ue,policy,throughput,utility\n") == 0);
  CHECK(text.find('\r') == std::string::npos);
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 2);

  // Round-trip the numeric fields at 12 significant digits.
  std::istringstream is(text);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  int frame, ue;
  char policy[32];
  double rate, util;
  CHECK(std::sscanf(row.c_str(), "%d,%d,%31[^,],%lf,%lf", &frame, &ue, policy,
                    &rate, &util) == 5);
  CHECK(frame == 1);
  CHECK(ue == 1);
  CHECK(std::string(policy) == "app-aware");
  CHECK(rate == doctest::Approx(r.trajectory(0, 0)).epsilon(1e-11));
  CHECK(util ==
        doctest::Approx(evaluate(c.ue_utilities[0], r.trajectory(0, 0))).epsilon(1e-11));

  // Empty trajectory: header only.
  RunResult empty;
  empty.policy_name = "app-aware";
  empty.trajectory.resize(0, 0);
  std::ostringstream os2;
  const RunResult empties[] = {empty};
  write_csv(empties, c.ue_utilities, os2);
  CHECK(os2.str() == "frame,ue,policy,throughput,utility\n");
}

TEST_CASE("compare emits both policies over identical channels") {
  const ScenarioConfig c = small_config();
  const CompareResult cr = compare(c);
  CHECK(cr.app_aware.policy_name == "app-aware");
  CHECK(cr.weighted_pf.policy_name == "weighted-pf");
  CHECK(cr.app_aware.trajectory.rows() == c.frames);
  CHECK(cr.weighted_pf.trajectory.rows() == c.frames);

  std::ostringstream os;
  const RunResult results[] = {cr.app_aware, cr.weighted_pf};
  write_csv(results, c.ue_utilities, os);
  int lines = 0;
  for (char ch : os.str())
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + 2 * c.frames * c.num_ues);
}

TEST_CASE("csv files are byte-identical across invocations") {
  const ScenarioConfig c = small_config();
  const auto dir = std::filesystem::temp_directory_path() / "appsched_test_csv";
  std::filesystem::create_directories(dir);
  const std::string p1 = (dir / "a.csv").string();
  const std::string p2 = (dir / "b.csv").string();
  {
    const RunResult r = run(c, Policy::AppAware);
    const RunResult results[] = {r};
    write_csv(results, c.ue_utilities, p1);
  }
  {
    const RunResult r = run(c, Policy::AppAware);
    const RunResult results[] = {r};
    write_csv(results, c.ue_utilities, p2);
  }
  CHECK(read_file(p1) == read_file(p2));
  CHECK(!read_file(p1).empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("power control attaches a feasible allocation and ascent trace") {
  ScenarioConfig c = small_config();
  c.monte_carlo_iters = 2;
  c.power_control = true;
  c.max_iters = 500;
  const RunResult r = run(c, Policy::AppAware);
  CHECK(r.has_power);
  CHECK(power_feasible(r.final_power));
  CHECK(r.power_objective.size() >= 2);
  CHECK(r.power_objective.back() >= r.power_objective.front() - 1e-9);
}

TEST_CASE("svg emitter writes a well-formed chart") {
  const ScenarioConfig c = small_config();
  const RunResult r = run(c, Policy::AppAware);
  const auto dir = std::filesystem::temp_directory_path() / "appsched_test_svg";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "chart.svg").string();
  const RunResult results[] = {r};
  write_svg(results, path);
  const std::string svg = read_file(path);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  std::filesystem::remove_all(dir);
}
