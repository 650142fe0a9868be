// SPDX-License-Identifier: Apache-2.0
#include "appsched/scenario.hpp"

#include <cstdio>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace appsched {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0)) fail(std::string(field) + " must be > 0");
}

}  // namespace

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
  auto vec_eq = [](const Vector& a, const Vector& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
  };
  return area_m == other.area_m && enb_positions_m == other.enb_positions_m &&
         num_ues == other.num_ues && ue_utilities == other.ue_utilities &&
         ue_cells == other.ue_cells && rb_grid == other.rb_grid &&
         noise_w == other.noise_w && rb_bandwidth == other.rb_bandwidth &&
         power_budget_w == other.power_budget_w && seed == other.seed &&
         monte_carlo_iters == other.monte_carlo_iters &&
         frames == other.frames && policy == other.policy &&
         vec_eq(weights, other.weights) && unity_gain == other.unity_gain &&
         unity_snr_db == other.unity_snr_db &&
         power_control == other.power_control && alpha == other.alpha &&
         tol == other.tol && max_iters == other.max_iters &&
         r_floor == other.r_floor &&
         shadowing_sigma_db == other.shadowing_sigma_db &&
         doppler_hz == other.doppler_hz &&
         frame_duration_s == other.frame_duration_s &&
         fixed_topology == other.fixed_topology &&
         gain_aggregation == other.gain_aggregation;
}

void validate(const ScenarioConfig& c) {
  require_positive(c.area_m, "area_m");
  if (c.enb_positions_m.empty()) fail("enb_positions must not be empty");
  if (c.num_ues < 1) fail("num_ues must be >= 1");
  if (static_cast<Index>(c.ue_utilities.size()) != c.num_ues)
    fail("ue_utilities must list exactly num_ues entries");
  if (!c.ue_cells.empty()) {
    if (static_cast<Index>(c.ue_cells.size()) != c.num_ues)
      fail("ue_cells must list exactly num_ues entries");
    for (Index cell : c.ue_cells)
      if (cell < 0 || cell >= static_cast<Index>(c.enb_positions_m.size()))
        fail("ue_cells entries must index an eNodeB");
  }
  if (c.rb_grid.num_freq < 1) fail("rb_grid.num_freq must be >= 1");
  if (c.rb_grid.num_slots < 1) fail("rb_grid.num_slots must be >= 1");
  require_positive(c.noise_w, "noise_w");
  require_positive(c.rb_bandwidth, "rb_bandwidth");
  require_positive(c.power_budget_w, "power_budget_w");
  if (c.monte_carlo_iters < 1) fail("monte_carlo_iters must be >= 1");
  if (c.frames < 1) fail("frames must be >= 1");
  if (c.weights.size() != 0) {
    if (c.weights.size() != c.num_ues)
      fail("weights must list exactly num_ues entries");
    if (!(c.weights.array() > 0.0).all()) fail("weights must be > 0");
  }
  if (!std::isfinite(c.unity_snr_db)) fail("unity_snr_db must be finite");
  require_positive(c.tol, "tol");
  if (c.max_iters < 1) fail("max_iters must be >= 1");
  require_positive(c.r_floor, "r_floor");
  if (!(c.shadowing_sigma_db >= 0.0)) fail("shadowing_sigma_db must be >= 0");
  if (!(c.doppler_hz >= 0.0)) fail("doppler_hz must be >= 0");
  require_positive(c.frame_duration_s, "frame_duration_s");
}

ScenarioConfig paper_preset() {
  ScenarioConfig c;
  c.area_m = 500.0;
  c.enb_positions_m = {{250.0, 250.0}};
  c.num_ues = 6;
  c.ue_utilities = {
      UtilityFunction::sigmoidal(5.0, 10.0),
      UtilityFunction::sigmoidal(3.0, 20.0),
      UtilityFunction::sigmoidal(1.0, 30.0),
      UtilityFunction::logarithmic(15.0, 100.0),
      UtilityFunction::logarithmic(3.0, 100.0),
      UtilityFunction::logarithmic(0.5, 100.0),
  };
  c.rb_grid = RbGrid{100, 2};
  c.noise_w = 3.5e-15;
  c.rb_bandwidth = 0.015;
  c.power_budget_w = 40.0;
  c.seed = 7;
  c.monte_carlo_iters = 200;
  c.frames = 2000;
  c.policy = Policy::AppAware;
  c.unity_gain = false;
  c.unity_snr_db = 60.0;
  return c;
}

namespace {

UtilityFunction utility_from_json(const json& j) {
  if (!j.is_object()) fail("ue_utilities entries must be objects");
  static const std::set<std::string> sig_keys = {"kind", "steepness",
                                                 "inflection_rate"};
  static const std::set<std::string> log_keys = {"kind", "curvature",
                                                 "rate_max"};
  const std::string kind = j.value("kind", "");
  if (kind == "sigmoidal") {
    for (const auto& [key, _] : j.items())
      if (!sig_keys.count(key)) fail("unknown utility key '" + key + "'");
    if (!j.contains("steepness") || !j.contains("inflection_rate"))
      fail("sigmoidal utility requires steepness and inflection_rate");
    return UtilityFunction::sigmoidal(j["steepness"].get<double>(),
                                      j["inflection_rate"].get<double>());
  }
  if (kind == "logarithmic") {
    for (const auto& [key, _] : j.items())
      if (!log_keys.count(key)) fail("unknown utility key '" + key + "'");
    if (!j.contains("curvature") || !j.contains("rate_max"))
      fail("logarithmic utility requires curvature and rate_max");
    return UtilityFunction::logarithmic(j["curvature"].get<double>(),
                                        j["rate_max"].get<double>());
  }
  fail("utility kind must be 'sigmoidal' or 'logarithmic'");
}

json utility_to_json(const UtilityFunction& u) {
  json j;
  if (u.kind == UtilityFunction::Kind::Sigmoidal) {
    j["kind"] = "sigmoidal";
    j["steepness"] = u.steepness;
    j["inflection_rate"] = u.inflection_rate;
  } else {
    j["kind"] = "logarithmic";
    j["curvature"] = u.curvature;
    j["rate_max"] = u.rate_max;
  }
  return j;
}

const std::set<std::string> kKnownKeys = {
    "area_m",        "enb_positions",     "num_ues",
    "ue_utilities",  "ue_cells",          "rb_grid",
    "noise_w",       "rb_bandwidth",      "power_budget_w",
    "seed",          "monte_carlo_iters", "frames",
    "policy",        "weights",           "unity_gain",
    "unity_snr_db",  "power_control",     "alpha",
    "tol",           "max_iters",         "r_floor",
    "shadowing_sigma_db", "doppler_hz",   "frame_duration_s",
    "fixed_topology", "gain_aggregation"};

}  // namespace

ScenarioConfig load_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("document must be a JSON object");

  static const char* required[] = {"num_ues", "ue_utilities", "rb_grid"};
  std::string missing;
  for (const char* field : required)
    if (!j.contains(field)) missing += missing.empty() ? field : std::string(", ") + field;
  if (!missing.empty()) fail("missing required fields: " + missing);

  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) fail("unknown key '" + key + "'");

  ScenarioConfig c;
  try {
    if (j.contains("area_m")) c.area_m = j["area_m"].get<double>();
    if (j.contains("enb_positions")) {
      c.enb_positions_m.clear();
      for (const auto& pos : j["enb_positions"]) {
        if (!pos.is_array() || pos.size() != 2) fail("enb_positions entries must be [x, y]");
        c.enb_positions_m.push_back({pos[0].get<double>(), pos[1].get<double>()});
      }
    }
    c.num_ues = j["num_ues"].get<Index>();
    c.ue_utilities.clear();
    for (const auto& u : j["ue_utilities"])
      c.ue_utilities.push_back(utility_from_json(u));
    if (j.contains("ue_cells")) {
      c.ue_cells.clear();
      for (const auto& v : j["ue_cells"]) c.ue_cells.push_back(v.get<Index>());
    }
    {
      const json& g = j["rb_grid"];
      if (!g.is_object()) fail("rb_grid must be an object");
      for (const auto& [key, _] : g.items())
        if (key != "num_freq" && key != "num_slots")
          fail("unknown rb_grid key '" + key + "'");
      if (!g.contains("num_freq") || !g.contains("num_slots"))
        fail("rb_grid requires num_freq and num_slots");
      c.rb_grid = RbGrid{g["num_freq"].get<Index>(), g["num_slots"].get<Index>()};
    }
    if (j.contains("noise_w")) c.noise_w = j["noise_w"].get<double>();
    if (j.contains("rb_bandwidth")) c.rb_bandwidth = j["rb_bandwidth"].get<double>();
    if (j.contains("power_budget_w")) c.power_budget_w = j["power_budget_w"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("monte_carlo_iters")) c.monte_carlo_iters = j["monte_carlo_iters"].get<Index>();
    if (j.contains("frames")) c.frames = j["frames"].get<Index>();
    if (j.contains("policy")) {
      const std::string p = j["policy"].get<std::string>();
      if (p == "app-aware") c.policy = Policy::AppAware;
      else if (p == "weighted-pf") c.policy = Policy::WeightedPf;
      else fail("policy must be 'app-aware' or 'weighted-pf'");
    }
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      c.weights.resize(static_cast<Index>(w.size()));
      for (Index i = 0; i < c.weights.size(); ++i)
        c.weights[i] = w[static_cast<std::size_t>(i)].get<double>();
    }
    if (j.contains("unity_gain")) c.unity_gain = j["unity_gain"].get<bool>();
    if (j.contains("unity_snr_db")) c.unity_snr_db = j["unity_snr_db"].get<double>();
    if (j.contains("power_control")) c.power_control = j["power_control"].get<bool>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<Index>();
    if (j.contains("r_floor")) c.r_floor = j["r_floor"].get<double>();
    if (j.contains("shadowing_sigma_db")) c.shadowing_sigma_db = j["shadowing_sigma_db"].get<double>();
    if (j.contains("doppler_hz")) c.doppler_hz = j["doppler_hz"].get<double>();
    if (j.contains("frame_duration_s")) c.frame_duration_s = j["frame_duration_s"].get<double>();
    if (j.contains("fixed_topology")) c.fixed_topology = j["fixed_topology"].get<bool>();
    if (j.contains("gain_aggregation")) {
      const std::string a = j["gain_aggregation"].get<std::string>();
      if (a == "mean") c.gain_aggregation = GainAggregation::Mean;
      else if (a == "median") c.gain_aggregation = GainAggregation::Median;
      else fail("gain_aggregation must be 'mean' or 'median'");
    }
  } catch (const json::exception& e) {
    fail(std::string("invalid value: ") + e.what());
  }

  validate(c);
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["area_m"] = c.area_m;
  j["enb_positions"] = json::array();
  for (const auto& pos : c.enb_positions_m)
    j["enb_positions"].push_back(json::array({pos[0], pos[1]}));
  j["num_ues"] = c.num_ues;
  j["ue_utilities"] = json::array();
  for (const auto& u : c.ue_utilities) j["ue_utilities"].push_back(utility_to_json(u));
  if (!c.ue_cells.empty()) j["ue_cells"] = c.ue_cells;
  j["rb_grid"] = {{"num_freq", c.rb_grid.num_freq}, {"num_slots", c.rb_grid.num_slots}};
  j["noise_w"] = c.noise_w;
  j["rb_bandwidth"] = c.rb_bandwidth;
  j["power_budget_w"] = c.power_budget_w;
  j["seed"] = c.seed;
  j["monte_carlo_iters"] = c.monte_carlo_iters;
  j["frames"] = c.frames;
  j["policy"] = c.policy == Policy::AppAware ? "app-aware" : "weighted-pf";
  if (c.weights.size() != 0) {
    json w = json::array();
    for (Index i = 0; i < c.weights.size(); ++i) w.push_back(c.weights[i]);
    j["weights"] = w;
  }
  j["unity_gain"] = c.unity_gain;
  j["unity_snr_db"] = c.unity_snr_db;
  j["power_control"] = c.power_control;
  j["alpha"] = c.alpha;
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  j["r_floor"] = c.r_floor;
  j["shadowing_sigma_db"] = c.shadowing_sigma_db;
  j["doppler_hz"] = c.doppler_hz;
  j["frame_duration_s"] = c.frame_duration_s;
  j["fixed_topology"] = c.fixed_topology;
  j["gain_aggregation"] =
      c.gain_aggregation == GainAggregation::Mean ? "mean" : "median";
  return j.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = serialize_config(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Matrix place_ues(Rng& rng, double area_m, Index n) {
  if (n < 1) throw std::invalid_argument("place_ues: need n >= 1");
  require_positive(area_m, "area_m");
  Matrix pos(n, 2);
  for (Index i = 0; i < n; ++i) {
    pos(i, 0) = rng.uniform(0.0, area_m);
    pos(i, 1) = rng.uniform(0.0, area_m);
  }
  return pos;
}

std::vector<Index> resolve_ue_cells(const ScenarioConfig& config,
                                    const Matrix& ue_positions_m) {
  if (!config.ue_cells.empty()) return config.ue_cells;
  std::vector<Index> cells(static_cast<std::size_t>(config.num_ues), 0);
  for (Index i = 0; i < config.num_ues; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < config.enb_positions_m.size(); ++b) {
      const double dx = ue_positions_m(i, 0) - config.enb_positions_m[b][0];
      const double dy = ue_positions_m(i, 1) - config.enb_positions_m[b][1];
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        cells[static_cast<std::size_t>(i)] = static_cast<Index>(b);
      }
    }
  }
  return cells;
}

}  // namespace appsched
