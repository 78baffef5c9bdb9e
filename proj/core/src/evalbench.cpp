#include "mpseq/evalbench.hpp"

#include "mpseq/learning.hpp"
#include "mpseq/metrics.hpp"
#include "mpseq/rollout.hpp"
#include "mpseq/sequencer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpseq {

namespace {

using json = nlohmann::ordered_json;

std::array<double, 2> range_from(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("bench config: " + context + " must be [lo, hi]");
  }
  std::array<double, 2> r{j[0].get<double>(), j[1].get<double>()};
  if (!(r[0] <= r[1])) {
    throw std::invalid_argument("bench config: " + context + " must be non-empty");
  }
  return r;
}

json range_to(const std::array<double, 2>& r) { return json::array({r[0], r[1]}); }

json scenario_echo(const ScenarioConfig& sc) {
  json j;
  j["name"] = sc.name;
  j["kind"] = to_string(sc.spec.kind);
  j["q"] = sc.spec.demo_count;
  j["duration_range"] = range_to(sc.spec.duration_range);
  j["amplitude_range"] = range_to(sc.spec.amplitude_range);
  j["speed_range"] = range_to(sc.spec.speed_range);
  j["angle_range"] = range_to(sc.spec.angle_range);
  j["noise_sd"] = sc.spec.noise_sd;
  j["seed"] = sc.spec.seed;
  j["rank_values"] = sc.rank_values;
  j["kernels"] = sc.kernel_count;
  return j;
}

}  // namespace

BenchConfig default_bench_config() {
  BenchConfig config;
  config.seed = 42;

  // Durations sit near 100/alpha_m so the integrator's first step lands on
  // the demos' cruise velocity instead of ringing through it.
  ScenarioConfig turn;
  turn.name = "sharp_turn_low_speed";
  turn.spec.kind = SynthKind::sharp_turn;
  turn.spec.demo_count = 10;
  turn.spec.duration_range = {5.0, 6.0};
  turn.spec.amplitude_range = {18.0, 26.0};  // radius
  turn.spec.angle_range = {0.85, 1.05};
  turn.spec.seed = config.seed + 1;
  turn.rank_values = {1, 3, 5};

  ScenarioConfig lane;
  lane.name = "lane_change_medium_speed";
  lane.spec.kind = SynthKind::lane_change;
  lane.spec.demo_count = 10;
  lane.spec.duration_range = {3.5, 4.5};
  lane.spec.amplitude_range = {3.0, 4.0};
  lane.spec.speed_range = {12.0, 18.0};
  lane.spec.seed = config.seed + 2;
  lane.rank_values = {1, 3, 5};

  config.scenarios = {turn, lane};
  config.join_scenarios = {
      {"low_speed_turn_chain", turn.name, 2, 5},
      {"high_speed_lane_change_chain", lane.name, 2, 5},
  };
  return config;
}

BenchConfig parse_bench_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bench config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("bench config: expected an object");

  BenchConfig config;
  config.seed = doc.value("seed", std::uint64_t{42});
  config.scenarios.clear();
  config.join_scenarios.clear();

  std::size_t index = 0;
  for (const auto& s : doc.value("scenarios", json::array())) {
    ScenarioConfig sc;
    sc.name = s.at("name").get<std::string>();
    sc.spec.kind = synth_kind_from_string(s.at("kind").get<std::string>());
    if (sc.spec.kind == SynthKind::custom_forcing) {
      throw std::invalid_argument(
          "bench config: custom_forcing requires a programmatic profile and "
          "cannot be named in a config file");
    }
    sc.spec.demo_count = s.value("q", 10);
    if (sc.spec.demo_count < 1) throw std::invalid_argument("bench config: q must be >= 1");
    if (s.contains("duration_range")) {
      sc.spec.duration_range = range_from(s["duration_range"], sc.name + ".duration_range");
    }
    if (s.contains("amplitude_range")) {
      sc.spec.amplitude_range = range_from(s["amplitude_range"], sc.name + ".amplitude_range");
    }
    if (s.contains("speed_range")) {
      sc.spec.speed_range = range_from(s["speed_range"], sc.name + ".speed_range");
    }
    if (s.contains("angle_range")) {
      sc.spec.angle_range = range_from(s["angle_range"], sc.name + ".angle_range");
    }
    sc.spec.noise_sd = s.value("noise_sd", 0.0);
    if (sc.spec.noise_sd < 0.0) {
      throw std::invalid_argument("bench config: noise_sd must be >= 0");
    }
    sc.spec.seed = s.value("seed", config.seed + 1 + index);
    if (s.contains("rank_values")) {
      sc.rank_values = s["rank_values"].get<std::vector<int>>();
    }
    if (sc.rank_values.empty()) {
      throw std::invalid_argument("bench config: rank_values must be non-empty");
    }
    for (int r : sc.rank_values) {
      if (r < 1 || r > sc.spec.demo_count) {
        throw std::invalid_argument("bench config: rank values must lie in [1, q]");
      }
    }
    std::sort(sc.rank_values.begin(), sc.rank_values.end());
    sc.kernel_count = s.value("kernels", 20);
    if (sc.kernel_count < 2) throw std::invalid_argument("bench config: kernels must be >= 2");
    config.scenarios.push_back(std::move(sc));
    ++index;
  }

  for (const auto& s : doc.value("join_scenarios", json::array())) {
    JoinScenarioConfig jc;
    jc.name = s.at("name").get<std::string>();
    jc.scenario = s.at("scenario").get<std::string>();
    jc.segments = s.value("segments", 2);
    jc.rank = s.value("rank", 5);
    if (jc.segments < 1) throw std::invalid_argument("bench config: segments must be >= 1");
    if (jc.rank < 1) throw std::invalid_argument("bench config: rank must be >= 1");
    const bool known = std::any_of(config.scenarios.begin(), config.scenarios.end(),
                                   [&](const auto& sc) { return sc.name == jc.scenario; });
    if (!known) {
      throw std::invalid_argument("bench config: join scenario `" + jc.name +
                                  "` references unknown scenario `" + jc.scenario + "`");
    }
    config.join_scenarios.push_back(std::move(jc));
  }
  return config;
}

std::vector<InitialCondition> make_chain_conditions(
    const std::string& id, const std::vector<Trajectory>& demos, int segments) {
  if (demos.empty()) throw std::invalid_argument("make_chain_conditions: no demos");
  if (segments < 1) throw std::invalid_argument("make_chain_conditions: segments must be >= 1");

  Vec2 displacement = Vec2::Zero();
  Vec2 exit_dir = Vec2::Zero();
  double duration = 0.0;
  for (const auto& raw : demos) {
    Trajectory demo = resample(normalize_frame(raw), kSamplesPerDemo);
    displacement += demo.points.back() - demo.points.front();
    exit_dir += demo.velocities->back().normalized();
    duration += demo.duration();
  }
  const auto q = static_cast<double>(demos.size());
  displacement /= q;
  duration /= q;
  const double exit_course = std::atan2(exit_dir.y(), exit_dir.x());

  std::vector<InitialCondition> conditions;
  Vec2 cursor = Vec2::Zero();
  for (int k = 0; k < segments; ++k) {
    const Eigen::Rotation2Dd rot(exit_course * static_cast<double>(k));
    InitialCondition c;
    c.id = id;
    c.duration = duration;
    c.start = cursor;
    c.goal = cursor + rot * displacement;
    cursor = c.goal;
    conditions.push_back(std::move(c));
  }
  return conditions;
}

BenchReport run_benchmark(const BenchConfig& config, const DynamicsParams& params) {
  json doc;
  doc["format"] = "mpseq-benchmark-report";
  doc["version"] = 1;
  doc["seed"] = config.seed;

  json scenario_echoes = json::array();
  for (const auto& sc : config.scenarios) scenario_echoes.push_back(scenario_echo(sc));
  json join_echoes = json::array();
  for (const auto& jc : config.join_scenarios) {
    json j;
    j["name"] = jc.name;
    j["scenario"] = jc.scenario;
    j["segments"] = jc.segments;
    j["rank"] = jc.rank;
    join_echoes.push_back(std::move(j));
  }
  json echo;
  echo["seed"] = config.seed;
  echo["scenarios"] = std::move(scenario_echoes);
  echo["join_scenarios"] = std::move(join_echoes);
  doc["config"] = std::move(echo);

  BenchReport report;
  bool gates = true;

  json representation = json::array();
  for (const auto& sc : config.scenarios) {
    const auto demos = synth_demos(sc.spec);
    json entry;
    entry["scenario"] = sc.name;
    entry["kind"] = to_string(sc.spec.kind);
    entry["q"] = static_cast<int>(demos.size());

    json rows = json::array();
    std::vector<DeviationStats> stats;
    LearnedMP last_mp;
    for (int rank : sc.rank_values) {
      const LearnedMP mp = train_type(sc.name, demos, sc.kernel_count, rank, params);
      const auto dev = representation_deviation(demos, mp, params);
      json row;
      row["rank"] = rank;
      row["position_deviation"] = dev.position;
      row["velocity_deviation"] = dev.velocity;
      rows.push_back(std::move(row));
      stats.push_back(dev);
      last_mp = mp;
    }
    entry["rows"] = std::move(rows);
    entry["singular_values_x"] = std::vector<double>(last_mp.singular_values_x.begin(),
                                                     last_mp.singular_values_x.end());
    entry["singular_values_y"] = std::vector<double>(last_mp.singular_values_y.begin(),
                                                     last_mp.singular_values_y.end());

    bool monotone = true;
    for (std::size_t i = 1; i < stats.size(); ++i) {
      monotone &= stats[i].position <= stats[i - 1].position + 1e-12;
      monotone &= stats[i].velocity <= stats[i - 1].velocity + 1e-12;
    }
    entry["monotone"] = monotone;
    gates &= monotone;
    representation.push_back(std::move(entry));

    // One regenerated trajectory per scenario for plotting, alongside the demo
    // it reproduces.
    {
      Trajectory demo0 = resample(normalize_frame(demos.front()), kSamplesPerDemo);
      AdjustmentSet adj;
      adj.start = demo0.points.front();
      adj.goal = demo0.points.back();
      adj.duration = demo0.duration();
      adj.s_x = last_mp.demo_s_x.row(0);
      adj.s_y = last_mp.demo_s_y.row(0);
      report.trajectories.emplace_back(sc.name + "_demo0", demo0);
      report.trajectories.emplace_back(sc.name + "_regen0",
                                       regenerate(last_mp, adj, params));
    }
  }

  json joining = json::array();
  for (const auto& jc : config.join_scenarios) {
    const auto it = std::find_if(config.scenarios.begin(), config.scenarios.end(),
                                 [&](const auto& sc) { return sc.name == jc.scenario; });
    if (it == config.scenarios.end()) {
      throw std::invalid_argument("run_benchmark: join scenario `" + jc.name +
                                  "` references unknown scenario `" + jc.scenario + "`");
    }
    const auto demos = synth_demos(it->spec);
    const int rank = std::min(jc.rank, static_cast<int>(demos.size()));
    MPLibrary lib;
    lib.mps.emplace(it->name, train_type(it->name, demos, it->kernel_count, rank, params));
    const auto conditions = make_chain_conditions(it->name, demos, jc.segments);

    const auto proposed = generate_sequence(lib, conditions, {}, params);
    const auto simple = simple_join(lib, conditions, {}, params);

    auto method_json = [](const SequenceResult& r) {
      json j;
      j["max_acceleration"] = r.report.max_acceleration;
      j["max_velocity_jump"] = r.report.max_velocity_jump();
      j["target_miss"] = r.report.target_miss;
      return j;
    };
    json entry;
    entry["scenario"] = jc.name;
    entry["corpus"] = jc.scenario;
    entry["segments"] = jc.segments;
    json conds = json::array();
    for (const auto& c : conditions) {
      conds.push_back({{"id", c.id},
                       {"duration", c.duration},
                       {"start", {c.start.x(), c.start.y()}},
                       {"goal", {c.goal.x(), c.goal.y()}}});
    }
    entry["conditions"] = std::move(conds);
    entry["proposed"] = method_json(proposed);
    entry["simple"] = method_json(simple);

    const double ratio =
        simple.report.max_acceleration > 0.0
            ? proposed.report.max_acceleration / simple.report.max_acceleration
            : 0.0;
    entry["acceleration_ratio"] = ratio;

    bool gate = true;
    if (simple.report.max_velocity_jump() >= 1.0) gate = ratio <= 0.10;
    for (double miss : proposed.report.target_miss) gate &= std::isfinite(miss);
    entry["smoothness_gate"] = gate;
    gates &= gate;
    joining.push_back(std::move(entry));

    report.trajectories.emplace_back(jc.name + "_proposed", proposed.trajectory);
    report.trajectories.emplace_back(jc.name + "_simple", simple.trajectory);
  }

  doc["representation"] = std::move(representation);
  doc["joining"] = std::move(joining);
  doc["gates_passed"] = gates;
  report.gates_passed = gates;
  report.json_text = doc.dump(2) + "\n";
  return report;
}

}  // namespace mpseq
