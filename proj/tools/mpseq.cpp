// mpseq command-line front end: train motion-primitive types from synthetic
// or CSV demonstrations, regenerate single primitives under adjusted
// parameters, join primitives into sequences, and run the evaluation bench.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/validation error.

#include "mpseq/evalbench.hpp"
#include "mpseq/io.hpp"
#include "mpseq/learning.hpp"
#include "mpseq/metrics.hpp"
#include "mpseq/rollout.hpp"
#include "mpseq/sequencer.hpp"
#include "mpseq/synth.hpp"
#include "mpseq/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + ": `" + item + "`");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty value list for ") + what);
  return out;
}

mpseq::Vec2 parse_point(const std::string& text, const char* what) {
  const auto values = parse_double_list(text, what);
  if (values.size() != 2) throw UsageError(std::string(what) + " must be `x,y`");
  return {values[0], values[1]};
}

std::vector<mpseq::Vec2> parse_point_list(const std::string& text, const char* what) {
  std::vector<mpseq::Vec2> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    out.push_back(parse_point(item, what));
  }
  if (out.empty()) throw UsageError(std::string("empty value list for ") + what);
  return out;
}

struct TrainArgs {
  std::string synth_kind;
  std::string demo_dir;
  std::string id;
  std::string output;
  bool append = false;
  int q = 10;
  int kernels = 20;
  int rank = -1;  // -1: choose from the spectrum via --energy
  double energy = 0.95;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> duration_range;
  std::vector<double> amplitude_range;
  std::vector<double> speed_range;
  std::vector<double> angle_range;
};

std::array<double, 2> to_range(const std::vector<double>& v, const char* what,
                               std::array<double, 2> fallback) {
  if (v.empty()) return fallback;
  if (v.size() != 2 || v[0] > v[1]) {
    throw UsageError(std::string(what) + " must be `lo hi` with lo <= hi");
  }
  return {v[0], v[1]};
}

int cmd_train(const TrainArgs& args, const mpseq::DynamicsParams& params) {
  if (args.synth_kind.empty() == args.demo_dir.empty()) {
    throw UsageError("exactly one of --synth or --demos is required");
  }
  if (args.rank == 0 || args.rank < -1) throw UsageError("--j must be a positive integer");
  if (args.kernels < 2) throw UsageError("--n must be at least 2");
  if (args.energy <= 0.0 || args.energy > 1.0) throw UsageError("--energy must lie in (0, 1]");

  std::vector<mpseq::Trajectory> demos;
  std::string id = args.id;
  if (!args.synth_kind.empty()) {
    mpseq::SynthSpec spec;
    try {
      spec.kind = mpseq::synth_kind_from_string(args.synth_kind);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (spec.kind == mpseq::SynthKind::custom_forcing) {
      throw UsageError("custom_forcing is only available through the library API");
    }
    spec.demo_count = args.q;
    spec.noise_sd = args.noise;
    spec.seed = args.seed;
    spec.duration_range = to_range(args.duration_range, "--duration", spec.duration_range);
    spec.amplitude_range = to_range(args.amplitude_range, "--amplitude", spec.amplitude_range);
    spec.speed_range = to_range(args.speed_range, "--speed", spec.speed_range);
    spec.angle_range = to_range(args.angle_range, "--angle", spec.angle_range);
    if (spec.demo_count < 1) throw UsageError("--q must be at least 1");
    demos = mpseq::synth_demos(spec);
    if (id.empty()) id = args.synth_kind;
  } else {
    if (!fs::is_directory(args.demo_dir)) {
      throw std::runtime_error("demo directory not found: " + args.demo_dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.demo_dir)) {
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) demos.push_back(mpseq::read_trajectory_csv(f));
    if (demos.empty()) {
      throw std::runtime_error("no .csv demos found in " + args.demo_dir);
    }
    if (id.empty()) throw UsageError("--id is required with --demos");
  }

  int rank = args.rank;
  if (rank < 0) {
    // Pick the rank from the singular-value spectrum at the requested energy.
    auto forcing = mpseq::build_forcing_matrices(demos, params);
    const auto full = std::min<int>(static_cast<int>(demos.size()), mpseq::kSamplesPerDemo);
    const auto dx = mpseq::svd_decompose(forcing.x, full);
    const auto dy = mpseq::svd_decompose(forcing.y, full);
    rank = std::max(mpseq::suggest_rank(dx.spectrum, args.energy),
                    mpseq::suggest_rank(dy.spectrum, args.energy));
  }
  if (rank > static_cast<int>(demos.size())) {
    throw UsageError("--j must not exceed the demo count");
  }

  mpseq::TrainingDiagnostics diag;
  mpseq::LearnedMP mp = mpseq::train_type(id, demos, args.kernels, rank, params, &diag);

  mpseq::MPLibrary lib;
  if (args.append && fs::exists(args.output)) lib = mpseq::load_library(args.output);
  lib.mps.insert_or_assign(mp.id, mp);
  const auto violations = mpseq::validate_library(lib);
  if (!violations.empty()) {
    throw std::runtime_error("trained library failed validation:\n" +
                             mpseq::describe(violations));
  }
  mpseq::save_library(lib, args.output);

  std::cout << "trained `" << mp.id << "`: Q=" << demos.size() << " N=" << args.kernels
            << " J=" << rank << "\n";
  std::cout << "singular values x:";
  for (double s : mp.singular_values_x) std::cout << ' ' << s;
  std::cout << "\nsingular values y:";
  for (double s : mp.singular_values_y) std::cout << ' ' << s;
  std::cout << "\nfit residual rms x:";
  for (double r : diag.residual_rms_x) std::cout << ' ' << r;
  std::cout << "\nfit residual rms y:";
  for (double r : diag.residual_rms_y) std::cout << ' ' << r;
  std::cout << "\nwrote " << args.output << "\n";
  return 0;
}

struct RegenArgs {
  std::string lib;
  std::string id;
  std::string output;
  std::string goal;
  std::string s_x, s_y;
  double duration = 0.0;
  double tau = 1.0;
  std::string sweep_goal;
  std::string sweep_duration;
  std::string sweep_s;
};

int cmd_regen(const RegenArgs& args, const mpseq::DynamicsParams& params) {
  if (args.tau <= 0.0) throw UsageError("--tau must be positive");

  const mpseq::MPLibrary lib = mpseq::load_library(args.lib);
  const mpseq::LearnedMP* mp = lib.find(args.id);
  if (!mp) throw std::runtime_error("unknown MP id `" + args.id + "`");

  mpseq::AdjustmentSet base = mpseq::default_adjustment(*mp);
  base.tau = args.tau;
  if (!args.goal.empty()) base.goal = parse_point(args.goal, "--goal");
  if (args.duration != 0.0) {
    if (args.duration < 0.0) throw UsageError("--duration must be positive");
    base.duration = args.duration;
  }
  auto apply_s = [&](const std::string& text, mpseq::Vector& target, const char* what) {
    if (text.empty()) return;
    const auto values = parse_double_list(text, what);
    if (static_cast<int>(values.size()) != mp->basis_rows()) {
      throw UsageError(std::string(what) + " must list exactly J=" +
                       std::to_string(mp->basis_rows()) + " values");
    }
    target = Eigen::Map<const mpseq::Vector>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
  };
  apply_s(args.s_x, base.s_x, "--s-x");
  apply_s(args.s_y, base.s_y, "--s-y");

  for (const auto& w : mpseq::adjustment_warnings(*mp, base)) {
    std::cerr << "warning: " << w << "\n";
  }

  const int sweep_flags = (!args.sweep_goal.empty()) + (!args.sweep_duration.empty()) +
                          (!args.sweep_s.empty());
  if (sweep_flags > 1) throw UsageError("at most one sweep flag may be given");

  ordered_json manifest;
  manifest["id"] = args.id;
  ordered_json outputs = ordered_json::array();

  auto write_one = [&](const mpseq::Trajectory& traj, const fs::path& file,
                       const ordered_json& value) {
    mpseq::write_trajectory_csv(traj, file);
    ordered_json e;
    e["file"] = file.filename().string();
    e["value"] = value;
    outputs.push_back(std::move(e));
  };

  const fs::path prefix(args.output);
  auto numbered = [&](std::size_t i) {
    std::ostringstream os;
    os << prefix.string() << "_" << std::setw(3) << std::setfill('0') << i << ".csv";
    return fs::path(os.str());
  };

  if (sweep_flags == 0) {
    manifest["parameter"] = "none";
    write_one(mpseq::regenerate(*mp, base, params), prefix.string() + ".csv",
              ordered_json());
  } else if (!args.sweep_goal.empty()) {
    manifest["parameter"] = "goal";
    mpseq::SweepSpec spec;
    spec.kind = mpseq::SweepSpec::Kind::goal;
    spec.goals = parse_point_list(args.sweep_goal, "--sweep-goal");
    const auto trajs = mpseq::sweep(*mp, base, spec, params);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      write_one(trajs[i], numbered(i),
                ordered_json::array({spec.goals[i].x(), spec.goals[i].y()}));
    }
  } else if (!args.sweep_duration.empty()) {
    manifest["parameter"] = "duration";
    mpseq::SweepSpec spec;
    spec.kind = mpseq::SweepSpec::Kind::duration;
    spec.values = parse_double_list(args.sweep_duration, "--sweep-duration");
    for (double t : spec.values) {
      if (t <= 0.0) throw UsageError("--sweep-duration values must be positive");
    }
    const auto trajs = mpseq::sweep(*mp, base, spec, params);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      write_one(trajs[i], numbered(i), spec.values[i]);
    }
  } else {
    // --sweep-s axis:index:v1,v2,...
    manifest["parameter"] = "s";
    const auto first = args.sweep_s.find(':');
    const auto second = args.sweep_s.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw UsageError("--sweep-s must be `axis:index:v1,v2,...`");
    }
    mpseq::SweepSpec spec;
    spec.kind = mpseq::SweepSpec::Kind::s_coefficient;
    const std::string axis = args.sweep_s.substr(0, first);
    if (axis != "x" && axis != "y") throw UsageError("--sweep-s axis must be x or y");
    spec.axis = axis == "x" ? 0 : 1;
    try {
      spec.coefficient = std::stoi(args.sweep_s.substr(first + 1, second - first - 1));
    } catch (const std::exception&) {
      throw UsageError("--sweep-s index must be an integer");
    }
    if (spec.coefficient < 0 || spec.coefficient >= mp->basis_rows()) {
      throw UsageError("--sweep-s index must lie in [0, J)");
    }
    spec.values = parse_double_list(args.sweep_s.substr(second + 1), "--sweep-s");
    const auto trajs = mpseq::sweep(*mp, base, spec, params);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      write_one(trajs[i], numbered(i), spec.values[i]);
    }
  }

  const std::size_t output_count = outputs.size();
  manifest["outputs"] = std::move(outputs);
  const fs::path manifest_path(prefix.string() + "_manifest.json");
  mpseq::atomic_write(manifest_path, manifest.dump(2) + "\n");
  std::cout << "wrote " << output_count << " trajectory file(s) and "
            << manifest_path.string() << "\n";
  return 0;
}

struct JoinArgs {
  std::string lib;
  std::string conditions;
  std::string method = "both";
  std::string output;
  bool strict = false;
  double tau = 1.0;
};

ordered_json switch_report_json(const mpseq::SwitchReport& report) {
  ordered_json switches = ordered_json::array();
  for (const auto& s : report.switches) {
    switches.push_back({{"time", s.time},
                        {"velocity_jump", s.velocity_jump},
                        {"course_angle", s.course_angle}});
  }
  ordered_json j;
  j["max_acceleration"] = report.max_acceleration;
  j["max_velocity_jump"] = report.max_velocity_jump();
  j["target_miss"] = report.target_miss;
  j["switches"] = std::move(switches);
  return j;
}

int cmd_join(const JoinArgs& args, const mpseq::DynamicsParams& params) {
  if (args.tau <= 0.0) throw UsageError("--tau must be positive");

  const mpseq::MPLibrary lib = mpseq::load_library(args.lib);
  const auto conditions = mpseq::read_conditions(args.conditions);

  mpseq::SequenceOptions options;
  options.tau = args.tau;
  options.strict_start = args.strict;

  ordered_json report;
  report["conditions_file"] = args.conditions;
  report["segments"] = conditions.size();

  const fs::path prefix(args.output);
  const bool run_proposed = args.method == "proposed" || args.method == "both";
  const bool run_simple = args.method == "simple" || args.method == "both";

  if (run_proposed) {
    const auto result = mpseq::generate_sequence(lib, conditions, {}, params, options);
    mpseq::write_trajectory_csv(result.trajectory, prefix.string() + "_proposed.csv");
    report["proposed"] = switch_report_json(result.report);
  }
  if (run_simple) {
    const auto result = mpseq::simple_join(lib, conditions, {}, params, options);
    mpseq::write_trajectory_csv(result.trajectory, prefix.string() + "_simple.csv");
    report["simple"] = switch_report_json(result.report);
  }
  if (run_proposed && run_simple) {
    const double a_prop = report["proposed"]["max_acceleration"].get<double>();
    const double a_simp = report["simple"]["max_acceleration"].get<double>();
    report["acceleration_ratio"] = a_simp > 0.0 ? a_prop / a_simp : 0.0;
  }

  const fs::path report_path(prefix.string() + "_report.json");
  mpseq::atomic_write(report_path, report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct EvalArgs {
  std::string config;
  std::string output;
  std::string csv_dir;
  std::int64_t seed = -1;
};

int cmd_eval(const EvalArgs& args, const mpseq::DynamicsParams& params) {
  mpseq::BenchConfig config;
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw std::runtime_error("cannot open config file: " + args.config);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      config = mpseq::parse_bench_config(buf.str());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    config = mpseq::default_bench_config();
  }
  if (args.seed >= 0) {
    config.seed = static_cast<std::uint64_t>(args.seed);
    // Scenario seeds follow the top-level seed unless the config pinned them.
    if (args.config.empty()) {
      config = mpseq::default_bench_config();
      config.seed = static_cast<std::uint64_t>(args.seed);
      for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
        config.scenarios[i].spec.seed = config.seed + 1 + i;
      }
    }
  }

  const auto report = mpseq::run_benchmark(config, params);
  mpseq::atomic_write(args.output, report.json_text);
  std::cout << "wrote " << args.output << "\n";

  if (!args.csv_dir.empty()) {
    fs::create_directories(args.csv_dir);
    for (const auto& [name, traj] : report.trajectories) {
      mpseq::write_trajectory_csv(traj, fs::path(args.csv_dir) / (name + ".csv"));
    }
    std::cout << "wrote " << report.trajectories.size() << " trajectory file(s) to "
              << args.csv_dir << "\n";
  }
  if (!report.gates_passed) {
    std::cerr << "error: benchmark property gates failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion-primitive learning, regeneration and sequencing"};
  app.require_subcommand(1);

  mpseq::DynamicsParams params;
  double alpha_m = params.alpha_m;
  double alpha_z = params.alpha_z;
  app.add_option("--alpha-m", alpha_m, "spring constant (beta is alpha/4)");
  app.add_option("--alpha-z", alpha_z, "phase decay constant");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "learn one MP type into a library file");
  train_cmd->add_option("--synth", train.synth_kind,
                        "synthetic corpus kind (lane_change, sharp_turn, straight)");
  train_cmd->add_option("--demos", train.demo_dir, "directory of demo CSV files");
  train_cmd->add_option("--id", train.id, "type id (defaults to the synth kind)");
  train_cmd->add_option("--q", train.q, "synthetic demo count");
  train_cmd->add_option("--n", train.kernels, "kernels per basis row");
  train_cmd->add_option("--j", train.rank, "basis rank (omit to pick via --energy)");
  train_cmd->add_option("--energy", train.energy, "spectrum energy fraction for rank choice");
  train_cmd->add_option("--noise", train.noise, "position noise sd, meters");
  train_cmd->add_option("--seed", train.seed, "corpus seed");
  train_cmd->add_option("--duration", train.duration_range, "duration range `lo hi`")
      ->expected(2);
  train_cmd->add_option("--amplitude", train.amplitude_range, "amplitude range `lo hi`")
      ->expected(2);
  train_cmd->add_option("--speed", train.speed_range, "speed range `lo hi`")->expected(2);
  train_cmd->add_option("--angle", train.angle_range, "turn angle range `lo hi`, radians")
      ->expected(2);
  train_cmd->add_option("-o,--output", train.output, "library file to write")->required();
  train_cmd->add_flag("--append", train.append, "merge into an existing library");

  RegenArgs regen;
  auto* regen_cmd = app.add_subcommand("regen", "regenerate one MP under adjustments");
  regen_cmd->add_option("--lib", regen.lib, "library file")->required();
  regen_cmd->add_option("--id", regen.id, "MP type id")->required();
  regen_cmd->add_option("--goal", regen.goal, "goal `x,y` (default: demo mean)");
  regen_cmd->add_option("--duration", regen.duration, "duration, seconds (default: demo mean)");
  regen_cmd->add_option("--tau", regen.tau, "time-scaling factor");
  regen_cmd->add_option("--s-x", regen.s_x, "fine-tuning coefficients for x, comma separated");
  regen_cmd->add_option("--s-y", regen.s_y, "fine-tuning coefficients for y, comma separated");
  regen_cmd->add_option("--sweep-goal", regen.sweep_goal, "goal sweep `x,y;x,y;...`");
  regen_cmd->add_option("--sweep-duration", regen.sweep_duration, "duration sweep `a,b,...`");
  regen_cmd->add_option("--sweep-s", regen.sweep_s, "s sweep `axis:index:v1,v2,...`");
  regen_cmd->add_option("-o,--output", regen.output, "output prefix")->required();

  JoinArgs join;
  auto* join_cmd = app.add_subcommand("join", "generate an MP sequence from conditions");
  join_cmd->add_option("--lib", join.lib, "library file")->required();
  join_cmd->add_option("--conditions", join.conditions, "initial-conditions file")->required();
  join_cmd->add_option("--method", join.method, "joining method")
      ->check(CLI::IsMember({"proposed", "simple", "both"}));
  join_cmd->add_flag("--strict", join.strict, "error when starts disagree with prior goals");
  join_cmd->add_option("--tau", join.tau, "time-scaling factor");
  join_cmd->add_option("-o,--output", join.output, "output prefix")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "run the evaluation benchmark");
  eval_cmd->add_option("--config", eval.config, "benchmark config JSON");
  eval_cmd->add_option("--seed", eval.seed, "seed override");
  eval_cmd->add_option("--csv-dir", eval.csv_dir, "directory for per-trajectory CSVs");
  eval_cmd->add_option("-o,--output", eval.output, "report file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  params = mpseq::DynamicsParams::critically_damped(alpha_m, alpha_z);

  try {
    if (train_cmd->parsed()) return cmd_train(train, params);
    if (regen_cmd->parsed()) return cmd_regen(regen, params);
    if (join_cmd->parsed()) return cmd_join(join, params);
    if (eval_cmd->parsed()) return cmd_eval(eval, params);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
