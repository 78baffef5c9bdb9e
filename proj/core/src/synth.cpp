#include "mpseq/synth.hpp"

#include "mpseq/dynamics.hpp"
#include "mpseq/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mpseq {

namespace {

double quintic_smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

double quintic_smoothstep_dot(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (u - 1.0) * (u - 1.0);
}

double draw(std::mt19937_64& rng, const std::array<double, 2>& range) {
  if (range[0] > range[1]) throw std::invalid_argument("synth_demos: empty range");
  if (range[0] == range[1]) return range[0];
  return std::uniform_real_distribution<double>(range[0], range[1])(rng);
}

int sample_count(double duration) {
  const auto intervals = std::max<long>(20, std::lround(duration / 0.1));
  return static_cast<int>(intervals) + 1;
}

Trajectory lane_change_demo(std::mt19937_64& rng, const SynthSpec& spec) {
  const double duration = draw(rng, spec.duration_range);
  const double amplitude = draw(rng, spec.amplitude_range);
  const auto speed_range =
      spec.speed_range[1] > 0.0 ? spec.speed_range : std::array<double, 2>{12.0, 18.0};
  const double speed = draw(rng, speed_range);
  const double window_begin = draw(rng, {0.08, 0.2});
  const double window_end = draw(rng, {0.8, 0.92});
  const double window = window_end - window_begin;

  const int n = sample_count(duration);
  Trajectory out;
  out.dt = duration / static_cast<double>(n - 1);
  out.velocities.emplace();
  for (int i = 0; i < n; ++i) {
    const double t = out.dt * static_cast<double>(i);
    const double u = (t / duration - window_begin) / window;
    out.points.emplace_back(speed * t, amplitude * quintic_smoothstep(u));
    out.velocities->emplace_back(
        speed, amplitude * quintic_smoothstep_dot(u) / (window * duration));
  }
  return out;
}

Trajectory sharp_turn_demo(std::mt19937_64& rng, const SynthSpec& spec) {
  const double duration = draw(rng, spec.duration_range);
  const double radius = draw(rng, spec.amplitude_range);
  const double angle = draw(rng, spec.angle_range);
  const double speed = radius * angle / duration;

  const int n = sample_count(duration);
  Trajectory out;
  out.dt = duration / static_cast<double>(n - 1);
  out.velocities.emplace();
  for (int i = 0; i < n; ++i) {
    const double t = out.dt * static_cast<double>(i);
    const double heading = speed * t / radius;
    out.points.emplace_back(radius * std::sin(heading), radius * (1.0 - std::cos(heading)));
    out.velocities->emplace_back(speed * std::cos(heading), speed * std::sin(heading));
  }
  return out;
}

Trajectory straight_demo(std::mt19937_64& rng, const SynthSpec& spec) {
  const double duration = draw(rng, spec.duration_range);
  const auto speed_range =
      spec.speed_range[1] > 0.0 ? spec.speed_range : std::array<double, 2>{12.0, 18.0};
  const double speed = draw(rng, speed_range);

  const int n = sample_count(duration);
  Trajectory out;
  out.dt = duration / static_cast<double>(n - 1);
  out.velocities.emplace();
  for (int i = 0; i < n; ++i) {
    out.points.emplace_back(speed * out.dt * static_cast<double>(i), 0.0);
    out.velocities->emplace_back(speed, 0.0);
  }
  return out;
}

Trajectory custom_forcing_demo(std::mt19937_64& rng, const SynthSpec& spec) {
  if (!spec.forcing) {
    throw std::invalid_argument("synth_demos: custom_forcing requires a forcing profile");
  }
  const double duration = draw(rng, spec.duration_range);
  const int n = sample_count(duration);
  const double dt = duration / static_cast<double>(n - 1);
  const DynamicsParams& params = spec.dynamics;

  Trajectory out;
  out.dt = dt;
  out.velocities.emplace();
  out.accelerations.emplace();

  IntegratorState state;
  state.r = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    const Vec2 f = spec.forcing(t, duration);
    const Vec2 vdot =
        params.alpha_m * (params.beta_m * (state.r - state.d) - state.v) + f;
    out.points.push_back(state.d);
    out.velocities->push_back(state.v);
    out.accelerations->push_back(vdot);
    if (i + 1 < n) {
      state = transform_step(state, f, params, state.r, 1.0, dt);
      state.r = goal_step(state.r, Vec2::Zero(), spec.custom_goal, duration, 1.0, t, dt);
    }
  }
  return out;
}

}  // namespace

SynthKind synth_kind_from_string(const std::string& name) {
  if (name == "sharp_turn") return SynthKind::sharp_turn;
  if (name == "lane_change") return SynthKind::lane_change;
  if (name == "straight") return SynthKind::straight;
  if (name == "custom_forcing") return SynthKind::custom_forcing;
  throw std::invalid_argument("unknown scenario kind `" + name + "`");
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::sharp_turn: return "sharp_turn";
    case SynthKind::lane_change: return "lane_change";
    case SynthKind::straight: return "straight";
    case SynthKind::custom_forcing: return "custom_forcing";
  }
  return "unknown";
}

std::vector<Trajectory> synth_demos(const SynthSpec& spec) {
  if (spec.demo_count < 1) throw std::invalid_argument("synth_demos: demo count must be >= 1");
  if (spec.noise_sd < 0.0) throw std::invalid_argument("synth_demos: noise sd must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(spec.demo_count));
  for (int q = 0; q < spec.demo_count; ++q) {
    Trajectory demo;
    switch (spec.kind) {
      case SynthKind::lane_change: demo = lane_change_demo(rng, spec); break;
      case SynthKind::sharp_turn: demo = sharp_turn_demo(rng, spec); break;
      case SynthKind::straight: demo = straight_demo(rng, spec); break;
      case SynthKind::custom_forcing: demo = custom_forcing_demo(rng, spec); break;
    }
    if (spec.noise_sd > 0.0) {
      std::normal_distribution<double> noise(0.0, spec.noise_sd);
      for (auto& p : demo.points) p += Vec2(noise(rng), noise(rng));
      // Analytic derivatives no longer match the perturbed positions.
      demo.velocities.reset();
      demo.accelerations.reset();
      Trajectory smoothed = resample(demo, static_cast<int>(demo.points.size()));
      demo.velocities = smoothed.velocities;
    }
    out.push_back(normalize_frame(demo));
  }
  return out;
}

}  // namespace mpseq
