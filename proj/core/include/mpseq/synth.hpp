#pragma once

#include "mpseq/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mpseq {

enum class SynthKind { sharp_turn, lane_change, straight, custom_forcing };

SynthKind synth_kind_from_string(const std::string& name);
std::string to_string(SynthKind kind);

/// Synthetic demonstration generator. All randomized attributes are drawn
/// uniformly from the ranges below with a generator seeded by `seed`, so a
/// spec is fully deterministic. Ranges may be degenerate ([a, a]).
///
/// Kinds:
///  - lane_change: constant cruise speed along x, lateral quintic-smoothstep
///    offset of `amplitude` meters completed inside a randomized sub-window.
///  - sharp_turn: constant-curvature arc; `amplitude` is the radius, the turn
///    angle comes from angle_range, speed = radius*angle/duration.
///  - straight: constant cruise speed along x.
///  - custom_forcing: rolls out the transformation dynamics under `forcing`
///    toward `custom_goal` (API use only).
struct SynthSpec {
  SynthKind kind = SynthKind::lane_change;
  int demo_count = 10;  // Q
  std::array<double, 2> duration_range{3.5, 4.5};    // seconds
  std::array<double, 2> amplitude_range{3.0, 4.0};   // meters
  std::array<double, 2> speed_range{0.0, 0.0};       // m/s; 0,0 = kind default
  std::array<double, 2> angle_range{0.9, 1.1};       // radians (sharp_turn)
  double noise_sd = 0.0;  // meters
  std::uint64_t seed = 0;

  // custom_forcing only
  std::function<Vec2(double t, double duration)> forcing;
  Vec2 custom_goal = Vec2::Zero();
  DynamicsParams dynamics{};
};

/// Q trajectories in the MP frame (origin start, +x initial heading), sampled
/// at roughly 0.1 s with analytic velocities. Gaussian position noise with
/// sd `noise_sd` is added before the frame normalization pass. Deterministic
/// in the seed.
std::vector<Trajectory> synth_demos(const SynthSpec& spec);

}  // namespace mpseq
