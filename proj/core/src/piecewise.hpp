#pragma once

// Internal piecewise integrator shared by rollout and sequencer. One
// continuous state is integrated across all segments; each segment evaluates
// its own weight rows against the shared kernel bank and rotates the forcing
// by the course angle realized at segment entry.

#include "mpseq/types.hpp"

#include <vector>

namespace mpseq::detail {

struct SegmentSpec {
  int row_offset = 0;  // first row of the shared bank/weight matrices
  int rows = 0;        // J_k
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  double duration = 0.0;  // T_k, seconds
};

struct PiecewiseSpec {
  const KernelBank* bank = nullptr;
  const Matrix* weights_x = nullptr;
  const Matrix* weights_y = nullptr;
  const Vector* s_x = nullptr;
  const Vector* s_y = nullptr;
  std::vector<SegmentSpec> segments;
  double total_duration = 0.0;  // T', seconds
  double alpha_w = 1.0;
  double tau = 1.0;
  int steps_per_duration = 100;  // dt_k = T_k / steps_per_duration
};

struct PiecewiseResult {
  std::vector<double> times;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;     // d_dot = tau * v
  std::vector<Vec2> accelerations;  // d_ddot = tau * v_dot
  std::vector<std::size_t> boundary_samples;  // sample index entering segment k>0
  std::vector<double> realized_angles;        // per segment; [0] = 0
};

PiecewiseResult integrate_piecewise(const PiecewiseSpec& spec,
                                    const DynamicsParams& params);

}  // namespace mpseq::detail
