#pragma once

#include "mpseq/types.hpp"

#include <utility>
#include <vector>

namespace mpseq {

/// Pooled mean absolute deviations between paired samples.
struct DeviationStats {
  double position = 0.0;  // meters
  double velocity = 0.0;  // m/s
};

/// Mean Euclidean deviation pooled over every sample of every pair. Both
/// members of a pair must have the same sample count and carry velocities.
DeviationStats pooled_deviation(
    const std::vector<std::pair<Trajectory, Trajectory>>& pairs);

/// Regenerates every training demo with its stored fine-tuning coefficients
/// and the demo's own start/goal/duration, then pools the deviations. The
/// demos must be the ones the MP was trained on (demo count matches).
DeviationStats representation_deviation(const std::vector<Trajectory>& demos,
                                        const LearnedMP& mp,
                                        const DynamicsParams& params);

/// Maximum central-difference acceleration magnitude and the minimum distance
/// from the trajectory to each target point.
struct JoinMetrics {
  double max_acceleration = 0.0;
  std::vector<double> target_miss;
};
JoinMetrics join_metrics(const Trajectory& traj, const std::vector<Vec2>& targets);

}  // namespace mpseq
