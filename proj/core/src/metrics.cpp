#include "mpseq/metrics.hpp"

#include "mpseq/learning.hpp"
#include "mpseq/rollout.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mpseq {

DeviationStats pooled_deviation(
    const std::vector<std::pair<Trajectory, Trajectory>>& pairs) {
  double pos_sum = 0.0;
  double vel_sum = 0.0;
  std::size_t count = 0;
  for (const auto& [a, b] : pairs) {
    if (a.points.size() != b.points.size()) {
      throw std::invalid_argument("pooled_deviation: sample-count mismatch");
    }
    if (!a.velocities || !b.velocities) {
      throw std::invalid_argument("pooled_deviation: velocities required");
    }
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      pos_sum += (a.points[i] - b.points[i]).norm();
      vel_sum += ((*a.velocities)[i] - (*b.velocities)[i]).norm();
      ++count;
    }
  }
  if (count == 0) return {};
  return {pos_sum / static_cast<double>(count), vel_sum / static_cast<double>(count)};
}

DeviationStats representation_deviation(const std::vector<Trajectory>& demos,
                                        const LearnedMP& mp,
                                        const DynamicsParams& params) {
  if (static_cast<int>(demos.size()) != mp.demo_count()) {
    throw std::invalid_argument(
        "representation_deviation: demo count does not match the trained MP");
  }

  std::vector<std::pair<Trajectory, Trajectory>> pairs;
  pairs.reserve(demos.size());
  for (std::size_t q = 0; q < demos.size(); ++q) {
    Trajectory demo = resample(normalize_frame(demos[q]), kSamplesPerDemo);

    AdjustmentSet adj;
    adj.start = demo.points.front();
    adj.goal = demo.points.back();
    adj.duration = demo.duration();
    adj.s_x = mp.demo_s_x.row(static_cast<Eigen::Index>(q));
    adj.s_y = mp.demo_s_y.row(static_cast<Eigen::Index>(q));
    Trajectory regen = regenerate(mp, adj, params);

    // The integrator grid is finer than the demo grid; sample it at the
    // demo's own times so the pairs align.
    Trajectory aligned;
    aligned.dt = demo.dt;
    aligned.velocities.emplace();
    for (std::size_t i = 0; i < demo.points.size(); ++i) {
      const double t = demo.time_at(i);
      aligned.points.push_back(regen.position_at(t));
      aligned.velocities->push_back(regen.velocity_at(t));
    }
    pairs.emplace_back(std::move(demo), std::move(aligned));
  }
  return pooled_deviation(pairs);
}

JoinMetrics join_metrics(const Trajectory& traj, const std::vector<Vec2>& targets) {
  if (traj.points.size() < 3) {
    throw std::invalid_argument("join_metrics: need at least 3 samples");
  }
  if (!(traj.dt > 0.0)) throw std::invalid_argument("join_metrics: dt must be positive");

  JoinMetrics out;
  for (std::size_t i = 1; i + 1 < traj.points.size(); ++i) {
    const Vec2 a =
        (traj.points[i + 1] - 2.0 * traj.points[i] + traj.points[i - 1]) / (traj.dt * traj.dt);
    out.max_acceleration = std::max(out.max_acceleration, a.norm());
  }
  out.target_miss.reserve(targets.size());
  for (const auto& target : targets) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : traj.points) best = std::min(best, (p - target).norm());
    out.target_miss.push_back(best);
  }
  return out;
}

}  // namespace mpseq
