#include "mpseq/sequencer.hpp"

#include "mpseq/dynamics.hpp"
#include "mpseq/metrics.hpp"
#include "mpseq/rollout.hpp"
#include "piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpseq {

namespace {

Vec2 interp_samples(const std::vector<double>& times, const std::vector<Vec2>& values,
                    double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1];
  const double t1 = times[i];
  const double frac = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
  return values[i - 1] + frac * (values[i] - values[i - 1]);
}

/// Builds the uniform-step output trajectory. When every segment shares one
/// duration the integrator samples already lie on a uniform grid and are
/// passed through; otherwise the samples are linearly resampled.
Trajectory assemble_trajectory(const std::vector<double>& times,
                               const std::vector<Vec2>& positions,
                               const std::vector<Vec2>& velocities,
                               const std::vector<Vec2>& accelerations,
                               bool uniform) {
  Trajectory out;
  const std::size_t n = times.size();
  if (uniform) {
    out.dt = n > 1 ? (times.back() - times.front()) / static_cast<double>(n - 1) : 0.0;
    out.points = positions;
    out.velocities = velocities;
    out.accelerations = accelerations;
    return out;
  }
  out.dt = (times.back() - times.front()) / static_cast<double>(n - 1);
  out.points.resize(n);
  out.velocities.emplace(n, Vec2::Zero());
  out.accelerations.emplace(n, Vec2::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i == n - 1) ? times.back() : out.dt * static_cast<double>(i);
    out.points[i] = interp_samples(times, positions, t);
    (*out.velocities)[i] = interp_samples(times, velocities, t);
    (*out.accelerations)[i] = interp_samples(times, accelerations, t);
  }
  return out;
}

double course_of(const Vec2& velocity, const Vec2& displacement, double fallback) {
  if (velocity.norm() >= 1e-9) return std::atan2(velocity.y(), velocity.x());
  if (displacement.norm() >= 1e-9) return std::atan2(displacement.y(), displacement.x());
  return fallback;
}

}  // namespace

SequencePlan plan_sequence(const MPLibrary& lib,
                           const std::vector<InitialCondition>& conditions,
                           const std::vector<std::optional<SegmentAdjust>>& s_overrides,
                           const SequenceOptions& options) {
  if (conditions.empty()) {
    throw std::invalid_argument("plan_sequence: need at least one condition");
  }
  if (!s_overrides.empty() && s_overrides.size() != conditions.size()) {
    throw std::invalid_argument("plan_sequence: s_overrides must match the condition count");
  }

  SequencePlan plan;
  plan.conditions = conditions;

  std::vector<const LearnedMP*> mps;
  mps.reserve(conditions.size());
  int total_rows = 0;
  for (std::size_t k = 0; k < conditions.size(); ++k) {
    const auto& c = conditions[k];
    const LearnedMP* mp = lib.find(c.id);
    if (!mp) throw std::invalid_argument("plan_sequence: unknown MP id `" + c.id + "`");
    if (!(c.duration > 0.0)) {
      throw std::invalid_argument("plan_sequence: segment " + std::to_string(k + 1) +
                                  " has non-positive duration");
    }
    if (k == 0) {
      plan.kernel_count = mp->kernel_count();
    } else if (mp->kernel_count() != plan.kernel_count) {
      throw std::invalid_argument(
          "plan_sequence: all MPs in a sequence must share one kernel count N");
    }
    mps.push_back(mp);
    total_rows += mp->basis_rows();
  }

  // Chain continuity: segment k starts where segment k-1 aims.
  for (std::size_t k = 1; k < plan.conditions.size(); ++k) {
    const Vec2 prev_goal = plan.conditions[k - 1].goal;
    const double gap = (plan.conditions[k].start - prev_goal).norm();
    if (options.strict_start && gap > 0.01) {
      throw std::invalid_argument("plan_sequence: segment " + std::to_string(k + 1) +
                                  " start disagrees with the previous goal by " +
                                  std::to_string(gap) + " m");
    }
    plan.conditions[k].start = prev_goal;
  }

  plan.total_duration = 0.0;
  for (const auto& c : plan.conditions) plan.total_duration += c.duration;

  plan.bank.rows = total_rows;
  plan.bank.cols = plan.kernel_count;
  plan.bank.centers.reserve(plan.bank.expected_size());
  plan.bank.widths.reserve(plan.bank.expected_size());
  plan.weights_x.resize(total_rows, plan.kernel_count);
  plan.weights_y.resize(total_rows, plan.kernel_count);
  plan.s_x.resize(total_rows);
  plan.s_y.resize(total_rows);
  plan.switch_angles.assign(plan.conditions.size(), 0.0);

  double offset = 0.0;
  int row = 0;
  for (std::size_t k = 0; k < plan.conditions.size(); ++k) {
    const LearnedMP& mp = *mps[k];
    const double duration = plan.conditions[k].duration;
    const int rank = mp.basis_rows();

    plan.segment_offsets.push_back(offset);
    plan.row_offsets.push_back(row);
    plan.segment_rows.push_back(rank);
    plan.forcing_scales.push_back(mp.forcing_scale);

    for (int j = 0; j < rank; ++j) {
      for (int i = 0; i < plan.kernel_count; ++i) {
        plan.bank.centers.push_back((duration * mp.bank.center(j, i) + offset) /
                                    plan.total_duration);
        plan.bank.widths.push_back(mp.bank.width(j, i) * plan.total_duration / duration);
      }
    }
    plan.weights_x.middleRows(row, rank) = mp.weights_x;
    plan.weights_y.middleRows(row, rank) = mp.weights_y;

    Vector sx = mp.mean_s_x();
    Vector sy = mp.mean_s_y();
    if (!s_overrides.empty() && s_overrides[k]) {
      if (s_overrides[k]->s_x.size() != rank || s_overrides[k]->s_y.size() != rank) {
        throw std::invalid_argument("plan_sequence: s override for segment " +
                                    std::to_string(k + 1) + " must have length J");
      }
      sx = s_overrides[k]->s_x;
      sy = s_overrides[k]->s_y;
    }
    plan.s_x.segment(row, rank) = sx;
    plan.s_y.segment(row, rank) = sy;

    offset += duration;
    row += rank;
  }
  return plan;
}

Vec2 sequence_goal_rate(const SequencePlan& plan, int segment, double t, double tau) {
  if (segment < 0 || segment >= plan.segment_count()) {
    throw std::invalid_argument("sequence_goal_rate: segment out of range");
  }
  const auto& c = plan.conditions[static_cast<std::size_t>(segment)];
  const double begin = tau * plan.segment_offsets[static_cast<std::size_t>(segment)];
  const double end = begin + tau * c.duration;
  if (t < begin || t >= end) return Vec2::Zero();
  return (c.goal - c.start) / (tau * c.duration);
}

double sequence_canonical_step(double z, double alpha_z, double tau,
                               double total_duration, double t, double dt_segment) {
  return canonical_step_logistic(z, alpha_z, tau, total_duration, t, dt_segment);
}

Vec2 rotate_forcing(double fx, double fy, double delta) {
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  return Vec2(c * fx - s * fy, s * fx + c * fy);
}

double SwitchReport::max_velocity_jump() const {
  double m = 0.0;
  for (const auto& s : switches) m = std::max(m, s.velocity_jump);
  return m;
}

SequenceResult generate_sequence(const MPLibrary& lib,
                                 const std::vector<InitialCondition>& conditions,
                                 const std::vector<std::optional<SegmentAdjust>>& s_overrides,
                                 const DynamicsParams& params,
                                 const SequenceOptions& options) {
  SequencePlan plan = plan_sequence(lib, conditions, s_overrides, options);

  // Per-MP forcing scales fold into the coefficients so one spec-level
  // multiplier (1) serves mixed-type sequences.
  Vector sx = plan.s_x;
  Vector sy = plan.s_y;
  for (int k = 0; k < plan.segment_count(); ++k) {
    const double scale = plan.forcing_scales[static_cast<std::size_t>(k)];
    sx.segment(plan.row_offsets[k], plan.segment_rows[k]) *= scale;
    sy.segment(plan.row_offsets[k], plan.segment_rows[k]) *= scale;
  }

  detail::PiecewiseSpec spec;
  spec.bank = &plan.bank;
  spec.weights_x = &plan.weights_x;
  spec.weights_y = &plan.weights_y;
  spec.s_x = &sx;
  spec.s_y = &sy;
  spec.total_duration = plan.total_duration;
  spec.alpha_w = 1.0;
  spec.tau = options.tau;
  spec.steps_per_duration = 100;
  for (int k = 0; k < plan.segment_count(); ++k) {
    const auto& c = plan.conditions[static_cast<std::size_t>(k)];
    spec.segments.push_back(
        {plan.row_offsets[k], plan.segment_rows[k], c.start, c.goal, c.duration});
  }

  const auto raw = detail::integrate_piecewise(spec, params);

  SequenceResult result;
  bool uniform = true;
  for (std::size_t k = 1; k < plan.conditions.size(); ++k) {
    uniform &= plan.conditions[k].duration == plan.conditions[0].duration;
  }
  result.trajectory = assemble_trajectory(raw.times, raw.positions, raw.velocities,
                                          raw.accelerations, uniform);

  for (std::size_t k = 0; k < raw.realized_angles.size(); ++k) {
    plan.switch_angles[k] = raw.realized_angles[k];
  }
  for (std::size_t s = 0; s < raw.boundary_samples.size(); ++s) {
    const std::size_t b = raw.boundary_samples[s];
    SwitchRecord rec;
    rec.time = raw.times[b];
    rec.course_angle = raw.realized_angles[s + 1];
    double jump = 0.0;
    if (b > 0) jump = std::max(jump, (raw.velocities[b] - raw.velocities[b - 1]).norm());
    if (b + 1 < raw.velocities.size()) {
      jump = std::max(jump, (raw.velocities[b + 1] - raw.velocities[b]).norm());
    }
    rec.velocity_jump = jump;
    result.report.switches.push_back(rec);
  }

  std::vector<Vec2> targets;
  for (const auto& c : plan.conditions) targets.push_back(c.goal);
  const auto metrics = join_metrics(result.trajectory, targets);
  result.report.max_acceleration = metrics.max_acceleration;
  result.report.target_miss = metrics.target_miss;
  return result;
}

SequenceResult simple_join(const MPLibrary& lib,
                           const std::vector<InitialCondition>& conditions,
                           const std::vector<std::optional<SegmentAdjust>>& s_overrides,
                           const DynamicsParams& params,
                           const SequenceOptions& options) {
  SequencePlan plan = plan_sequence(lib, conditions, s_overrides, options);

  std::vector<double> times;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  std::vector<Vec2> accelerations;
  SequenceResult result;

  Vec2 cursor = plan.conditions.front().start;
  Vec2 exit_velocity = Vec2::Zero();
  double angle = 0.0;
  double time_offset = 0.0;

  for (int k = 0; k < plan.segment_count(); ++k) {
    const auto& c = plan.conditions[static_cast<std::size_t>(k)];
    const LearnedMP& mp = *lib.find(c.id);

    AdjustmentSet adj;
    adj.duration = c.duration;
    adj.tau = options.tau;
    adj.s_x = plan.s_x.segment(plan.row_offsets[k], plan.segment_rows[k]);
    adj.s_y = plan.s_y.segment(plan.row_offsets[k], plan.segment_rows[k]);

    Eigen::Rotation2Dd rot(0.0);
    if (k == 0) {
      adj.start = c.start;
      adj.goal = c.goal;
    } else {
      angle = course_of(exit_velocity, Vec2::Zero(), angle);
      rot = Eigen::Rotation2Dd(angle);
      adj.start = Vec2::Zero();
      adj.goal = rot.inverse() * (c.goal - cursor);
    }
    plan.switch_angles[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : angle;

    Trajectory seg = regenerate(mp, adj, params);

    if (k > 0) {
      SwitchRecord rec;
      rec.time = time_offset;
      rec.course_angle = angle;
      rec.velocity_jump = exit_velocity.norm();  // the next segment restarts from rest
      result.report.switches.push_back(rec);
    }

    const std::size_t first = k == 0 ? 0 : 1;  // boundary sample kept once
    for (std::size_t i = first; i < seg.points.size(); ++i) {
      const Vec2 p = k == 0 ? seg.points[i] : Vec2(cursor + rot * seg.points[i]);
      const Vec2 v = k == 0 ? (*seg.velocities)[i] : Vec2(rot * (*seg.velocities)[i]);
      const Vec2 a = k == 0 ? (*seg.accelerations)[i] : Vec2(rot * (*seg.accelerations)[i]);
      times.push_back(time_offset + seg.time_at(i));
      positions.push_back(p);
      velocities.push_back(v);
      accelerations.push_back(a);
    }

    exit_velocity = velocities.back();
    cursor = positions.back();
    time_offset += options.tau * c.duration;
  }

  bool uniform = true;
  for (std::size_t k = 1; k < plan.conditions.size(); ++k) {
    uniform &= plan.conditions[k].duration == plan.conditions[0].duration;
  }
  result.trajectory =
      assemble_trajectory(times, positions, velocities, accelerations, uniform);

  std::vector<Vec2> targets;
  for (const auto& c : plan.conditions) targets.push_back(c.goal);
  const auto metrics = join_metrics(result.trajectory, targets);
  result.report.max_acceleration = metrics.max_acceleration;
  result.report.target_miss = metrics.target_miss;
  return result;
}

}  // namespace mpseq
