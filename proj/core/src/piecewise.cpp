#include "piecewise.hpp"

#include "mpseq/dynamics.hpp"
#include "mpseq/sequencer.hpp"

#include <cmath>
#include <stdexcept>

namespace mpseq::detail {

namespace {

double course_angle(const Vec2& velocity, const Vec2& displacement, double fallback) {
  if (velocity.norm() >= 1e-9) return std::atan2(velocity.y(), velocity.x());
  if (displacement.norm() >= 1e-9) return std::atan2(displacement.y(), displacement.x());
  return fallback;
}

}  // namespace

PiecewiseResult integrate_piecewise(const PiecewiseSpec& spec,
                                    const DynamicsParams& params) {
  if (spec.segments.empty()) throw std::invalid_argument("integrate_piecewise: no segments");
  if (spec.tau <= 0.0) throw std::invalid_argument("integrate_piecewise: tau must be positive");
  if (spec.steps_per_duration < 1) {
    throw std::invalid_argument("integrate_piecewise: need at least one step per duration");
  }

  const double tau = spec.tau;
  const int steps_per_segment =
      std::max(1, static_cast<int>(std::lround(static_cast<double>(spec.steps_per_duration) * tau)));

  PiecewiseResult out;
  const std::size_t total =
      spec.segments.size() * static_cast<std::size_t>(steps_per_segment) + 1;
  out.times.reserve(total);
  out.positions.reserve(total);
  out.velocities.reserve(total);
  out.accelerations.reserve(total);
  out.realized_angles.reserve(spec.segments.size());

  IntegratorState state;
  state.d = spec.segments.front().start;
  state.v = Vec2::Zero();
  state.r = state.d;
  state.z = 1.0;

  double segment_begin = 0.0;  // tau-scaled start time of the active segment
  double angle = 0.0;
  Vec2 prev_position = state.d;

  for (std::size_t k = 0; k < spec.segments.size(); ++k) {
    const auto& seg = spec.segments[k];
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument("integrate_piecewise: segment duration must be positive");
    }
    const double dt = seg.duration / static_cast<double>(spec.steps_per_duration);

    if (k > 0) {
      angle = course_angle(state.v, state.d - prev_position, angle);
      out.boundary_samples.push_back(out.times.size());
    } else {
      angle = 0.0;
    }
    out.realized_angles.push_back(angle);

    const auto wx = spec.weights_x->middleRows(seg.row_offset, seg.rows);
    const auto wy = spec.weights_y->middleRows(seg.row_offset, seg.rows);
    const auto sx = spec.s_x->segment(seg.row_offset, seg.rows);
    const auto sy = spec.s_y->segment(seg.row_offset, seg.rows);

    for (int i = 0; i < steps_per_segment; ++i) {
      const double t = segment_begin + static_cast<double>(i) * dt;
      const double t_norm = t / (tau * spec.total_duration);
      const double fx =
          forcing_time(wx, sx, *spec.bank, seg.row_offset, t_norm, state.z, spec.alpha_w);
      const double fy =
          forcing_time(wy, sy, *spec.bank, seg.row_offset, t_norm, state.z, spec.alpha_w);
      const Vec2 forcing = rotate_forcing(fx, fy, angle);

      const Vec2 vdot =
          tau * params.alpha_m * (params.beta_m * (state.r - state.d) - state.v) + forcing;
      out.times.push_back(t);
      out.positions.push_back(state.d);
      out.velocities.push_back(tau * state.v);
      out.accelerations.push_back(tau * vdot);

      prev_position = state.d;
      state = transform_step(state, forcing, params, state.r, tau, dt);
      // r ramps toward this segment's goal; the window test is implicit in the
      // loop bounds, so the rate applies for every in-segment step.
      state.r += (dt / (tau * seg.duration)) * (seg.goal - seg.start);
      state.z = canonical_step_logistic(state.z, params.alpha_z, tau,
                                        spec.total_duration, t, dt);
      state.t = t + dt;
    }
    segment_begin += tau * seg.duration;
  }

  // Final sample at t = tau*T'. The ramp has completed, so the residual
  // forcing is evaluated with the last segment's rows.
  {
    const auto& seg = spec.segments.back();
    const double t = segment_begin;
    const auto wx = spec.weights_x->middleRows(seg.row_offset, seg.rows);
    const auto wy = spec.weights_y->middleRows(seg.row_offset, seg.rows);
    const auto sx = spec.s_x->segment(seg.row_offset, seg.rows);
    const auto sy = spec.s_y->segment(seg.row_offset, seg.rows);
    const double t_norm = t / (tau * spec.total_duration);
    const double fx =
        forcing_time(wx, sx, *spec.bank, seg.row_offset, t_norm, state.z, spec.alpha_w);
    const double fy =
        forcing_time(wy, sy, *spec.bank, seg.row_offset, t_norm, state.z, spec.alpha_w);
    const Vec2 forcing = rotate_forcing(fx, fy, out.realized_angles.back());
    const Vec2 vdot =
        tau * params.alpha_m * (params.beta_m * (state.r - state.d) - state.v) + forcing;
    out.times.push_back(t);
    out.positions.push_back(state.d);
    out.velocities.push_back(tau * state.v);
    out.accelerations.push_back(tau * vdot);
  }
  return out;
}

}  // namespace mpseq::detail
