#pragma once

#include "mpseq/types.hpp"

namespace mpseq {

/// Builds `rows` identical rows of `count` Gaussian kernels with centers
/// equally spaced on normalized time [0,1]. Widths are chosen so adjacent
/// kernels intersect at activation 0.5; the last kernel copies its
/// neighbour's width. Throws std::invalid_argument for count < 2 or rows < 1.
KernelBank make_kernel_bank(int count, int rows);

/// Activations of one kernel row at normalized time t_norm:
/// element i is exp(-p_i * (t_norm - mu_i)^2).
Vector kernel_activations(const KernelBank& bank, int row, double t_norm);

/// Explicit Euler step of the exponential phase decay z_dot = -tau*alpha_z*z.
double canonical_step_exponential(double z, double alpha_z, double tau, double dt);

/// Euler step of the logistic-tail phase law used by the time-indexed forcing.
/// The derivative is -alpha_z * e^a / (1+e^a)^2 with a = alpha_z*(tau*T - t)/dt,
/// so z stays near 1 for most of the rollout and dips only close to t = tau*T.
double canonical_step_logistic(double z, double alpha_z, double tau,
                               double total_duration, double t, double dt);

/// Euler step of the moving goal: r ramps linearly from start to goal over
/// [0, tau*duration) at rate (goal-start)/(tau*duration) and then holds, so
/// after duration/dt steps at tau=1 it has advanced by the full displacement.
Vec2 goal_step(const Vec2& r, const Vec2& start, const Vec2& goal,
               double duration, double tau, double t, double dt);

/// Time-indexed forcing term for one axis: the row block
/// [row_offset, row_offset+s.size()) of `bank` is evaluated at t_norm, each
/// row's weighted kernel average is scaled by its fine-tuning coefficient,
/// and the sum is gated by z and alpha_w. Row j of `weights` pairs with bank
/// row row_offset+j. Kernel-sum denominators are floored at 1e-300.
double forcing_time(const Eigen::Ref<const Matrix>& weights,
                    const Eigen::Ref<const Vector>& s, const KernelBank& bank,
                    int row_offset, double t_norm, double z, double alpha_w);

inline double forcing_time(const Eigen::Ref<const Matrix>& weights,
                           const Eigen::Ref<const Vector>& s,
                           const KernelBank& bank, double t_norm, double z,
                           double alpha_w) {
  return forcing_time(weights, s, bank, 0, t_norm, z, alpha_w);
}

/// Phase-indexed forcing of the single-demo formulation: normalized weighted
/// sum of Gaussians evaluated at the phase value z, multiplied by z.
double forcing_phase(const Vector& weights, const KernelBank& bank_z, double z);

/// Semi-implicit Euler step of the critically damped transformation system:
/// v is updated first, then d uses the updated v. r is the current moving
/// goal; z and t are left to the caller's canonical/goal steps.
IntegratorState transform_step(const IntegratorState& state, const Vec2& forcing,
                               const DynamicsParams& params, const Vec2& goal,
                               double tau, double dt);

}  // namespace mpseq
