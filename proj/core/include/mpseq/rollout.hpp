#pragma once

#include "mpseq/types.hpp"

#include <string>
#include <vector>

namespace mpseq {

/// Adjustment with demo-derived defaults: mean fine-tuning coefficients, mean
/// duration, origin start, mean demo goal.
AdjustmentSet default_adjustment(const LearnedMP& mp);

/// Integrates the learned MP under the given adjustment from d = start,
/// v = 0, r = start, z = 1 up to t = tau*duration at step duration/steps.
/// The output carries steps*tau + 1 samples including both endpoints, with
/// velocities and accelerations from the integrator.
Trajectory regenerate(const LearnedMP& mp, const AdjustmentSet& adj,
                      const DynamicsParams& params, int steps = 100);

/// Non-fatal notes about an adjustment, currently fine-tuning coefficients
/// more than three standard deviations outside the training cloud.
std::vector<std::string> adjustment_warnings(const LearnedMP& mp,
                                             const AdjustmentSet& adj);

/// One regeneration per value with the other adjustment fields held fixed.
struct SweepSpec {
  enum class Kind { goal, duration, s_coefficient };
  Kind kind = Kind::goal;
  std::vector<Vec2> goals;          // kind == goal
  std::vector<double> values;       // kind == duration or s_coefficient
  int axis = 0;                     // s_coefficient: 0 = x, 1 = y
  int coefficient = 0;              // s_coefficient: basis row index
};
std::vector<Trajectory> sweep(const LearnedMP& mp, const AdjustmentSet& base,
                              const SweepSpec& spec, const DynamicsParams& params);

}  // namespace mpseq
