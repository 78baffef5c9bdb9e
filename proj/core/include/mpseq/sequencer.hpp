#pragma once

#include "mpseq/types.hpp"

#include <optional>
#include <vector>

namespace mpseq {

/// Per-segment fine-tuning override used in place of the type's demo-mean
/// coefficients.
struct SegmentAdjust {
  Vector s_x;
  Vector s_y;
};

/// Resolved plan for one MP sequence: a unified kernel bank whose segment-k
/// rows are the type's kernels rescaled into segment k's share of [0,1]
/// (center mu' = (T_k*mu + sum_{l<k} T_l)/T', width p' = p*T'/T_k), the
/// block-concatenated weight matrices, and the fine-tuning coefficients per
/// segment. Switch angles for k > 0 are realized during generation.
struct SequencePlan {
  std::vector<InitialCondition> conditions;  // starts chained onto prior goals
  double total_duration = 0.0;               // T' = sum T_k
  KernelBank bank;                           // sum_k J_k rows
  Matrix weights_x;                          // sum_k J_k x N
  Matrix weights_y;
  Vector s_x;  // sum_k J_k
  Vector s_y;
  std::vector<double> switch_angles;    // radians; [0] = 0
  std::vector<double> segment_offsets;  // start time of each segment, seconds
  std::vector<int> row_offsets;         // first bank row per segment
  std::vector<int> segment_rows;        // J_k per segment
  std::vector<double> forcing_scales;   // per segment, applied at generation
  int kernel_count = 0;  // N, shared by every segment

  int segment_count() const { return static_cast<int>(conditions.size()); }
};

struct SequenceOptions {
  double tau = 1.0;
  /// When set, a segment whose stated start disagrees with the previous goal
  /// by more than 1 cm is an error instead of being chained silently.
  bool strict_start = false;
};

/// Validates the conditions against the library and lays out the unified
/// kernel bank, weights and fine-tuning coefficients. Unknown ids and
/// non-positive durations are errors; all referenced MPs must share one
/// kernel count N.
SequencePlan plan_sequence(const MPLibrary& lib,
                           const std::vector<InitialCondition>& conditions,
                           const std::vector<std::optional<SegmentAdjust>>& s_overrides = {},
                           const SequenceOptions& options = {});

/// Piecewise goal rate: inside segment k's half-open window returns
/// (g_k - b_k)/(tau*T_k); at a boundary instant the later segment owns the
/// time, and outside all windows the rate is zero.
Vec2 sequence_goal_rate(const SequencePlan& plan, int segment, double t,
                        double tau = 1.0);

/// Phase step over the whole sequence: the single-MP logistic law with the
/// total duration and the active segment's step size.
double sequence_canonical_step(double z, double alpha_z, double tau,
                               double total_duration, double t, double dt_segment);

/// Rotates a forcing vector by the course angle delta.
Vec2 rotate_forcing(double fx, double fy, double delta);

/// Velocity-change record at one switch instant.
struct SwitchRecord {
  double time = 0.0;            // seconds
  double velocity_jump = 0.0;   // m/s
  double course_angle = 0.0;    // radians, frozen at segment entry
};

struct SwitchReport {
  std::vector<SwitchRecord> switches;
  double max_acceleration = 0.0;    // central differences of output positions
  std::vector<double> target_miss;  // min distance to each condition goal
  double max_velocity_jump() const;
};

struct SequenceResult {
  Trajectory trajectory;
  SwitchReport report;
};

/// Single continuous integration over [0, tau*T'] in the frame of the first
/// MP: the state is never reset at switch points, each segment's forcing is
/// evaluated through the unified bank with that segment's weights and
/// coefficients, rotated by the course angle realized at segment entry.
SequenceResult generate_sequence(const MPLibrary& lib,
                                 const std::vector<InitialCondition>& conditions,
                                 const std::vector<std::optional<SegmentAdjust>>& s_overrides,
                                 const DynamicsParams& params,
                                 const SequenceOptions& options = {});

/// Baseline joining: each segment regenerated independently from the previous
/// terminal position with velocity reset to zero, rotated to the realized exit
/// course, and concatenated. The report captures the velocity jump at every
/// switch.
SequenceResult simple_join(const MPLibrary& lib,
                           const std::vector<InitialCondition>& conditions,
                           const std::vector<std::optional<SegmentAdjust>>& s_overrides,
                           const DynamicsParams& params,
                           const SequenceOptions& options = {});

}  // namespace mpseq
