#pragma once

#include "mpseq/types.hpp"

#include <string>
#include <vector>

namespace mpseq {

/// Resamples to `samples` points at uniform spacing over the original time
/// span, interpolating positions linearly. Velocities and accelerations are
/// recomputed by central finite differences at the new step (one-sided at the
/// endpoints).
Trajectory resample(const Trajectory& traj, int samples);

/// Expresses a trajectory in the MP frame: the first sample moves to the
/// origin and the initial heading is rotated onto +x. Heading comes from the
/// initial velocity when available and significant, otherwise from the first
/// displacement that is.
Trajectory normalize_frame(const Trajectory& traj);

/// Per-axis forcing values a demonstration implies, one per sample:
///   f(t) = a(t)/tau^2 - alpha_m*(beta_m*(r(t) - p(t)) - v(t))
/// with r(t) the linear goal ramp over the demo's own timeline. The demo must
/// carry velocities and accelerations (resample provides them).
struct AxisSignals {
  Vector x;
  Vector y;
};
AxisSignals inverse_forcing(const Trajectory& demo, const DynamicsParams& params,
                            const Vec2& start, const Vec2& goal, double duration,
                            double tau = 1.0);

/// Stacked forcing targets, one row per demonstration.
struct ForcingMatrix {
  Matrix values;  // Q x C
  int demo_count() const { return static_cast<int>(values.rows()); }
  int sample_count() const { return static_cast<int>(values.cols()); }
};

/// Builds the per-axis forcing matrices from raw demos: each demo is frame
/// normalized, resampled to kSamplesPerDemo, and inverted using its own
/// endpoints and duration.
struct ForcingMatrices {
  ForcingMatrix x;
  ForcingMatrix y;
  std::vector<Trajectory> prepared;  // normalized + resampled demos
};
ForcingMatrices build_forcing_matrices(const std::vector<Trajectory>& demos,
                                       const DynamicsParams& params, double tau = 1.0);

/// Rank-J factorization F ~= coefficients * basis obtained from the SVD.
/// basis holds the first J rows of S*V^T, coefficients the first J columns of
/// U; the sign of each pair is flipped so the largest-magnitude entry of each
/// basis row is positive. spectrum is the full singular-value list.
struct ShapeDecomposition {
  Matrix basis;         // J x C
  Matrix coefficients;  // Q x J
  Vector spectrum;      // min(Q,C), descending
};
ShapeDecomposition svd_decompose(const ForcingMatrix& forcing, int rank);

/// Smallest J whose leading singular values carry at least `energy_fraction`
/// of the total squared spectrum. The spectrum must be descending, >= 0.
int suggest_rank(const Vector& spectrum, double energy_fraction);

/// Linear least-squares fit of one kernel row against a basis row:
/// minimizes sum_c (target_c - [sum_i w_i psi_i(t_c)/sum_i psi_i(t_c)] * z_c)^2.
/// Rank-deficient systems get the minimum-norm solution and a warning flag.
struct FitResult {
  Vector weights;
  double residual_rms = 0.0;
  bool rank_deficient = false;
};
FitResult fit_weights(const Vector& basis_row, const KernelBank& bank, int row,
                      const Vector& z_values, const Vector& t_norm);

/// Phase values along a uniform grid of `samples` points spanning
/// [0, tau*duration], accumulated with the same Euler law the integrator uses.
Vector phase_schedule(double duration, int samples, double alpha_z, double tau = 1.0);

struct TrainingDiagnostics {
  Vector residual_rms_x;  // per basis row
  Vector residual_rms_y;
  bool rank_deficient = false;
};

/// Full pipeline for one MP type: frame-normalize and resample the demos,
/// invert the dynamics per axis, factor the forcing matrices at rank J, and
/// fit kernel weights row by row. Stores per-demo coefficients, goals and
/// durations so each demo can be regenerated.
LearnedMP train_type(const std::string& id, const std::vector<Trajectory>& demos,
                     int kernel_count, int rank, const DynamicsParams& params,
                     TrainingDiagnostics* diagnostics = nullptr);

}  // namespace mpseq
