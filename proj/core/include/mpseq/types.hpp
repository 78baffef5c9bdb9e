#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpseq {

using Vec2 = Eigen::Vector2d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Number of samples every demonstration is resampled to before training.
inline constexpr int kSamplesPerDemo = 100;

/// Uniformly sampled planar trajectory. Sample i lies at time i*dt.
/// Velocities/accelerations are optional; when present they have the same
/// length as points.
struct Trajectory {
  double dt = 0.0;
  std::vector<Vec2> points;
  std::optional<std::vector<Vec2>> velocities;
  std::optional<std::vector<Vec2>> accelerations;

  std::size_t size() const { return points.size(); }
  double duration() const {
    return points.empty() ? 0.0 : dt * static_cast<double>(points.size() - 1);
  }
  double time_at(std::size_t i) const { return dt * static_cast<double>(i); }
  double path_length() const;
  /// Linear interpolation of the sampled position at time t (clamped to the span).
  Vec2 position_at(double t) const;
  Vec2 velocity_at(double t) const;
};

/// Grid of Gaussian kernels over normalized time, row-major storage.
/// rows = J basis rows, cols = N kernels per row.
struct KernelBank {
  int rows = 0;
  int cols = 0;
  std::vector<double> centers;
  std::vector<double> widths;

  double center(int row, int col) const {
    return centers[static_cast<std::size_t>(row) * cols + col];
  }
  double width(int row, int col) const {
    return widths[static_cast<std::size_t>(row) * cols + col];
  }
  std::size_t expected_size() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
};

/// One learned motion-primitive type: fixed shape weights per axis, the kernel
/// layout they were fitted against, and the fine-tuning data observed in
/// training (one coefficient row per demonstration).
struct LearnedMP {
  std::string id;
  Matrix weights_x;  // J x N
  Matrix weights_y;  // J x N
  KernelBank bank;   // J rows of N kernels
  double mean_duration = 0.0;  // seconds
  double forcing_scale = 1.0;  // multiplier on the full forcing term
  Vector singular_values_x;    // descending, >= 0
  Vector singular_values_y;
  Matrix demo_s_x;  // Q x J
  Matrix demo_s_y;  // Q x J
  std::vector<Vec2> demo_goals;        // per-demo (goal - start) displacement
  std::vector<double> demo_durations;  // seconds

  int basis_rows() const { return static_cast<int>(weights_x.rows()); }   // J
  int kernel_count() const { return static_cast<int>(weights_x.cols()); } // N
  int demo_count() const { return static_cast<int>(demo_s_x.rows()); }    // Q

  /// Column means of demo_s, zeros when no demos were recorded.
  Vector mean_s_x() const;
  Vector mean_s_y() const;
  Vec2 mean_goal() const;
};

/// Identified collection of learned MPs keyed by id.
struct MPLibrary {
  std::map<std::string, LearnedMP> mps;

  const LearnedMP* find(const std::string& id) const {
    auto it = mps.find(id);
    return it == mps.end() ? nullptr : &it->second;
  }
  bool empty() const { return mps.empty(); }
  std::size_t size() const { return mps.size(); }
};

/// Adjustment parameters for one regeneration: start, goal, duration,
/// per-axis fine-tuning coefficients, and the time-scaling factor.
struct AdjustmentSet {
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  double duration = 1.0;  // seconds
  Vector s_x;             // length J of the target MP
  Vector s_y;
  double tau = 1.0;
};

/// One element of a sequence request: which MP, how long, from where to where.
struct InitialCondition {
  std::string id;
  double duration = 0.0;  // seconds
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
};

/// Spring-damper and phase constants. beta is held at alpha/4 so the
/// transformation system is critically damped.
struct DynamicsParams {
  double alpha_m = 25.0;
  double beta_m = 25.0 / 4.0;
  double alpha_z = 8.0;
  double dt = 0.01;  // base step; rollouts derive their own duration/100 step

  static DynamicsParams critically_damped(double alpha_m, double alpha_z = 8.0,
                                          double dt = 0.01) {
    DynamicsParams p;
    p.alpha_m = alpha_m;
    p.beta_m = alpha_m / 4.0;
    p.alpha_z = alpha_z;
    p.dt = dt;
    return p;
  }
};

/// Integrator state of the transformation system. Positions in meters,
/// v is the scaled velocity (d_dot = tau * v), r the moving goal, z the phase.
struct IntegratorState {
  Vec2 d = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  Vec2 r = Vec2::Zero();
  double z = 1.0;
  double t = 0.0;
};

}  // namespace mpseq
