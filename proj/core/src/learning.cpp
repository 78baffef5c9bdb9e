#include "mpseq/learning.hpp"

#include "mpseq/dynamics.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace mpseq {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::vector<Vec2> finite_differences(const std::vector<Vec2>& p, double dt, int order) {
  const std::size_t n = p.size();
  std::vector<Vec2> out(n, Vec2::Zero());
  if (n < 2) return out;
  if (order == 1) {
    out[0] = (p[1] - p[0]) / dt;
    out[n - 1] = (p[n - 1] - p[n - 2]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (p[i + 1] - p[i - 1]) / (2.0 * dt);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out[i] = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (dt * dt);
    }
    // Second differences have no centered form at the ends; copy the neighbour.
    out[0] = n >= 3 ? out[1] : Vec2::Zero();
    out[n - 1] = n >= 3 ? out[n - 2] : Vec2::Zero();
  }
  return out;
}

}  // namespace

Trajectory resample(const Trajectory& traj, int samples) {
  require(traj.points.size() >= 2, "resample: need at least 2 points");
  require(samples >= 2, "resample: need at least 2 output samples");
  require(traj.dt > 0.0, "resample: dt must be positive");

  const double span = traj.duration();
  Trajectory out;
  out.dt = span / static_cast<double>(samples - 1);
  out.points.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = (i == samples - 1) ? span : out.dt * static_cast<double>(i);
    out.points.push_back(traj.position_at(t));
  }
  out.velocities = finite_differences(out.points, out.dt, 1);
  out.accelerations = finite_differences(out.points, out.dt, 2);
  return out;
}

Trajectory normalize_frame(const Trajectory& traj) {
  require(traj.points.size() >= 2, "normalize_frame: need at least 2 points");

  Vec2 heading = Vec2::Zero();
  if (traj.velocities && !traj.velocities->empty()) heading = traj.velocities->front();
  if (heading.norm() < 1e-9) {
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
      heading = traj.points[i] - traj.points.front();
      if (heading.norm() >= 1e-9) break;
    }
  }
  double angle = 0.0;
  if (heading.norm() >= 1e-9) angle = std::atan2(heading.y(), heading.x());

  const Eigen::Rotation2Dd rot(-angle);
  const Vec2 origin = traj.points.front();

  Trajectory out;
  out.dt = traj.dt;
  out.points.reserve(traj.points.size());
  for (const auto& p : traj.points) out.points.push_back(rot * (p - origin));
  if (traj.velocities) {
    out.velocities.emplace();
    out.velocities->reserve(traj.velocities->size());
    for (const auto& v : *traj.velocities) out.velocities->push_back(rot * v);
  }
  if (traj.accelerations) {
    out.accelerations.emplace();
    out.accelerations->reserve(traj.accelerations->size());
    for (const auto& a : *traj.accelerations) out.accelerations->push_back(rot * a);
  }
  return out;
}

AxisSignals inverse_forcing(const Trajectory& demo, const DynamicsParams& params,
                            const Vec2& start, const Vec2& goal, double duration,
                            double tau) {
  require(demo.points.size() >= 2, "inverse_forcing: need at least 2 samples");
  require(duration > 0.0 && tau > 0.0, "inverse_forcing: duration and tau must be positive");
  if (!demo.velocities || !demo.accelerations ||
      demo.velocities->size() != demo.points.size() ||
      demo.accelerations->size() != demo.points.size()) {
    throw std::invalid_argument("inverse_forcing: demo must carry velocities and accelerations");
  }

  const auto n = static_cast<Eigen::Index>(demo.points.size());
  AxisSignals f{Vector(n), Vector(n)};
  const double ramp_end = tau * duration;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double t = demo.time_at(static_cast<std::size_t>(c));
    const double frac = std::min(t / ramp_end, 1.0);
    const Vec2 r = start + frac * (goal - start);
    const Vec2& p = demo.points[static_cast<std::size_t>(c)];
    const Vec2& v = (*demo.velocities)[static_cast<std::size_t>(c)];
    const Vec2& a = (*demo.accelerations)[static_cast<std::size_t>(c)];
    const Vec2 value =
        a / (tau * tau) - params.alpha_m * (params.beta_m * (r - p) - v);
    f.x[c] = value.x();
    f.y[c] = value.y();
  }
  return f;
}

ForcingMatrices build_forcing_matrices(const std::vector<Trajectory>& demos,
                                       const DynamicsParams& params, double tau) {
  require(!demos.empty(), "build_forcing_matrices: need at least one demo");

  ForcingMatrices out;
  const auto q = static_cast<Eigen::Index>(demos.size());
  out.x.values.resize(q, kSamplesPerDemo);
  out.y.values.resize(q, kSamplesPerDemo);
  out.prepared.reserve(demos.size());
  for (Eigen::Index i = 0; i < q; ++i) {
    Trajectory prepared = resample(normalize_frame(demos[static_cast<std::size_t>(i)]),
                                   kSamplesPerDemo);
    const Vec2 start = prepared.points.front();
    const Vec2 goal = prepared.points.back();
    const auto f = inverse_forcing(prepared, params, start, goal, prepared.duration(), tau);
    out.x.values.row(i) = f.x.transpose();
    out.y.values.row(i) = f.y.transpose();
    out.prepared.push_back(std::move(prepared));
  }
  if (!out.x.values.allFinite() || !out.y.values.allFinite()) {
    throw std::runtime_error("build_forcing_matrices: non-finite forcing target");
  }
  return out;
}

ShapeDecomposition svd_decompose(const ForcingMatrix& forcing, int rank) {
  const Eigen::Index q = forcing.values.rows();
  const Eigen::Index c = forcing.values.cols();
  require(q >= 1 && c >= 1, "svd_decompose: empty forcing matrix");
  require(rank >= 1 && rank <= std::min(q, c), "svd_decompose: rank out of range");

  Eigen::JacobiSVD<Matrix> svd(forcing.values, Eigen::ComputeThinU | Eigen::ComputeThinV);

  ShapeDecomposition out;
  out.spectrum = svd.singularValues();
  Matrix u = svd.matrixU().leftCols(rank);
  Matrix basis = out.spectrum.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();

  // Fix the sign of each (U column, basis row) pair: the largest-magnitude
  // entry of a basis row is made positive so decompositions are reproducible.
  for (Eigen::Index j = 0; j < rank; ++j) {
    Eigen::Index arg = 0;
    basis.row(j).cwiseAbs().maxCoeff(&arg);
    if (basis(j, arg) < 0.0) {
      basis.row(j) = -basis.row(j);
      u.col(j) = -u.col(j);
    }
  }
  out.basis = std::move(basis);
  out.coefficients = std::move(u);
  return out;
}

int suggest_rank(const Vector& spectrum, double energy_fraction) {
  require(spectrum.size() > 0, "suggest_rank: empty spectrum");
  require(energy_fraction > 0.0 && energy_fraction <= 1.0,
          "suggest_rank: energy fraction must lie in (0, 1]");
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    require(std::isfinite(spectrum[i]) && spectrum[i] >= 0.0,
            "suggest_rank: spectrum must be non-negative");
    require(i == 0 || spectrum[i] <= spectrum[i - 1],
            "suggest_rank: spectrum must be descending");
  }
  const double total = spectrum.squaredNorm();
  if (total == 0.0) return 1;
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    cumulative += spectrum[i] * spectrum[i];
    if (cumulative >= energy_fraction * total) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(spectrum.size());
}

FitResult fit_weights(const Vector& basis_row, const KernelBank& bank, int row,
                      const Vector& z_values, const Vector& t_norm) {
  const Eigen::Index c = basis_row.size();
  require(c >= 2, "fit_weights: need at least 2 samples");
  require(z_values.size() == c && t_norm.size() == c,
          "fit_weights: sample vectors must share one length");
  require(row >= 0 && row < bank.rows, "fit_weights: bank row out of range");

  Matrix design(c, bank.cols);
  for (Eigen::Index k = 0; k < c; ++k) {
    Vector psi = kernel_activations(bank, row, t_norm[k]);
    const double den = std::max(psi.sum(), 1e-300);
    design.row(k) = (psi / den).transpose() * z_values[k];
  }

  Eigen::BDCSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);

  FitResult out;
  out.weights = svd.solve(basis_row);
  out.rank_deficient = svd.rank() < bank.cols;
  out.residual_rms = std::sqrt((design * out.weights - basis_row).squaredNorm() /
                               static_cast<double>(c));
  return out;
}

Vector phase_schedule(double duration, int samples, double alpha_z, double tau) {
  require(samples >= 2, "phase_schedule: need at least 2 samples");
  require(duration > 0.0 && tau > 0.0, "phase_schedule: duration and tau must be positive");
  Vector z(samples);
  z[0] = 1.0;
  const double dt = tau * duration / static_cast<double>(samples - 1);
  for (int i = 1; i < samples; ++i) {
    const double t = dt * static_cast<double>(i - 1);
    z[i] = canonical_step_logistic(z[i - 1], alpha_z, tau, duration, t, dt);
  }
  return z;
}

LearnedMP train_type(const std::string& id, const std::vector<Trajectory>& demos,
                     int kernel_count, int rank, const DynamicsParams& params,
                     TrainingDiagnostics* diagnostics) {
  require(!demos.empty(), "train_type: need at least one demo");
  require(kernel_count >= 2, "train_type: need at least 2 kernels");
  require(rank >= 1, "train_type: rank must be at least 1");
  require(rank <= static_cast<int>(demos.size()),
          "train_type: rank must not exceed the demo count");

  auto forcing = build_forcing_matrices(demos, params);
  const auto dec_x = svd_decompose(forcing.x, rank);
  const auto dec_y = svd_decompose(forcing.y, rank);

  LearnedMP mp;
  mp.id = id;
  mp.bank = make_kernel_bank(kernel_count, rank);
  mp.weights_x.resize(rank, kernel_count);
  mp.weights_y.resize(rank, kernel_count);
  mp.singular_values_x = dec_x.spectrum;
  mp.singular_values_y = dec_y.spectrum;
  mp.demo_s_x = dec_x.coefficients;
  mp.demo_s_y = dec_y.coefficients;

  double duration_sum = 0.0;
  for (const auto& demo : forcing.prepared) {
    mp.demo_goals.push_back(demo.points.back() - demo.points.front());
    mp.demo_durations.push_back(demo.duration());
    duration_sum += demo.duration();
  }
  mp.mean_duration = duration_sum / static_cast<double>(forcing.prepared.size());

  // The regression grid lives on normalized time; its phase schedule uses the
  // type's mean duration.
  Vector t_norm(kSamplesPerDemo);
  for (int i = 0; i < kSamplesPerDemo; ++i) {
    t_norm[i] = static_cast<double>(i) / static_cast<double>(kSamplesPerDemo - 1);
  }
  const Vector z = phase_schedule(mp.mean_duration, kSamplesPerDemo, params.alpha_z);

  if (diagnostics) {
    diagnostics->residual_rms_x.resize(rank);
    diagnostics->residual_rms_y.resize(rank);
    diagnostics->rank_deficient = false;
  }
  for (int j = 0; j < rank; ++j) {
    auto fx = fit_weights(dec_x.basis.row(j), mp.bank, j, z, t_norm);
    auto fy = fit_weights(dec_y.basis.row(j), mp.bank, j, z, t_norm);
    mp.weights_x.row(j) = fx.weights.transpose();
    mp.weights_y.row(j) = fy.weights.transpose();
    if (diagnostics) {
      diagnostics->residual_rms_x[j] = fx.residual_rms;
      diagnostics->residual_rms_y[j] = fy.residual_rms;
      diagnostics->rank_deficient |= fx.rank_deficient || fy.rank_deficient;
    }
  }
  return mp;
}

}  // namespace mpseq
