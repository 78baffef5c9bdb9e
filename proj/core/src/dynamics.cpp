#include "mpseq/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace mpseq {

namespace {
constexpr double kDenominatorFloor = 1e-300;

// e^a / (1+e^a)^2, evaluated through e^-|a| so large arguments cannot overflow.
double logistic_bump(double a) {
  const double e = std::exp(-std::abs(a));
  const double onep = 1.0 + e;
  return e / (onep * onep);
}
}  // namespace

KernelBank make_kernel_bank(int count, int rows) {
  if (count < 2) throw std::invalid_argument("make_kernel_bank: need at least 2 kernels");
  if (rows < 1) throw std::invalid_argument("make_kernel_bank: need at least 1 row");

  std::vector<double> centers(count);
  std::vector<double> widths(count);
  for (int i = 0; i < count; ++i) {
    centers[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  }
  const double ln2 = std::log(2.0);
  for (int i = 0; i + 1 < count; ++i) {
    const double gap = centers[i + 1] - centers[i];
    widths[i] = ln2 / (gap * gap);
  }
  widths[count - 1] = widths[count - 2];

  KernelBank bank;
  bank.rows = rows;
  bank.cols = count;
  bank.centers.reserve(bank.expected_size());
  bank.widths.reserve(bank.expected_size());
  for (int j = 0; j < rows; ++j) {
    bank.centers.insert(bank.centers.end(), centers.begin(), centers.end());
    bank.widths.insert(bank.widths.end(), widths.begin(), widths.end());
  }
  return bank;
}

Vector kernel_activations(const KernelBank& bank, int row, double t_norm) {
  if (row < 0 || row >= bank.rows) {
    throw std::invalid_argument("kernel_activations: row out of range");
  }
  Vector psi(bank.cols);
  for (int i = 0; i < bank.cols; ++i) {
    const double d = t_norm - bank.center(row, i);
    psi[i] = std::exp(-bank.width(row, i) * d * d);
  }
  return psi;
}

double canonical_step_exponential(double z, double alpha_z, double tau, double dt) {
  return z - tau * alpha_z * z * dt;
}

double canonical_step_logistic(double z, double alpha_z, double tau,
                               double total_duration, double t, double dt) {
  const double a = alpha_z * (tau * total_duration - t) / dt;
  return z - alpha_z * logistic_bump(a) * dt;
}

Vec2 goal_step(const Vec2& r, const Vec2& start, const Vec2& goal,
               double duration, double tau, double t, double dt) {
  if (t < 0.0 || t >= tau * duration) return r;
  return r + (dt / (tau * duration)) * (goal - start);
}

double forcing_time(const Eigen::Ref<const Matrix>& weights,
                    const Eigen::Ref<const Vector>& s, const KernelBank& bank,
                    int row_offset, double t_norm, double z, double alpha_w) {
  if (weights.rows() != s.size()) {
    throw std::invalid_argument("forcing_time: weights rows must match s length");
  }
  if (weights.cols() != bank.cols) {
    throw std::invalid_argument("forcing_time: weights cols must match kernel count");
  }
  if (row_offset < 0 || row_offset + weights.rows() > bank.rows) {
    throw std::invalid_argument("forcing_time: bank row range out of bounds");
  }

  double sum = 0.0;
  for (int j = 0; j < weights.rows(); ++j) {
    double num = 0.0;
    double den = 0.0;
    const int bank_row = row_offset + j;
    for (int i = 0; i < bank.cols; ++i) {
      const double d = t_norm - bank.center(bank_row, i);
      const double psi = std::exp(-bank.width(bank_row, i) * d * d);
      num += weights(j, i) * psi;
      den += psi;
    }
    sum += num * s[j] / std::max(den, kDenominatorFloor);
  }
  return alpha_w * sum * z;
}

double forcing_phase(const Vector& weights, const KernelBank& bank_z, double z) {
  if (bank_z.rows < 1 || weights.size() != bank_z.cols) {
    throw std::invalid_argument("forcing_phase: weights must match kernel count");
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < bank_z.cols; ++i) {
    const double d = z - bank_z.center(0, i);
    const double psi = std::exp(-bank_z.width(0, i) * d * d);
    num += weights[i] * psi;
    den += psi;
  }
  return num * z / std::max(den, kDenominatorFloor);
}

IntegratorState transform_step(const IntegratorState& state, const Vec2& forcing,
                               const DynamicsParams& params, const Vec2& goal,
                               double tau, double dt) {
  IntegratorState next = state;
  const Vec2 accel =
      tau * params.alpha_m * (params.beta_m * (goal - state.d) - state.v) + forcing;
  next.v = state.v + dt * accel;
  next.d = state.d + dt * tau * next.v;
  return next;
}

}  // namespace mpseq
