#include "mpseq/types.hpp"

#include <algorithm>
#include <cmath>

namespace mpseq {

double Trajectory::path_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    len += (points[i] - points[i - 1]).norm();
  }
  return len;
}

namespace {

Vec2 interp(const std::vector<Vec2>& samples, double dt, double t) {
  if (samples.empty()) return Vec2::Zero();
  const double span = dt * static_cast<double>(samples.size() - 1);
  if (t <= 0.0) return samples.front();
  if (t >= span) return samples.back();
  const double u = t / dt;
  const auto i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  if (i + 1 >= samples.size()) return samples.back();
  return samples[i] + frac * (samples[i + 1] - samples[i]);
}

}  // namespace

Vec2 Trajectory::position_at(double t) const { return interp(points, dt, t); }

Vec2 Trajectory::velocity_at(double t) const {
  if (!velocities) return Vec2::Zero();
  return interp(*velocities, dt, t);
}

Vector LearnedMP::mean_s_x() const {
  if (demo_s_x.rows() == 0) return Vector::Zero(weights_x.rows());
  return demo_s_x.colwise().mean();
}

Vector LearnedMP::mean_s_y() const {
  if (demo_s_y.rows() == 0) return Vector::Zero(weights_y.rows());
  return demo_s_y.colwise().mean();
}

Vec2 LearnedMP::mean_goal() const {
  if (demo_goals.empty()) return Vec2::Zero();
  Vec2 sum = Vec2::Zero();
  for (const auto& g : demo_goals) sum += g;
  return sum / static_cast<double>(demo_goals.size());
}

}  // namespace mpseq
