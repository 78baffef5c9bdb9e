#include "mpseq/rollout.hpp"

#include "piecewise.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mpseq {

AdjustmentSet default_adjustment(const LearnedMP& mp) {
  AdjustmentSet adj;
  adj.start = Vec2::Zero();
  adj.goal = mp.mean_goal();
  adj.duration = mp.mean_duration;
  adj.s_x = mp.mean_s_x();
  adj.s_y = mp.mean_s_y();
  adj.tau = 1.0;
  return adj;
}

Trajectory regenerate(const LearnedMP& mp, const AdjustmentSet& adj,
                      const DynamicsParams& params, int steps) {
  const int rank = mp.basis_rows();
  if (adj.s_x.size() != rank || adj.s_y.size() != rank) {
    throw std::invalid_argument("regenerate: s vectors must have length J of the MP");
  }
  if (!(adj.duration > 0.0)) throw std::invalid_argument("regenerate: duration must be positive");
  if (!(adj.tau > 0.0)) throw std::invalid_argument("regenerate: tau must be positive");

  detail::PiecewiseSpec spec;
  spec.bank = &mp.bank;
  spec.weights_x = &mp.weights_x;
  spec.weights_y = &mp.weights_y;
  spec.s_x = &adj.s_x;
  spec.s_y = &adj.s_y;
  spec.segments.push_back({0, rank, adj.start, adj.goal, adj.duration});
  spec.total_duration = adj.duration;
  spec.alpha_w = mp.forcing_scale;
  spec.tau = adj.tau;
  spec.steps_per_duration = steps;

  const auto raw = detail::integrate_piecewise(spec, params);

  Trajectory out;
  out.dt = adj.duration / static_cast<double>(steps);
  out.points = raw.positions;
  out.velocities = raw.velocities;
  out.accelerations = raw.accelerations;
  return out;
}

std::vector<std::string> adjustment_warnings(const LearnedMP& mp,
                                             const AdjustmentSet& adj) {
  std::vector<std::string> warnings;
  const int demos = mp.demo_count();
  if (demos < 2) return warnings;

  auto check_axis = [&](const Matrix& demo_s, const Vector& s, const char* axis) {
    for (Eigen::Index j = 0; j < s.size() && j < demo_s.cols(); ++j) {
      const double mean = demo_s.col(j).mean();
      const double var =
          (demo_s.col(j).array() - mean).square().sum() / static_cast<double>(demos - 1);
      const double sd = std::sqrt(var);
      if (sd <= 0.0) continue;
      if (std::abs(s[j] - mean) > 3.0 * sd) {
        std::ostringstream os;
        os << "s_" << axis << "[" << j << "] = " << s[j]
           << " lies more than 3 standard deviations outside the training cloud";
        warnings.push_back(os.str());
      }
    }
  };
  check_axis(mp.demo_s_x, adj.s_x, "x");
  check_axis(mp.demo_s_y, adj.s_y, "y");
  return warnings;
}

std::vector<Trajectory> sweep(const LearnedMP& mp, const AdjustmentSet& base,
                              const SweepSpec& spec, const DynamicsParams& params) {
  std::vector<Trajectory> out;
  switch (spec.kind) {
    case SweepSpec::Kind::goal: {
      if (spec.goals.empty()) throw std::invalid_argument("sweep: empty value list");
      for (const auto& g : spec.goals) {
        AdjustmentSet adj = base;
        adj.goal = g;
        out.push_back(regenerate(mp, adj, params));
      }
      break;
    }
    case SweepSpec::Kind::duration: {
      if (spec.values.empty()) throw std::invalid_argument("sweep: empty value list");
      for (double t : spec.values) {
        AdjustmentSet adj = base;
        adj.duration = t;
        out.push_back(regenerate(mp, adj, params));
      }
      break;
    }
    case SweepSpec::Kind::s_coefficient: {
      if (spec.values.empty()) throw std::invalid_argument("sweep: empty value list");
      if (spec.coefficient < 0 || spec.coefficient >= mp.basis_rows()) {
        throw std::invalid_argument("sweep: s coefficient index out of range");
      }
      for (double v : spec.values) {
        AdjustmentSet adj = base;
        (spec.axis == 0 ? adj.s_x : adj.s_y)[spec.coefficient] = v;
        out.push_back(regenerate(mp, adj, params));
      }
      break;
    }
  }
  return out;
}

}  // namespace mpseq
