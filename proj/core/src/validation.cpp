#include "mpseq/validation.hpp"

#include <cmath>
#include <sstream>

namespace mpseq {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

void check_spectrum(const Vector& sv, const char* field, const std::string& id,
                    std::vector<Violation>& out) {
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (!std::isfinite(sv[i]) || sv[i] < 0.0) {
      out.push_back({id, field, "singular values must be finite and non-negative"});
      return;
    }
    if (i > 0 && sv[i] > sv[i - 1]) {
      out.push_back({id, field, "singular values must be sorted descending"});
      return;
    }
  }
}

void check_demo_s(const Matrix& s, Eigen::Index rank, const char* field,
                  const std::string& id, std::vector<Violation>& out) {
  if (s.rows() > 0 && s.cols() != rank) {
    out.push_back({id, field, "fine-tuning coefficient columns must equal J"});
  }
  if (!all_finite(s)) {
    out.push_back({id, field, "fine-tuning coefficients must be finite"});
  }
}

}  // namespace

std::vector<Violation> validate_mp(const LearnedMP& mp) {
  std::vector<Violation> out;
  const auto& id = mp.id;

  if (id.empty()) out.push_back({id, "id", "id must be non-empty"});

  const Eigen::Index rows = mp.weights_x.rows();
  const Eigen::Index cols = mp.weights_x.cols();
  if (rows < 1 || cols < 2) {
    out.push_back({id, "weights_x", "weights must be at least 1x2"});
  }
  if (mp.weights_y.rows() != rows || mp.weights_y.cols() != cols) {
    out.push_back({id, "weights_y", "weights_x and weights_y must have identical shape"});
  }
  if (!all_finite(mp.weights_x) || !all_finite(mp.weights_y)) {
    out.push_back({id, "weights", "weights must be finite"});
  }

  if (mp.bank.rows != rows || mp.bank.cols != cols) {
    out.push_back({id, "bank", "kernel bank shape must match the weight matrices"});
  }
  if (mp.bank.centers.size() != mp.bank.expected_size() ||
      mp.bank.widths.size() != mp.bank.expected_size()) {
    out.push_back({id, "bank", "kernel list lengths must equal rows*cols"});
  } else {
    for (int j = 0; j < mp.bank.rows; ++j) {
      for (int i = 0; i < mp.bank.cols; ++i) {
        const double w = mp.bank.width(j, i);
        if (!(w > 0.0) || !std::isfinite(w)) {
          out.push_back({id, "bank.widths", "kernel widths must be strictly positive"});
          j = mp.bank.rows;
          break;
        }
        if (i > 0 && mp.bank.center(j, i) < mp.bank.center(j, i - 1)) {
          out.push_back({id, "bank.centers", "kernel centers must be non-decreasing within a row"});
          j = mp.bank.rows;
          break;
        }
        if (!std::isfinite(mp.bank.center(j, i))) {
          out.push_back({id, "bank.centers", "kernel centers must be finite"});
          j = mp.bank.rows;
          break;
        }
      }
    }
  }

  if (!(mp.mean_duration > 0.0) || !std::isfinite(mp.mean_duration)) {
    out.push_back({id, "mean_duration", "mean duration must be positive and finite"});
  }
  if (!(mp.forcing_scale > 0.0) || !std::isfinite(mp.forcing_scale)) {
    out.push_back({id, "forcing_scale", "forcing scale must be positive and finite"});
  }

  check_spectrum(mp.singular_values_x, "singular_values_x", id, out);
  check_spectrum(mp.singular_values_y, "singular_values_y", id, out);
  check_demo_s(mp.demo_s_x, rows, "demo_s_x", id, out);
  check_demo_s(mp.demo_s_y, rows, "demo_s_y", id, out);
  if (mp.demo_s_x.rows() != mp.demo_s_y.rows()) {
    out.push_back({id, "demo_s", "demo_s_x and demo_s_y must have the same demo count"});
  }

  // J <= Q only applies once training data is recorded.
  const Eigen::Index demos = mp.demo_s_x.rows();
  if (demos > 0 && rows > demos) {
    out.push_back({id, "demo_s", "basis rank J must not exceed demo count Q"});
  }
  if (!mp.demo_goals.empty() &&
      mp.demo_goals.size() != static_cast<std::size_t>(demos)) {
    out.push_back({id, "demo_goals", "demo_goals length must equal demo count"});
  }
  for (const auto& g : mp.demo_goals) {
    if (!g.allFinite()) {
      out.push_back({id, "demo_goals", "demo goals must be finite"});
      break;
    }
  }
  if (!mp.demo_durations.empty() &&
      mp.demo_durations.size() != static_cast<std::size_t>(demos)) {
    out.push_back({id, "demo_durations", "demo_durations length must equal demo count"});
  }
  for (double t : mp.demo_durations) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      out.push_back({id, "demo_durations", "demo durations must be positive and finite"});
      break;
    }
  }
  return out;
}

std::vector<Violation> validate_library(const MPLibrary& lib) {
  std::vector<Violation> out;
  for (const auto& [key, mp] : lib.mps) {
    if (key != mp.id) {
      out.push_back({key, "id", "library key does not match the entry id"});
    }
    auto v = validate_mp(mp);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << (v.mp_id.empty() ? std::string("<library>") : v.mp_id) << "." << v.field
       << ": " << v.message << "\n";
  }
  return os.str();
}

}  // namespace mpseq
