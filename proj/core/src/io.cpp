#include "mpseq/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mpseq {

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  auto& data = j["data"] = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return j;
}

double finite_number(const json& j, const std::string& context) {
  if (!j.is_number()) {
    throw std::runtime_error("library parse: expected a number at " + context);
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw std::runtime_error("library parse: non-finite value at " + context);
  }
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw std::runtime_error("library parse: malformed matrix at " + context);
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 ||
      data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::runtime_error("library parse: matrix size mismatch at " + context);
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = finite_number(data[k++], context + ".data");
    }
  }
  return m;
}

std::vector<double> doubles_from_json(const json& j, const std::string& context) {
  if (!j.is_array()) {
    throw std::runtime_error("library parse: expected an array at " + context);
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(finite_number(e, context));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("failed to format a double");
  return std::string(buf, ptr);
}

}  // namespace

std::string serialize_library(const MPLibrary& lib) {
  json doc;
  doc["format"] = "mpseq-library";
  doc["version"] = kLibraryFormatVersion;
  auto& entries = doc["mps"] = json::array();
  for (const auto& [id, mp] : lib.mps) {
    json e;
    e["id"] = mp.id;
    e["mean_duration"] = mp.mean_duration;
    e["forcing_scale"] = mp.forcing_scale;
    json bank;
    bank["rows"] = mp.bank.rows;
    bank["cols"] = mp.bank.cols;
    bank["centers"] = mp.bank.centers;
    bank["widths"] = mp.bank.widths;
    e["bank"] = std::move(bank);
    e["weights_x"] = matrix_to_json(mp.weights_x);
    e["weights_y"] = matrix_to_json(mp.weights_y);
    e["singular_values_x"] =
        std::vector<double>(mp.singular_values_x.begin(), mp.singular_values_x.end());
    e["singular_values_y"] =
        std::vector<double>(mp.singular_values_y.begin(), mp.singular_values_y.end());
    e["demo_s_x"] = matrix_to_json(mp.demo_s_x);
    e["demo_s_y"] = matrix_to_json(mp.demo_s_y);
    auto& goals = e["demo_goals"] = json::array();
    for (const auto& g : mp.demo_goals) goals.push_back({g.x(), g.y()});
    e["demo_durations"] = mp.demo_durations;
    entries.push_back(std::move(e));
  }
  return doc.dump(2) + "\n";
}

MPLibrary parse_library(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("library parse: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", std::string()) != "mpseq-library") {
    throw std::runtime_error("library parse: not an mpseq-library document");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kLibraryFormatVersion) {
    throw std::runtime_error("library parse: unknown schema version");
  }
  if (!doc.contains("mps") || !doc["mps"].is_array()) {
    throw std::runtime_error("library parse: missing mps array");
  }

  MPLibrary lib;
  for (const auto& e : doc["mps"]) {
    LearnedMP mp;
    mp.id = e.at("id").get<std::string>();
    const std::string ctx = "mps[" + mp.id + "]";
    mp.mean_duration = finite_number(e.at("mean_duration"), ctx + ".mean_duration");
    mp.forcing_scale = finite_number(e.at("forcing_scale"), ctx + ".forcing_scale");
    const auto& bank = e.at("bank");
    mp.bank.rows = bank.at("rows").get<int>();
    mp.bank.cols = bank.at("cols").get<int>();
    mp.bank.centers = doubles_from_json(bank.at("centers"), ctx + ".bank.centers");
    mp.bank.widths = doubles_from_json(bank.at("widths"), ctx + ".bank.widths");
    mp.weights_x = matrix_from_json(e.at("weights_x"), ctx + ".weights_x");
    mp.weights_y = matrix_from_json(e.at("weights_y"), ctx + ".weights_y");
    auto svx = doubles_from_json(e.at("singular_values_x"), ctx + ".singular_values_x");
    auto svy = doubles_from_json(e.at("singular_values_y"), ctx + ".singular_values_y");
    mp.singular_values_x = Eigen::Map<Vector>(svx.data(), static_cast<Eigen::Index>(svx.size()));
    mp.singular_values_y = Eigen::Map<Vector>(svy.data(), static_cast<Eigen::Index>(svy.size()));
    mp.demo_s_x = matrix_from_json(e.at("demo_s_x"), ctx + ".demo_s_x");
    mp.demo_s_y = matrix_from_json(e.at("demo_s_y"), ctx + ".demo_s_y");
    for (const auto& g : e.at("demo_goals")) {
      if (!g.is_array() || g.size() != 2) {
        throw std::runtime_error("library parse: malformed goal at " + ctx + ".demo_goals");
      }
      mp.demo_goals.emplace_back(finite_number(g[0], ctx + ".demo_goals"),
                                 finite_number(g[1], ctx + ".demo_goals"));
    }
    mp.demo_durations = doubles_from_json(e.at("demo_durations"), ctx + ".demo_durations");
    if (lib.mps.count(mp.id) != 0) {
      throw std::runtime_error("library parse: duplicate id " + mp.id);
    }
    lib.mps.emplace(mp.id, std::move(mp));
  }
  return lib;
}

void save_library(const MPLibrary& lib, const std::filesystem::path& path) {
  atomic_write(path, serialize_library(lib));
}

MPLibrary load_library(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open library file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_library(buf.str());
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path.string());

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": empty file");
  }
  ++line_no;
  // Tolerate an optional UTF-8 BOM and trailing \r.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  bool has_velocity = false;
  if (line == "t,x,y") {
    has_velocity = false;
  } else if (line == "t,x,y,vx,vy") {
    has_velocity = true;
  } else {
    throw std::runtime_error(path.string() + ":1: expected header t,x,y or t,x,y,vx,vy");
  }

  std::vector<double> times;
  Trajectory traj;
  if (has_velocity) traj.velocities.emplace();

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, x, y;
    if (!(row >> t >> x >> y)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed row");
    }
    double vx = 0.0, vy = 0.0;
    if (has_velocity && !(row >> vx >> vy)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": missing velocity columns");
    }
    if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y) ||
        !std::isfinite(vx) || !std::isfinite(vy)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": non-finite value");
    }
    times.push_back(t);
    traj.points.emplace_back(x, y);
    if (has_velocity) traj.velocities->emplace_back(vx, vy);
  }

  if (times.size() < 2) {
    throw std::runtime_error(path.string() + ": need at least 2 samples");
  }
  const double step = times[1] - times[0];
  if (!(step > 0.0)) {
    throw std::runtime_error(path.string() + ":3: timestamps must be strictly increasing");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    if (!(d > 0.0)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 2) +
                               ": timestamps must be strictly increasing");
    }
    if (std::abs(d - step) > 1e-6 * std::max(1.0, std::abs(step))) {
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 2) +
                               ": time step must be constant");
    }
  }
  traj.dt = step;
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  const bool has_velocity = traj.velocities.has_value();
  std::ostringstream os;
  os << (has_velocity ? "t,x,y,vx,vy\n" : "t,x,y\n");
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    os << format_double(traj.time_at(i)) << ',' << format_double(traj.points[i].x())
       << ',' << format_double(traj.points[i].y());
    if (has_velocity) {
      os << ',' << format_double((*traj.velocities)[i].x()) << ','
         << format_double((*traj.velocities)[i].y());
    }
    os << '\n';
  }
  atomic_write(path, os.str());
}

std::vector<InitialCondition> read_conditions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open conditions file: " + path.string());

  std::vector<InitialCondition> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::istringstream row(line);
    InitialCondition c;
    double xi, yi, xg, yg;
    if (!(row >> c.id >> c.duration >> xi >> yi >> xg >> yg)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected `id T x_init y_init x_g y_g`");
    }
    std::string extra;
    if (row >> extra) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": unexpected trailing field `" + extra + "`");
    }
    if (!(c.duration > 0.0) || !std::isfinite(c.duration)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": duration must be positive");
    }
    c.start = Vec2(xi, yi);
    c.goal = Vec2(xg, yg);
    if (!c.start.allFinite() || !c.goal.allFinite()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": non-finite coordinate");
    }
    out.push_back(std::move(c));
  }
  if (out.empty()) {
    throw std::runtime_error(path.string() + ": no conditions found");
  }
  return out;
}

void write_conditions(const std::vector<InitialCondition>& conditions,
                      const std::filesystem::path& path) {
  std::ostringstream os;
  os << "# id T x_init y_init x_g y_g\n";
  for (const auto& c : conditions) {
    os << c.id << ' ' << format_double(c.duration) << ' ' << format_double(c.start.x())
       << ' ' << format_double(c.start.y()) << ' ' << format_double(c.goal.x()) << ' '
       << format_double(c.goal.y()) << '\n';
  }
  atomic_write(path, os.str());
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

}  // namespace mpseq
