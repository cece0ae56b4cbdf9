#include "eqflow/io.hpp"

#include <boost/uuid/detail/sha1.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eqflow {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_cell(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) throw std::runtime_error("bad CSV cell '" + cell + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

json double_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string snapshot_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.json", index);
  return buf;
}

std::string angle_profile_to_json(const AngleProfile& angle, double time, int n) {
  std::string out = "{\"time\": " + g17(time) + ", \"n\": " + std::to_string(n) + ", \"theta\": [";
  for (std::size_t i = 0; i < angle.theta.size(); ++i) {
    if (i) out += ", ";
    out += angle.included[i] ? g17(angle.theta[i]) : "null";
  }
  return out + "]}\n";
}

std::string snapshot_to_json(const FlowState& state) {
  const DiscreteCurve& c = state.curve;
  std::string out = "{\"symmetry\": \"" + std::string(to_string(c.symmetry())) +
                    "\", \"n_nodes\": " + std::to_string(c.size()) + ", \"nodes\": [";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += "[" + g17(c[i].x) + ", " + g17(c[i].y) + "]";
  }
  out += "], \"time\": " + g17(state.time) + "}\n";
  return out;
}

FlowState snapshot_from_json(const json& doc) {
  const auto sym = symmetry_from_string(doc.at("symmetry").get<std::string>());
  const auto& arr = doc.at("nodes");
  const std::size_t n = doc.at("n_nodes").get<std::size_t>();
  if (arr.size() != n) throw std::runtime_error("snapshot: n_nodes does not match the node list");
  std::vector<PlanarPoint> nodes;
  nodes.reserve(n);
  for (const auto& p : arr) nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return {DiscreteCurve(std::move(nodes), sym), doc.at("time").get<double>(), 0};
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_observables_csv(const fs::path& path, const ObservableSeries& series,
                           const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  std::string text = "time";
  for (const auto& c : columns) {
    const auto i = series.column_index(c);
    if (!i) throw std::invalid_argument("unknown observable column '" + c + "'");
    idx.push_back(*i);
    text += "," + c;
  }
  text += "\n";
  for (std::size_t r = 0; r < series.size(); ++r) {
    text += g17(series.times()[r]);
    const auto row = series.row(r);
    for (std::size_t i : idx) text += "," + g17(row[i]);
    text += "\n";
  }
  write_text_file(path, text);
}

ObservableSeries read_observables_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
  auto header = split_csv(line);
  if (header.empty() || header.front() != "time") throw std::runtime_error(path.string() + ": first column must be time");
  ObservableSeries series(std::vector<std::string>(header.begin() + 1, header.end()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row");
    std::vector<double> values;
    for (std::size_t i = 1; i < cells.size(); ++i) values.push_back(parse_cell(cells[i]));
    series.append(parse_cell(cells[0]), std::move(values));
  }
  return series;
}

std::string content_hash(const std::string& bytes) {
  boost::uuids::detail::sha1 sha;
  const std::string head = "blob " + std::to_string(bytes.size()) + '\0';
  sha.process_bytes(head.data(), head.size());
  sha.process_bytes(bytes.data(), bytes.size());
  boost::uuids::detail::sha1::digest_type digest;
  sha.get_digest(digest);
  char buf[41];
  for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", digest[i]);
  return std::string(buf, 40);
}

json write_trajectory(const fs::path& dir, const Trajectory& traj, const RunInfo& info) {
  fs::create_directories(dir / "snapshots");
  for (const auto& entry : fs::directory_iterator(dir / "snapshots")) fs::remove(entry.path());

  json manifest;
  manifest["config"] = info.config;
  manifest["input_hash"] = content_hash(info.config.dump() + "\nseed=" + std::to_string(info.seed));
  manifest["seed"] = info.seed;
  manifest["n"] = info.n;
  manifest["termination"] = std::string(to_string(traj.termination));
  if (!traj.failure_message.empty()) manifest["failure_message"] = traj.failure_message;
  manifest["initial_area"] = traj.initial_area;
  manifest["initial_diameter"] = traj.initial_diameter;
  if (traj.singular_time) {
    manifest["singular_time"] = {{"estimate", traj.singular_time->estimate},
                                 {"lower", traj.singular_time->lower},
                                 {"upper", traj.singular_time->upper},
                                 {"bracketed", traj.singular_time->bracketed}};
  } else {
    manifest["singular_time"] = nullptr;
  }

  json index = json::array();
  json artifacts = json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const std::string rel = "snapshots/" + snapshot_file_name(i);
    write_text_file(dir / rel, snapshot_to_json(traj.snapshots[i]));
    index.push_back({{"index", i},
                     {"time", double_or_null(traj.snapshots[i].time)},
                     {"step", traj.snapshots[i].step_count},
                     {"path", rel}});
    artifacts.push_back(rel);
  }
  write_observables_csv(dir / "observables.csv", traj.observables, info.observables);
  artifacts.push_back("observables.csv");

  manifest["snapshots"] = index;
  manifest["artifacts"] = artifacts;
  manifest["wall_clock_seconds"] = info.wall_clock_seconds;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

StoredTrajectory read_trajectory(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  StoredTrajectory out;
  out.manifest = json::parse(in);
  out.n = out.manifest.value("n", 2);
  for (const auto& entry : out.manifest.at("snapshots")) {
    std::ifstream s(dir / entry.at("path").get<std::string>());
    if (!s) throw std::runtime_error("missing snapshot " + entry.at("path").get<std::string>());
    FlowState state = snapshot_from_json(json::parse(s));
    state.step_count = entry.value("step", std::size_t{0});
    out.snapshots.push_back(std::move(state));
  }
  const auto& st = out.manifest.at("singular_time");
  if (!st.is_null()) {
    out.singular_time = SingularTimeEstimate{st.at("lower").get<double>(), st.at("upper").get<double>(),
                                             st.at("estimate").get<double>(), st.at("bracketed").get<bool>()};
  }
  return out;
}

}  // namespace eqflow
