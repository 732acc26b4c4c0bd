#include "stlcbf/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace stlcbf {

namespace {

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ZoneMode mode_from_name(const std::string& s) {
  if (s == "Standard") return ZoneMode::Standard;
  if (s == "CrowdedArea") return ZoneMode::CrowdedArea;
  if (s == "Corridor") return ZoneMode::Corridor;
  throw Error("malformed log: unknown zone mode '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  // strtod instead of stod: underflow to a subnormal is fine in a log.
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty())
    throw Error("malformed log: bad number '" + s + "'");
  return v;
}

/// key=value pairs separated by single spaces.
std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# stlcbf-trajectory v1\n";
  out << "# formula: " << log.formula_text << "\n";
  out << "# dt: " << g9(log.dt) << "\n";
  out << "# horizon: " << g9(log.horizon) << "\n";
  if (log.aborted) out << "# aborted: " << log.abort_reason << "\n";
  for (const auto& w : log.warnings) out << "# warning: " << w << "\n";
  for (const auto& task : log.tasks) {
    out << "# task: name=" << task.name << " a=" << g9(task.window.a)
        << " b=" << g9(task.window.b) << " r=";
    for (std::size_t i = 0; i < task.thresholds.size(); ++i) {
      if (i) out << '|';
      out << g9(task.thresholds[i]);
    }
    out << "\n";
  }
  for (const auto& o : log.obstacles) {
    out << "# obstacle: id=" << o.id << " radius=" << g9(o.radius);
    if (o.motion) {
      out << " kind=rhodonea cx=" << g9(o.center.x()) << " cy=" << g9(o.center.y())
          << " A=" << g9(o.motion->amplitude) << " k=" << g9(o.motion->k)
          << " omega=" << g9(o.motion->omega) << " phase=" << g9(o.motion->phase);
    } else {
      out << " kind=static cx=" << g9(o.center.x()) << " cy=" << g9(o.center.y());
    }
    out << "\n";
  }
  out << "t,x,y,theta,u1,u2,u3,speed,vmax,mode,b,active_task,event\n";
  for (const auto& r : log.rows) {
    out << g9(r.t) << ',' << g9(r.x.x()) << ',' << g9(r.x.y()) << ',' << g9(r.x.z())
        << ',' << g9(r.u.x()) << ',' << g9(r.u.y()) << ',' << g9(r.u.z()) << ','
        << g9(r.speed) << ',' << g9(r.vmax) << ',' << zone_mode_name(r.mode) << ','
        << g9(r.b) << ',' << r.active_task << ',' << r.events << "\n";
  }
}

TrajectoryLog read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open log '" + path + "'");
  TrajectoryLog log;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      const std::string trimmed_key = key.substr(key.find_first_not_of(' '));
      if (trimmed_key == "formula") {
        log.formula_text = value;
      } else if (trimmed_key == "dt") {
        log.dt = to_double(value);
      } else if (trimmed_key == "horizon") {
        log.horizon = to_double(value);
      } else if (trimmed_key == "aborted") {
        log.aborted = true;
        log.abort_reason = value;
      } else if (trimmed_key == "warning") {
        log.warnings.push_back(value);
      } else if (trimmed_key == "task") {
        auto kv = parse_kv(value);
        TaskSummary task;
        task.name = kv.count("name") ? kv["name"] : "?";
        task.window = Interval(to_double(kv.at("a")), to_double(kv.at("b")));
        if (kv.count("r") && !kv["r"].empty())
          for (const auto& rtext : split(kv["r"], '|'))
            task.thresholds.push_back(to_double(rtext));
        log.tasks.push_back(std::move(task));
      } else if (trimmed_key == "obstacle") {
        auto kv = parse_kv(value);
        Obstacle o;
        o.id = kv.at("id");
        o.radius = to_double(kv.at("radius"));
        o.center = {to_double(kv.at("cx")), to_double(kv.at("cy"))};
        if (kv.at("kind") == "rhodonea") {
          RhodoneaParams rp;
          rp.amplitude = to_double(kv.at("A"));
          rp.k = to_double(kv.at("k"));
          rp.omega = to_double(kv.at("omega"));
          rp.phase = to_double(kv.at("phase"));
          o.motion = rp;
        }
        log.obstacles.push_back(std::move(o));
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("t,x,y", 0) != 0)
        throw Error("malformed log: missing header row in '" + path + "'");
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 13) throw Error("malformed log: expected 13 columns, got " +
                                       std::to_string(cols.size()));
    LogRow r;
    r.t = to_double(cols[0]);
    r.x = {to_double(cols[1]), to_double(cols[2]), to_double(cols[3])};
    r.u = {to_double(cols[4]), to_double(cols[5]), to_double(cols[6])};
    r.speed = to_double(cols[7]);
    r.vmax = to_double(cols[8]);
    r.mode = mode_from_name(cols[9]);
    r.b = to_double(cols[10]);
    r.active_task = static_cast<int>(to_double(cols[11]));
    r.events = cols[12];
    log.rows.push_back(std::move(r));
  }
  if (!header_seen) throw Error("malformed log: no header row in '" + path + "'");
  return log;
}

void write_speed_dat(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# t speed vmax\n";
  for (const auto& r : log.rows)
    out << g9(r.t) << ' ' << g9(r.speed) << ' ' << g9(r.vmax) << "\n";
}

void write_barrier_dat(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# t b\n";
  for (const auto& r : log.rows) out << g9(r.t) << ' ' << g9(r.b) << "\n";
}

void write_path_dat(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# x y";
  for (const auto& o : log.obstacles) out << ' ' << o.id << "_x " << o.id << "_y";
  out << "\n";
  for (const auto& r : log.rows) {
    out << g9(r.x.x()) << ' ' << g9(r.x.y());
    for (const auto& o : log.obstacles) {
      const Eigen::Vector2d p = obstacle_state(o, r.t).first;
      out << ' ' << g9(p.x()) << ' ' << g9(p.y());
    }
    out << "\n";
  }
}

}  // namespace stlcbf
