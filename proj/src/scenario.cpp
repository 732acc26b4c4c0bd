#include "stlcbf/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stlcbf/parser.hpp"
#include "stlcbf/simulator.hpp"

namespace stlcbf {

namespace {

using nlohmann::json;

Eigen::Vector2d as_vec2(const json& j, const std::string& what,
                        std::vector<std::string>& errs) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    errs.push_back(what + ": expected [x, y]");
    return Eigen::Vector2d::Zero();
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Expands $name macros using the waypoint table.
std::string substitute_waypoints(const std::string& text,
                                 const std::map<std::string, Eigen::Vector2d>& wps,
                                 std::vector<std::string>& errs) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '$') {
      out += text[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                               text[j] == '_'))
      ++j;
    const std::string name = text.substr(i + 1, j - i - 1);
    auto it = wps.find(name);
    if (name.empty() || it == wps.end()) {
      errs.push_back("formula: unresolved waypoint reference '$" + name + "'");
      out += text.substr(i, j - i);
    } else {
      out += "[" + format_number(it->second.x()) + "," + format_number(it->second.y()) + "]";
    }
    i = j;
  }
  return out;
}

struct TemporalPred {
  Predicate pred;
  bool negated;
};

void collect_temporal_preds(const Formula& f, std::vector<TemporalPred>& out) {
  switch (f.kind()) {
    case Formula::Kind::And:
      collect_temporal_preds(f.left(), out);
      collect_temporal_preds(f.right(), out);
      break;
    case Formula::Kind::Always:
    case Formula::Kind::Eventually:
      collect_temporal_preds(f.left(), out);
      break;
    case Formula::Kind::Until:
      collect_temporal_preds(f.left(), out);
      collect_temporal_preds(f.right(), out);
      break;
    case Formula::Kind::Pred:
      out.push_back({f.predicate(), false});
      break;
    case Formula::Kind::NotPred:
      out.push_back({f.predicate(), true});
      break;
    case Formula::Kind::True:
      break;
  }
}

ZoneMode parse_mode(const std::string& s, std::vector<std::string>& errs) {
  if (s == "Standard" || s == "standard") return ZoneMode::Standard;
  if (s == "CrowdedArea" || s == "crowded") return ZoneMode::CrowdedArea;
  if (s == "Corridor" || s == "corridor") return ZoneMode::Corridor;
  errs.push_back("zones: unknown mode '" + s + "' (Standard|CrowdedArea|Corridor)");
  return ZoneMode::Standard;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError("scenario '" + name + "': " + e.what());
  }

  ScenarioConfig cfg;
  cfg.name = name;
  std::vector<std::string> errs;

  // --- waypoints ------------------------------------------------------------
  if (doc.contains("waypoints")) {
    for (auto& [key, val] : doc["waypoints"].items())
      cfg.waypoints[key] = as_vec2(val, "waypoints." + key, errs);
  }

  // --- formula ---------------------------------------------------------------
  if (!doc.contains("formula") || !doc["formula"].is_string()) {
    errs.push_back("formula: missing or not a string");
  } else {
    cfg.formula_text =
        substitute_waypoints(doc["formula"].get<std::string>(), cfg.waypoints, errs);
    try {
      cfg.formula = parse_formula(cfg.formula_text);
    } catch (const Error& e) {
      errs.push_back(std::string("formula: ") + e.what());
    }
  }

  // --- zones ----------------------------------------------------------------
  if (doc.contains("zones")) {
    const json& z = doc["zones"];
    if (z.contains("default_vmax")) {
      cfg.world.standard_vmax = z["default_vmax"].get<double>();
      if (!(cfg.world.standard_vmax > 0.0))
        errs.push_back("zones.default_vmax: must be > 0");
    }
    if (z.contains("crowd_near_obstacles")) {
      const json& c = z["crowd_near_obstacles"];
      if (c.contains("distance")) {
        cfg.world.crowd_proximity = c["distance"].get<double>();
        if (cfg.world.crowd_proximity < 0.0)
          errs.push_back("zones.crowd_near_obstacles.distance: must be >= 0");
      }
      if (c.contains("vmax")) {
        cfg.world.crowded_vmax = c["vmax"].get<double>();
        if (!(cfg.world.crowded_vmax > 0.0))
          errs.push_back("zones.crowd_near_obstacles.vmax: must be > 0");
      }
    }
    if (z.contains("areas")) {
      for (const auto& a : z["areas"]) {
        Zone zone;
        if (a.contains("rect")) {
          const json& r = a["rect"];
          if (!r.is_array() || r.size() != 4) {
            errs.push_back("zones.areas: rect expects [x0, y0, x1, y1]");
            continue;
          }
          zone.shape = Zone::Shape::Rect;
          zone.lo = {r[0].get<double>(), r[1].get<double>()};
          zone.hi = {r[2].get<double>(), r[3].get<double>()};
          if (zone.lo.x() > zone.hi.x() || zone.lo.y() > zone.hi.y())
            errs.push_back("zones.areas: rect corners must satisfy x0<=x1, y0<=y1");
        } else if (a.contains("circle")) {
          const json& c = a["circle"];
          if (!c.is_array() || c.size() != 3) {
            errs.push_back("zones.areas: circle expects [cx, cy, radius]");
            continue;
          }
          zone.shape = Zone::Shape::Circle;
          zone.center = {c[0].get<double>(), c[1].get<double>()};
          zone.radius = c[2].get<double>();
          if (!(zone.radius > 0.0)) errs.push_back("zones.areas: circle radius must be > 0");
        } else {
          errs.push_back("zones.areas: zone needs a rect or circle shape");
          continue;
        }
        if (a.contains("mode")) zone.mode = parse_mode(a["mode"].get<std::string>(), errs);
        if (a.contains("vmax")) {
          zone.v_max = a["vmax"].get<double>();
          if (!(zone.v_max > 0.0)) errs.push_back("zones.areas: vmax must be > 0");
        }
        cfg.world.zones.push_back(zone);
      }
    }
  }

  // --- obstacles --------------------------------------------------------------
  if (doc.contains("obstacles")) {
    std::set<std::string> seen;
    for (const auto& o : doc["obstacles"]) {
      Obstacle obs;
      if (!o.contains("id") || !o["id"].is_string()) {
        errs.push_back("obstacles: every obstacle needs a string id");
        continue;
      }
      obs.id = o["id"].get<std::string>();
      if (!seen.insert(obs.id).second)
        errs.push_back("obstacles: duplicate id '" + obs.id + "'");
      if (o.contains("radius")) obs.radius = o["radius"].get<double>();
      if (!(obs.radius > 0.0))
        errs.push_back("obstacles." + obs.id + ": radius must be > 0");
      if (o.contains("static")) {
        obs.center = as_vec2(o["static"], "obstacles." + obs.id + ".static", errs);
      } else if (o.contains("rhodonea")) {
        const json& m = o["rhodonea"];
        obs.center = as_vec2(m.value("center", json::array({0, 0})),
                             "obstacles." + obs.id + ".rhodonea.center", errs);
        RhodoneaParams rp;
        rp.amplitude = m.value("amplitude", 1.0);
        rp.k = m.value("k", 2.0);
        rp.omega = m.value("omega", 0.5);
        rp.phase = m.value("phase", 0.0);
        if (!(rp.amplitude >= 0.0))
          errs.push_back("obstacles." + obs.id + ": rhodonea amplitude must be >= 0");
        if (!std::isfinite(rp.k) || !std::isfinite(rp.omega) || !std::isfinite(rp.phase))
          errs.push_back("obstacles." + obs.id + ": rhodonea parameters must be finite");
        obs.motion = rp;
      } else {
        errs.push_back("obstacles." + obs.id + ": needs a static position or rhodonea motion");
      }
      cfg.world.obstacles.push_back(obs);
    }
  }

  // --- dynamics ----------------------------------------------------------------
  if (doc.contains("dynamics")) {
    const json& d = doc["dynamics"];
    const std::string model = d.value("model", "identity");
    if (model == "identity") {
      cfg.dynamics = Dynamics::identity();
    } else if (model == "omni3" || model == "three_wheel_omni") {
      const double L = d.value("chassis_radius", 0.2);
      if (!(L > 0.0)) {
        errs.push_back("dynamics.chassis_radius: must be > 0");
      } else {
        cfg.dynamics = Dynamics::three_wheel_omni(L);
      }
    } else {
      errs.push_back("dynamics.model: unknown model '" + model +
                     "' (identity|omni3)");
    }
  }

  // --- barrier -------------------------------------------------------------------
  if (doc.contains("barrier")) {
    const json& b = doc["barrier"];
    cfg.barrier.eta = b.value("eta", cfg.barrier.eta);
    cfg.barrier.kappa = b.value("kappa", cfg.barrier.kappa);
    cfg.barrier.h_cap = b.value("h_cap", cfg.barrier.h_cap);
    cfg.barrier.safety_margin = b.value("safety_margin", cfg.barrier.safety_margin);
    if (b.contains("r")) cfg.barrier.r = b["r"].get<double>();
    if (b.contains("gamma0")) cfg.barrier.gamma0 = b["gamma0"].get<double>();
    if (b.contains("gamma_inf")) cfg.barrier.gamma_inf = b["gamma_inf"].get<double>();
    if (b.contains("q_diag")) {
      const json& q = b["q_diag"];
      if (!q.is_array() || q.size() != 3) {
        errs.push_back("barrier.q_diag: expected [q1, q2, q3]");
      } else {
        cfg.barrier.q_diag = {q[0].get<double>(), q[1].get<double>(), q[2].get<double>()};
      }
    }
    if (!(cfg.barrier.eta > 0.0)) errs.push_back("barrier.eta: must be > 0");
    if (!(cfg.barrier.kappa > 0.0)) errs.push_back("barrier.kappa: must be > 0");
    if (!(cfg.barrier.h_cap > 0.0)) errs.push_back("barrier.h_cap: must be > 0");
    if (!(cfg.barrier.safety_margin >= 0.0))
      errs.push_back("barrier.safety_margin: must be >= 0");
    if ((cfg.barrier.q_diag.array() <= 0.0).any())
      errs.push_back("barrier.q_diag: entries must be > 0");
  }

  // --- replan ----------------------------------------------------------------------
  if (doc.contains("replan")) {
    const json& r = doc["replan"];
    cfg.replan.p_i = r.value("p_i", cfg.replan.p_i);
    cfg.replan.p_r = r.value("p_r", cfg.replan.p_r);
    cfg.replan.floor = r.value("floor", cfg.replan.floor);
  }
  if (!(cfg.replan.p_i >= 0.5 && cfg.replan.p_i < 1.0))
    errs.push_back("replan.p_i: " + format_number(cfg.replan.p_i) +
                   " outside the admissible range [0.5, 1)");
  if (!(cfg.replan.p_r > 0.0 && cfg.replan.p_r < 0.2))
    errs.push_back("replan.p_r: " + format_number(cfg.replan.p_r) +
                   " outside the admissible range (0, 0.2)");
  if (!(cfg.replan.floor > 0.0 && cfg.replan.floor < cfg.replan.p_i))
    errs.push_back("replan.floor: must lie in (0, p_i)");

  // --- sim --------------------------------------------------------------------------
  if (doc.contains("sim")) {
    const json& s = doc["sim"];
    cfg.sim.dt = s.value("dt", cfg.sim.dt);
    cfg.sim.seed = s.value("seed", cfg.sim.seed);
    cfg.sim.max_retries = s.value("max_retries", cfg.sim.max_retries);
    cfg.sim.retime = s.value("retime", cfg.sim.retime);
    if (s.contains("start")) {
      const json& st = s["start"];
      if (st.is_string()) {
        auto it = cfg.waypoints.find(st.get<std::string>());
        if (it == cfg.waypoints.end()) {
          errs.push_back("sim.start: unknown waypoint '" + st.get<std::string>() + "'");
        } else {
          cfg.sim.start.head<2>() = it->second;
        }
      } else if (st.is_array() && (st.size() == 2 || st.size() == 3)) {
        cfg.sim.start.x() = st[0].get<double>();
        cfg.sim.start.y() = st[1].get<double>();
        if (st.size() == 3) cfg.sim.start.z() = st[2].get<double>();
      } else {
        errs.push_back("sim.start: expected a waypoint name or [x, y(, theta)]");
      }
    }
    if (s.contains("theta0")) cfg.sim.start.z() = s["theta0"].get<double>();
  }
  if (!(cfg.sim.dt > 0.0)) errs.push_back("sim.dt: must be > 0");
  if (cfg.sim.max_retries < 0) errs.push_back("sim.max_retries: must be >= 0");

  // --- cross checks against the formula ----------------------------------------------
  if (cfg.formula) {
    try {
      schedule_tasks(*cfg.formula, &cfg.warnings);
    } catch (const Error& e) {
      errs.push_back(std::string("formula: ") + e.what());
    }
    std::vector<TemporalPred> preds;
    collect_temporal_preds(*cfg.formula, preds);
    for (const auto& tp : preds) {
      const double h_opt =
          compute_hopt(tp.pred, tp.negated, cfg.barrier.h_cap > 0 ? cfg.barrier.h_cap : 1e6);
      if (cfg.barrier.r && !(*cfg.barrier.r > 0.0 && *cfg.barrier.r < h_opt))
        errs.push_back("barrier.r: " + format_number(*cfg.barrier.r) +
                       " outside (0, h_opt) = (0, " + format_number(h_opt) +
                       ") for a task goal");
      if (cfg.barrier.gamma_inf && !(*cfg.barrier.gamma_inf < h_opt))
        errs.push_back("barrier.gamma_inf: must be below h_opt = " + format_number(h_opt) +
                       " for every task goal");
      if (tp.pred.kind == Predicate::Kind::Clearance &&
          !cfg.world.has_obstacle(tp.pred.obstacle_id))
        errs.push_back("formula: clear() references unknown obstacle '" +
                       tp.pred.obstacle_id + "'");
    }
    if (cfg.barrier.r && cfg.barrier.gamma_inf &&
        !(*cfg.barrier.gamma_inf > *cfg.barrier.r))
      errs.push_back("barrier.gamma_inf: must exceed barrier.r");
  }

  if (!errs.empty()) {
    std::ostringstream msg;
    msg << "scenario '" << name << "' failed validation:";
    for (const auto& e : errs) msg << "\n  - " << e;
    throw ConfigError(msg.str());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace stlcbf
