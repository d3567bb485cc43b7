// Copyright 2026 The shwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shwave/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "shwave/error.hpp"
#include "shwave/parallel.hpp"
#include "shwave/version.hpp"

namespace fs = std::filesystem;

namespace shwave::app {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::validation, what); }

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) invalid(where + ": unknown key '" + it.key() + "'");
}

double get_number(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) invalid(where + ": missing '" + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) invalid(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(where + "." + key + " must be finite");
  return x;
}

template <class T>
void read_opt(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  const std::string path = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) invalid(path + " must be true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() < 0) invalid(path + " must be a non-negative integer");
    out = static_cast<T>(v.get<long long>());
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) invalid(path + " must be a string");
    out = v.get<std::string>();
  } else {
    if (!v.is_number()) invalid(path + " must be a number");
    out = v.get<double>();
  }
}

void require_positive(double v, const std::string& what) {
  if (!(std::isfinite(v) && v > 0.0)) invalid(what + " must be positive");
}

struct Param {
  const char* key;
  std::optional<double> fallback;
};

const std::map<std::string, std::vector<Param>>& registry() {
  static const std::map<std::string, std::vector<Param>> r = {
      {"constant", {{"rho", {}}, {"mu", {}}}},
      {"exp_density", {{"rho_inf", {}}, {"delta_rho", {}}, {"d", {}}, {"mu", 1.0}}},
      {"exp_modulus", {{"mu_inf", {}}, {"delta_mu", {}}, {"d", {}}, {"rho", 1.0}}},
      {"power_density", {{"rho_inf", {}}, {"c", {}}, {"p", {}}, {"mu", 1.0}}},
      {"smoothed_layer",
       {{"rho_1", {}}, {"mu_1", {}}, {"rho_s", {}}, {"mu_s", {}}, {"y_s", {}}, {"width", {}}}},
  };
  return r;
}

std::vector<double> parse_k(const Json& doc) {
  std::vector<double> k;
  if (doc.contains("k") && doc.contains("k_grid")) invalid("config: give either 'k' or 'k_grid'");
  if (doc.contains("k")) {
    const Json& v = doc.at("k");
    if (v.is_number()) {
      k.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const Json& e : v) {
        if (!e.is_number()) invalid("config: 'k' entries must be numbers");
        k.push_back(e.get<double>());
      }
    } else {
      invalid("config: 'k' must be a number or a list of numbers");
    }
  } else if (doc.contains("k_grid")) {
    const Json& g = doc.at("k_grid");
    if (g.is_array()) {
      for (const Json& e : g) {
        if (!e.is_number()) invalid("config: 'k_grid' entries must be numbers");
        k.push_back(e.get<double>());
      }
    } else if (g.is_object()) {
      check_keys(g, {"start", "stop", "step", "count"}, "k_grid");
      const double a = get_number(g, "start", "k_grid");
      const double b = get_number(g, "stop", "k_grid");
      if (!(b >= a)) invalid("k_grid: stop must not be below start");
      if (g.contains("step") == g.contains("count")) invalid("k_grid: give exactly one of 'step' and 'count'");
      if (g.contains("step")) {
        const double h = get_number(g, "step", "k_grid");
        require_positive(h, "k_grid.step");
        const double n = std::floor((b - a) / h + 1e-9);
        if (n > 1e6) invalid("k_grid: more than a million points");
        for (long i = 0; i <= static_cast<long>(n); ++i) k.push_back(a + static_cast<double>(i) * h);
      } else {
        std::size_t n = 0;
        read_opt(g, "count", n, "k_grid");
        if (n < 1 || n > 1000000) invalid("k_grid.count must be between 1 and 1000000");
        for (std::size_t i = 0; i < n; ++i)
          k.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    } else {
      invalid("config: 'k_grid' must be a list or {start, stop, step|count}");
    }
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    require_positive(k[i], "config: every k");
    if (i > 0 && !(k[i] > k[i - 1])) invalid("config: k values must be strictly increasing");
  }
  return k;
}

Json class_json(const ProfileClass& c) {
  Json j;
  j["monotonicity_at_inf"] = to_string(c.monotonicity_at_inf);
  j["global_negative"] = c.global_negative;
  j["min_mu_over_rho"] = c.min_mu_over_rho;
  j["argmin_depth"] = number(c.argmin_depth);
  j["infimum_at_infinity"] = !std::isfinite(c.argmin_depth);
  j["lipschitz_estimate"] = c.lipschitz_estimate;
  j["coarse_grid_warning"] = c.coarse_grid_warning;
  return j;
}

Json mode_json(double k, const Mode& m) {
  Json j;
  j["m"] = m.m;
  j["k"] = k;
  j["omega"] = std::sqrt(m.Omega);
  j["K"] = m.K;
  j["Omega"] = m.Omega;
  j["residual"] = m.residual;
  j["phi_surface"] = m.phi_surface;
  j["phi_decay"] = m.phi_decay;
  j["y_bar"] = m.y_bar;
  j["y_tail"] = m.y_tail;
  j["flagged"] = m.flagged;
  return j;
}

Json search_json(double k, const ModeSearch& s) {
  Json j;
  j["k"] = k;
  j["K"] = s.K;
  j["interval"] = {number(s.interval.lo), number(s.interval.hi)};
  j["count"] = s.modes.size();
  j["truncated"] = s.truncated;
  j["nonexistence"] = s.nonexistence;
  if (!s.reason.empty()) j["reason"] = s.reason;
  j["warnings"] = s.warnings;
  j["evaluations"] = s.evaluations;
  Json modes = Json::array();
  for (const Mode& m : s.modes) modes.push_back(mode_json(k, m));
  j["modes"] = std::move(modes);
  return j;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + p.string());
}

}  // namespace

const char* to_string(Task t) noexcept {
  switch (t) {
    case Task::classify: return "classify";
    case Task::modes: return "modes";
    case Task::branches: return "branches";
    case Task::estimate: return "estimate";
    case Task::oscillation: return "oscillation";
  }
  return "?";
}

Json normalize_profile(const Json& spec) {
  if (!spec.is_object()) invalid("profile must be an object");
  if (!spec.contains("type") || !spec.at("type").is_string()) invalid("profile: missing 'type'");
  const std::string type = spec.at("type").get<std::string>();
  Json out;
  out["type"] = type;
  if (type == "table") {
    check_keys(spec, {"type", "file", "samples", "rho_inf", "mu_inf"}, "profile");
    if (spec.contains("file") == spec.contains("samples"))
      invalid("profile: a table needs exactly one of 'file' and 'samples'");
    if (spec.contains("file")) {
      if (!spec.at("file").is_string()) invalid("profile.file must be a string");
      out["file"] = spec.at("file");
    } else {
      const Json& s = spec.at("samples");
      if (!s.is_array()) invalid("profile.samples must be a list of [y, rho, mu]");
      Json rows = Json::array();
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Json& r = s[i];
        if (!r.is_array() || r.size() != 3 || !r[0].is_number() || !r[1].is_number() ||
            !r[2].is_number())
          invalid("profile.samples[" + std::to_string(i) + "] must be [y, rho, mu]");
        rows.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()});
      }
      out["samples"] = std::move(rows);
    }
    for (const char* key : {"rho_inf", "mu_inf"})
      if (spec.contains(key)) out[key] = get_number(spec, key, "profile");
    return out;
  }
  const auto it = registry().find(type);
  if (it == registry().end()) invalid("profile: unknown type '" + type + "'");
  std::set<std::string> allowed = {"type"};
  for (const Param& p : it->second) allowed.insert(p.key);
  check_keys(spec, allowed, "profile");
  for (const Param& p : it->second) {
    if (spec.contains(p.key))
      out[p.key] = get_number(spec, p.key, "profile");
    else if (p.fallback)
      out[p.key] = *p.fallback;
    else
      invalid("profile (" + type + "): missing '" + p.key + "'");
  }
  return out;
}

std::vector<Sample> read_table(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open profile table " + file.string());
  std::vector<Sample> rows;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  bool seen_content = false;
  const std::string where = file.string() + ":";
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    double v[3];
    bool numeric = tok.size() == 3;
    for (std::size_t i = 0; numeric && i < 3; ++i) {
      const char* b = tok[i].data();
      const char* e = b + tok[i].size();
      const auto r = std::from_chars(b, e, v[i]);
      numeric = r.ec == std::errc() && r.ptr == e && std::isfinite(v[i]);
    }
    const bool first = !seen_content;
    seen_content = true;
    if (!numeric) {
      if (first && tok.size() == 3) continue;  // header row
      invalid(where + std::to_string(lineno) + ": expected three numbers 'y rho mu'");
    }
    const std::string at = where + std::to_string(lineno) + ": ";
    if (v[0] < 0.0) invalid(at + "depth must be >= 0");
    if (!(v[1] > 0.0) || !(v[2] > 0.0)) invalid(at + "rho and mu must be positive");
    if (!rows.empty() && !(v[0] > rows.back().y))
      invalid(at + "depth " + fmt("%.17g", v[0]) + " does not increase (previous row on line " +
              std::to_string(line_of.back()) + " has depth " + fmt("%.17g", rows.back().y) + ")");
    rows.push_back({v[0], v[1], v[2]});
    line_of.push_back(lineno);
  }
  if (rows.size() < 2) invalid(where + " a table needs at least two rows");
  if (rows.front().y != 0.0)
    invalid(where + std::to_string(line_of.front()) + ": the first row must be at depth 0");
  return rows;
}

MaterialProfile make_profile(const Json& spec, const fs::path& base_dir) {
  const Json p = normalize_profile(spec);
  const std::string type = p.at("type").get<std::string>();
  auto v = [&](const char* k) { return p.at(k).get<double>(); };
  if (type == "constant") return MaterialProfile::constant(v("rho"), v("mu"));
  if (type == "exp_density")
    return MaterialProfile::exp_density(v("rho_inf"), v("delta_rho"), v("d"), v("mu"));
  if (type == "exp_modulus")
    return MaterialProfile::exp_modulus(v("mu_inf"), v("delta_mu"), v("d"), v("rho"));
  if (type == "power_density")
    return MaterialProfile::power_density(v("rho_inf"), v("c"), v("p"), v("mu"));
  if (type == "smoothed_layer")
    return MaterialProfile::smoothed_layer(v("rho_1"), v("mu_1"), v("rho_s"), v("mu_s"), v("y_s"),
                                           v("width"));
  std::optional<double> rho_inf, mu_inf;
  if (p.contains("rho_inf")) rho_inf = v("rho_inf");
  if (p.contains("mu_inf")) mu_inf = v("mu_inf");
  if (p.contains("file")) {
    fs::path f = p.at("file").get<std::string>();
    if (f.is_relative() && !base_dir.empty()) f = base_dir / f;
    auto rows = read_table(f);
    try {
      return MaterialProfile::table(std::move(rows), rho_inf, mu_inf);
    } catch (const Error& e) {
      invalid(f.string() + ": " + e.what());
    }
  }
  std::vector<Sample> rows;
  for (const Json& r : p.at("samples")) rows.push_back({r[0], r[1], r[2]});
  return MaterialProfile::table(std::move(rows), rho_inf, mu_inf);
}

RunConfig parse_config(const Json& doc, const fs::path& base_dir) {
  check_keys(doc,
             {"schema", "description", "profile", "task", "k", "k_grid", "solver", "matching",
              "oscillation", "output", "workers"},
             "config");
  if (!doc.contains("schema") || doc.at("schema") != kConfigSchema)
    invalid(std::string("config: 'schema' must be \"") + kConfigSchema + "\"");
  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (!doc.contains("profile")) invalid("config: missing 'profile'");
  cfg.profile_spec = normalize_profile(doc.at("profile"));

  if (!doc.contains("task") || !doc.at("task").is_string()) invalid("config: missing 'task'");
  const std::string task = doc.at("task").get<std::string>();
  bool known = false;
  for (Task t : {Task::classify, Task::modes, Task::branches, Task::estimate, Task::oscillation})
    if (task == to_string(t)) {
      cfg.task = t;
      known = true;
    }
  if (!known) invalid("config: unknown task '" + task + "'");

  cfg.k = parse_k(doc);
  const bool needs_k =
      cfg.task == Task::modes || cfg.task == Task::branches || cfg.task == Task::estimate;
  if (needs_k && cfg.k.empty()) invalid("config: task '" + task + "' needs 'k' or 'k_grid'");

  SolverOptions& s = cfg.solver;
  if (doc.contains("solver")) {
    const Json& j = doc.at("solver");
    check_keys(j,
               {"coordinates", "rel_tol", "abs_tol", "max_step", "max_modes", "omega_grid_n",
                "root_tol", "residual_tol"},
               "solver");
    std::string coords = to_string(s.coordinates);
    read_opt(j, "coordinates", coords, "solver");
    if (coords == "depth")
      s.coordinates = Coordinates::depth;
    else if (coords == "tau")
      s.coordinates = Coordinates::tau;
    else
      invalid("solver.coordinates must be \"depth\" or \"tau\"");
    read_opt(j, "rel_tol", s.integrator.rel_tol, "solver");
    read_opt(j, "abs_tol", s.integrator.abs_tol, "solver");
    if (j.contains("max_step") && j.at("max_step").is_null())
      s.integrator.max_step = kInf;
    else
      read_opt(j, "max_step", s.integrator.max_step, "solver");
    read_opt(j, "max_modes", s.max_modes, "solver");
    read_opt(j, "omega_grid_n", s.omega_grid_n, "solver");
    read_opt(j, "root_tol", s.root_tol, "solver");
    read_opt(j, "residual_tol", s.residual_tol, "solver");
  }
  require_positive(s.integrator.rel_tol, "solver.rel_tol");
  require_positive(s.integrator.abs_tol, "solver.abs_tol");
  if (!(s.integrator.max_step > 0.0)) invalid("solver.max_step must be positive");
  if (s.max_modes < 1) invalid("solver.max_modes must be at least 1");
  if (s.omega_grid_n < 8) invalid("solver.omega_grid_n must be at least 8");
  require_positive(s.root_tol, "solver.root_tol");
  require_positive(s.residual_tol, "solver.residual_tol");

  MatchingOptions& m = s.matching;
  if (doc.contains("matching")) {
    const Json& j = doc.at("matching");
    check_keys(j,
               {"margin", "default_y_bar", "guard", "tail_rel_tol", "tail_residual_tol",
                "damping_tol", "robustness_tol", "max_retries", "robustness_check",
                "tail_stretch"},
               "matching");
    read_opt(j, "margin", m.margin, "matching");
    read_opt(j, "default_y_bar", m.default_y_bar, "matching");
    read_opt(j, "guard", m.guard, "matching");
    read_opt(j, "tail_rel_tol", m.tail_rel_tol, "matching");
    if (j.contains("tail_residual_tol") && j.at("tail_residual_tol").is_null())
      m.tail_residual_tol = kInf;
    else
      read_opt(j, "tail_residual_tol", m.tail_residual_tol, "matching");
    read_opt(j, "damping_tol", m.damping_tol, "matching");
    read_opt(j, "robustness_tol", m.robustness_tol, "matching");
    int retries = m.max_retries;
    read_opt(j, "max_retries", retries, "matching");
    m.max_retries = retries;
    read_opt(j, "robustness_check", m.robustness_check, "matching");
    read_opt(j, "tail_stretch", m.tail_stretch, "matching");
  }
  require_positive(m.margin, "matching.margin");
  require_positive(m.default_y_bar, "matching.default_y_bar");
  if (!(m.guard > 0.0 && m.guard < 0.5)) invalid("matching.guard must lie in (0, 0.5)");
  require_positive(m.tail_rel_tol, "matching.tail_rel_tol");
  if (!(m.tail_residual_tol > 0.0)) invalid("matching.tail_residual_tol must be positive");
  if (!(m.damping_tol > 0.0 && m.damping_tol < 1.0)) invalid("matching.damping_tol must lie in (0, 1)");
  require_positive(m.robustness_tol, "matching.robustness_tol");
  if (!(m.tail_stretch >= 1.0 && std::isfinite(m.tail_stretch)))
    invalid("matching.tail_stretch must be >= 1");

  if (doc.contains("oscillation")) {
    check_keys(doc.at("oscillation"), {"y_max"}, "oscillation");
    read_opt(doc.at("oscillation"), "y_max", cfg.oscillation_y_max, "oscillation");
    if (!(cfg.oscillation_y_max >= 16.0)) invalid("oscillation.y_max must be at least 16");
  }
  if (doc.contains("output")) {
    const Json& j = doc.at("output");
    check_keys(j, {"dir", "prefix", "csv", "plot"}, "output");
    std::string dir = cfg.output.dir.string();
    read_opt(j, "dir", dir, "output");
    cfg.output.dir = dir;
    read_opt(j, "prefix", cfg.output.prefix, "output");
    if (cfg.output.prefix.empty() || cfg.output.prefix.find('/') != std::string::npos)
      invalid("output.prefix must be a plain file name stem");
    read_opt(j, "csv", cfg.output.csv, "output");
    read_opt(j, "plot", cfg.output.plot, "output");
  }
  if (cfg.output.dir.is_relative() && !base_dir.empty() && doc.contains("output") &&
      doc.at("output").contains("dir"))
    cfg.output.dir = base_dir / cfg.output.dir;
  read_opt(doc, "workers", cfg.workers, "config");
  if (cfg.workers < 1) invalid("config.workers must be at least 1");

  if (cfg.profile_spec.contains("file")) {
    fs::path f = cfg.profile_spec.at("file").get<std::string>();
    if (f.is_relative() && !base_dir.empty()) f = base_dir / f;
    if (!fs::exists(f)) invalid("profile.file does not exist: " + f.string());
  }
  return cfg;
}

RunConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) invalid("cannot open config " + file.string());
  Json doc;
  try {
    doc = Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    invalid(file.string() + ": " + e.what());
  }
  return parse_config(doc, file.parent_path());
}

Json tolerances_json(const RunConfig& cfg) {
  const SolverOptions& s = cfg.solver;
  const MatchingOptions& m = s.matching;
  Json t;
  t["coordinates"] = to_string(s.coordinates);
  t["rel_tol"] = s.integrator.rel_tol;
  t["abs_tol"] = s.integrator.abs_tol;
  t["max_step"] = number(s.integrator.max_step);
  t["max_modes"] = s.max_modes;
  t["omega_grid_n"] = s.omega_grid_n;
  t["root_tol"] = s.root_tol;
  t["residual_tol"] = s.residual_tol;
  Json mj;
  mj["margin"] = m.margin;
  mj["default_y_bar"] = m.default_y_bar;
  mj["guard"] = m.guard;
  mj["tail_rel_tol"] = m.tail_rel_tol;
  mj["tail_residual_tol"] = number(m.tail_residual_tol);
  mj["damping_tol"] = m.damping_tol;
  mj["robustness_tol"] = m.robustness_tol;
  mj["max_retries"] = m.max_retries;
  mj["robustness_check"] = m.robustness_check;
  mj["tail_stretch"] = m.tail_stretch;
  t["matching"] = std::move(mj);
  t["oscillation_y_max"] = cfg.oscillation_y_max;
  return t;
}

std::string csv_report(const std::vector<CsvRow>& rows) {
  std::string out = "k,omega,K,Omega,mode_index,residual,y_bar,y_tail\n";
  char buf[512];
  for (const CsvRow& r : rows) {
    const Mode& m = *r.mode;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", r.k,
                  std::sqrt(m.Omega), m.K, m.Omega, m.m, m.residual, m.y_bar, m.y_tail);
    out += buf;
  }
  return out;
}

namespace {

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string svg_plot(const std::vector<PlotSeries>& series, double k_max, double upper_ratio,
                     double lower_ratio) {
  const double W = 720, H = 480, left = 64, right = 24, top = 24, bottom = 48;
  const double pw = W - left - right, ph = H - top - bottom;
  const double x_max = k_max > 0.0 ? k_max : 1.0;
  double y_max = x_max * std::sqrt(upper_ratio);
  for (const PlotSeries& s : series)
    for (const auto& p : s.points) y_max = std::max(y_max, p.second);
  y_max *= 1.05;
  auto X = [&](double k) { return left + pw * k / x_max; };
  auto Y = [&](double w) { return top + ph * (1.0 - w / y_max); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  o << "<g stroke=\"black\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
    << top + ph << "\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\"/>\n</g>\n";

  const double xs = nice_step(x_max), ys = nice_step(y_max);
  for (double t = 0.0; t <= x_max * (1 + 1e-12); t += xs) {
    o << "<line x1=\"" << fmt("%.2f", X(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt("%.2f", X(t))
      << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fmt("%.2f", X(t)) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">" << fmt("%g", t) << "</text>\n";
  }
  for (double t = 0.0; t <= y_max * (1 + 1e-12); t += ys) {
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt("%.2f", Y(t)) << "\" x2=\"" << left
      << "\" y2=\"" << fmt("%.2f", Y(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << left - 8 << "\" y=\"" << fmt("%.2f", Y(t) + 4)
      << "\" text-anchor=\"end\">" << fmt("%g", t) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">k</text>\n";
  o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << top + ph / 2 << ")\">omega</text>\n";

  auto ray = [&](double ratio, const char* colour, const char* label) {
    const double w = x_max * std::sqrt(ratio);
    o << "<line class=\"" << label << "\" x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\""
      << fmt("%.3f", X(x_max)) << "\" y2=\"" << fmt("%.3f", Y(w)) << "\" stroke=\"" << colour
      << "\" stroke-dasharray=\"6 4\"/>\n";
  };
  ray(upper_ratio, "gray", "cutoff");
  ray(lower_ratio, "gray", "lower");

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#17becf"};
  for (const PlotSeries& s : series) {
    const char* c = palette[static_cast<std::size_t>(std::max(s.m - 1, 0)) % 8];
    if (s.points.size() == 1) {
      o << "<circle class=\"branch\" data-m=\"" << s.m << "\" cx=\"" << fmt("%.3f", X(s.points[0].first))
        << "\" cy=\"" << fmt("%.3f", Y(s.points[0].second)) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
      continue;
    }
    o << "<polyline class=\"branch\" data-m=\"" << s.m << "\" fill=\"none\" stroke=\"" << c
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i)
      o << (i ? " " : "") << fmt("%.3f", X(s.points[i].first)) << ','
        << fmt("%.3f", Y(s.points[i].second));
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Json compare_fixtures(const fs::path& dir, const Json& profile_spec,
                      const std::vector<ModeSearch>& searches) {
  Json out;
  out["fixtures_dir"] = dir.filename().string();
  Json entries = Json::array();
  if (!fs::is_directory(dir)) throw Error(ErrorKind::io, "fixtures directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::ifstream in(f);
    Json fx;
    try {
      fx = Json::parse(in);
    } catch (const Json::parse_error&) {
      continue;
    }
    if (!fx.is_object() || fx.value("schema", "") != kFixtureSchema) continue;
    Json spec;
    try {
      spec = normalize_profile(fx.at("profile"));
    } catch (const Error&) {
      continue;
    }
    if (spec != profile_spec) continue;
    const double K = fx.at("K").get<double>();
    for (const ModeSearch& s : searches) {
      if (std::abs(s.K - K) > 1e-12 * K) continue;
      const auto& ref = fx.at("omegas");
      const std::string method = fx.value("method", "");
      const double tol = method == "bessel" ? 1e-6 : 1e-4;
      double worst = 0.0;
      const std::size_t n = std::min(ref.size(), s.modes.size());
      for (std::size_t i = 0; i < n; ++i) {
        const double r = ref[i].get<double>();
        worst = std::max(worst, std::abs(s.modes[i].Omega - r) / r);
      }
      Json e;
      e["file"] = f.filename().string();
      e["method"] = method;
      e["K"] = K;
      e["solver_count"] = s.modes.size();
      e["oracle_count"] = ref.size();
      e["max_rel_diff"] = worst;
      e["tolerance"] = tol;
      e["agree"] = ref.size() == s.modes.size() && worst <= tol;
      entries.push_back(std::move(e));
    }
  }
  out["matched"] = entries.size();
  out["entries"] = std::move(entries);
  return out;
}

Outcome run(const Request& req) {
  Outcome res;
  RunConfig cfg;
  try {
    cfg = load_config(req.config);
    if (req.output_dir) cfg.output.dir = *req.output_dir;
    if (req.workers) {
      if (*req.workers < 1) invalid("--workers must be at least 1");
      cfg.workers = *req.workers;
    }
    if (req.plot) cfg.output.plot = true;
  } catch (const Error& e) {
    res.exit_code = 1;
    res.summary = std::string("configuration error: ") + e.what();
    return res;
  }

  Json& r = res.report;
  r["schema"] = kReportSchema;
  r["tool"] = {{"name", "shwave"}, {"version", version_string()}};
  r["generated_at"] = utc_timestamp();
  r["task"] = to_string(cfg.task);
  r["inputs"] = {{"profile", cfg.profile_spec}, {"k", cfg.k}};
  r["tolerances"] = tolerances_json(cfg);
  r["status"] = "ok";

  std::vector<ModeSearch> searches;
  std::vector<double> search_k;
  std::vector<CsvRow> rows;
  std::vector<PlotSeries> series;
  std::optional<BranchTrace> trace;
  double upper_ratio = 1.0, lower_ratio = 1.0;

  try {
    PreparedProfile prepared(make_profile(cfg.profile_spec, cfg.base_dir));
    const MaterialProfile& profile = prepared.profile();
    const ProfileClass& cls = prepared.classification();
    upper_ratio = profile.mu_inf() / profile.rho_inf();
    lower_ratio = cls.min_mu_over_rho;
    Json pj;
    pj["name"] = profile.model().name();
    Json params;
    for (const auto& [key, value] : profile.model().parameters()) params[key] = number(value);
    pj["parameters"] = std::move(params);
    pj["rho_inf"] = profile.rho_inf();
    pj["mu_inf"] = profile.mu_inf();
    pj["y_max_data"] = profile.y_max_data();
    pj["exact_tail"] = profile.exact_tail();
    r["profile"] = std::move(pj);
    r["classification"] = class_json(cls);
    const std::string nonexistence =
        "nonexistence: global negative monotonicity (Arg a(y) >= Arg a_inf for every depth)";

    SolverOptions opt = cfg.solver;
    opt.workers = cfg.workers;
    Json result;
    std::string verdict;
    switch (cfg.task) {
      case Task::classify: {
        const AssumptionReport a = check_assumptions(profile);
        Json aj;
        aj["lipschitz_rho"] = a.lipschitz_rho;
        aj["lipschitz_mu"] = a.lipschitz_mu;
        aj["lipschitz_ok"] = a.lipschitz_ok;
        aj["deviation_integral"] = number(a.deviation_integral);
        aj["integrable"] = a.integrable;
        aj["decay_ratio"] = number(a.decay_ratio);
        aj["decay_factor"] = a.decay_factor;
        aj["check_depth"] = a.check_depth;
        aj["probe_points"] = a.probe_points;
        Json windows = Json::array();
        for (const auto& w : a.windows)
          windows.push_back({{"start", w.start}, {"end", w.end}, {"integral", w.integral}});
        aj["windows"] = std::move(windows);
        result["assumptions"] = std::move(aj);
        Json intervals = Json::array();
        for (double k : cfg.k) {
          const OmegaInterval iv = prepared.interval(k * k);
          intervals.push_back({{"k", k}, {"K", k * k}, {"lo", iv.lo}, {"hi", iv.hi},
                               {"empty", iv.empty()}});
        }
        result["intervals"] = std::move(intervals);
        verdict = cls.global_negative
                      ? nonexistence
                      : std::string("monotonicity at infinity: ") + to_string(cls.monotonicity_at_inf);
        break;
      }
      case Task::modes: {
        const std::size_t n = cfg.k.size();
        std::vector<std::optional<ModeSearch>> found(n);
        std::vector<std::string> errors(n);
        SolverOptions inner = opt;
        if (n > 1) inner.workers = 1;
        parallel_for(n, n > 1 ? cfg.workers : 1u, [&](std::size_t i) {
          try {
            found[i] = find_modes(prepared, cfg.k[i] * cfg.k[i], inner);
          } catch (const Error& e) {
            errors[i] = std::string(to_string(e.kind())) + ": " + e.what();
          }
        });
        Json list = Json::array();
        std::size_t failed = 0, total = 0;
        bool none_exist = true;
        for (std::size_t i = 0; i < n; ++i) {
          if (!found[i]) {
            ++failed;
            none_exist = false;
            list.push_back({{"k", cfg.k[i]}, {"K", cfg.k[i] * cfg.k[i]}, {"error", errors[i]}});
            continue;
          }
          none_exist = none_exist && found[i]->nonexistence;
          total += found[i]->modes.size();
          list.push_back(search_json(cfg.k[i], *found[i]));
          search_k.push_back(cfg.k[i]);
          searches.push_back(std::move(*found[i]));
        }
        result["searches"] = std::move(list);
        if (failed) {
          r["status"] = "error";
          r["error"] = {{"kind", "solver"},
                        {"message", std::to_string(failed) + " of " + std::to_string(n) +
                                        " searches failed"}};
          res.exit_code = 2;
          verdict = "solver error";
        } else if (none_exist && cls.global_negative) {
          verdict = nonexistence;
          r["status"] = "nonexistence";
          res.exit_code = 3;
        } else {
          verdict = std::to_string(total) + " mode(s) over " + std::to_string(n) + " wavenumber(s)";
          for (const ModeSearch& s : searches)
            if (s.truncated) verdict += "; truncated at max_modes";
        }
        break;
      }
      case Task::branches: {
        trace = trace_branches(prepared, cfg.k, opt);
        Json per_k = Json::array();
        std::size_t failed = 0;
        for (std::size_t i = 0; i < trace->k_grid.size(); ++i) {
          if (!trace->errors[i].empty()) {
            ++failed;
            per_k.push_back({{"k", trace->k_grid[i]}, {"error", trace->errors[i]}});
            continue;
          }
          Json s = search_json(trace->k_grid[i], trace->searches[i]);
          s.erase("modes");
          per_k.push_back(std::move(s));
        }
        Json branches = Json::array();
        for (const Branch& b : trace->branches) {
          Json pts = Json::array();
          for (const BranchPoint& p : b.points) pts.push_back(mode_json(p.k, p.mode));
          branches.push_back({{"m", b.m}, {"gaps", b.gaps}, {"points", std::move(pts)}});
        }
        result["per_k"] = std::move(per_k);
        result["branches"] = std::move(branches);
        for (std::size_t i = 0; i < trace->k_grid.size(); ++i)
          if (trace->errors[i].empty()) {
            search_k.push_back(trace->k_grid[i]);
            searches.push_back(trace->searches[i]);
          }
        if (failed) {
          r["status"] = "error";
          r["error"] = {{"kind", "solver"},
                        {"message", std::to_string(failed) + " of " +
                                        std::to_string(trace->k_grid.size()) + " wavenumbers failed"}};
          res.exit_code = 2;
          verdict = "solver error";
        } else if (cls.global_negative) {
          verdict = nonexistence;
        } else {
          verdict = std::to_string(trace->branches.size()) + " branch(es)";
        }
        break;
      }
      case Task::estimate: {
        Json list = Json::array();
        for (double k : cfg.k) {
          const ModeCountEstimate e = estimate_mode_count(profile, k * k);
          list.push_back({{"k", k},
                          {"K", k * k},
                          {"estimate", number(e.value)},
                          {"finite", e.finite},
                          {"diagnostic", e.diagnostic}});
        }
        result["estimates"] = std::move(list);
        verdict = "mode-count estimate";
        break;
      }
      case Task::oscillation: {
        const OscillationReport o = oscillation_test(profile, cfg.oscillation_y_max);
        result["verdict"] = to_string(o.verdict);
        result["reason"] = o.reason;
        result["tail_positive"] = o.tail_positive;
        result["decay_ratio"] = number(o.decay_ratio);
        Json windows = Json::array();
        for (const OscillationWindow& w : o.windows)
          windows.push_back({{"start", w.start},
                             {"end", w.end},
                             {"integral", w.integral},
                             {"cumulative_I", w.cumulative_I},
                             {"cumulative_V", w.cumulative_V},
                             {"min_gamma_hat", w.min_gamma_hat},
                             {"max_gamma_hat", w.max_gamma_hat}});
        result["windows"] = std::move(windows);
        verdict = to_string(o.verdict);
        break;
      }
    }
    r["verdict"] = verdict;
    r["result"] = std::move(result);
    if (req.fixtures) r["oracle_comparison"] = compare_fixtures(*req.fixtures, cfg.profile_spec, searches);
  } catch (const Error& e) {
    r["status"] = "error";
    Json ej = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) ej["last_x"] = ie->last_x();
    r["error"] = std::move(ej);
    r["verdict"] = "error";
    res.exit_code = e.kind() == ErrorKind::validation ? 1 : 2;
  } catch (const std::exception& e) {
    r["status"] = "error";
    r["error"] = {{"kind", "internal"}, {"message", e.what()}};
    r["verdict"] = "error";
    res.exit_code = 2;
  }
  r["exit_code"] = res.exit_code;

  for (std::size_t i = 0; i < searches.size(); ++i)
    for (const Mode& m : searches[i].modes) rows.push_back({search_k[i], &m});
  if (trace) {
    for (const Branch& b : trace->branches) {
      PlotSeries s{b.m, {}};
      for (const BranchPoint& p : b.points) s.points.emplace_back(p.k, p.omega);
      series.push_back(std::move(s));
    }
  } else {
    std::map<int, PlotSeries> by_m;
    for (const CsvRow& row : rows) {
      auto& s = by_m.try_emplace(row.mode->m, PlotSeries{row.mode->m, {}}).first->second;
      s.points.emplace_back(row.k, std::sqrt(row.mode->Omega));
    }
    for (auto& [m, s] : by_m) series.push_back(std::move(s));
  }

  try {
    fs::create_directories(cfg.output.dir);
    const fs::path base = cfg.output.dir / cfg.output.prefix;
    const fs::path json_path = base.string() + ".json";
    write_file(json_path, r.dump(2) + "\n");
    res.files.push_back(json_path);
    const bool tabular = cfg.task == Task::modes || cfg.task == Task::branches;
    if (tabular && cfg.output.csv) {
      const fs::path p = base.string() + ".csv";
      write_file(p, csv_report(rows));
      res.files.push_back(p);
    }
    if (tabular && cfg.output.plot) {
      const fs::path p = base.string() + ".svg";
      write_file(p, svg_plot(series, cfg.k.empty() ? 1.0 : cfg.k.back(), upper_ratio, lower_ratio));
      res.files.push_back(p);
    }
  } catch (const std::exception& e) {
    res.summary = std::string("output error: ") + e.what();
    if (res.exit_code == 0 || res.exit_code == 3) res.exit_code = 2;
    return res;
  }
  res.summary = r.value("verdict", std::string());
  if (r.contains("error")) res.summary += ": " + r["error"].value("message", std::string());
  return res;
}

}  // namespace shwave::app
