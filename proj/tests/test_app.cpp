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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "shwave/app.hpp"
#include "shwave/error.hpp"

using namespace shwave;
using app::Json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("shwave_app_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string validation_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    return e.what();
  }
  FAIL("expected a validation error");
  return "";
}

Json base_config() {
  return Json::parse(R"({"schema": "shwave-config/1",
                         "profile": {"type": "exp_density", "rho_inf": 1, "delta_rho": 5, "d": 1},
                         "task": "modes", "k": 2})");
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("profile registry fills defaults and rejects unknown keys") {
  const Json n = app::normalize_profile(Json::parse(R"({"d": 2, "type": "exp_density", "delta_rho": 1, "rho_inf": 3})"));
  CHECK(n.dump() == R"({"type":"exp_density","rho_inf":3.0,"delta_rho":1.0,"d":2.0,"mu":1.0})");
  CHECK(validation_message([] { app::normalize_profile(Json::parse(R"({"type": "constant", "rho": 1, "mu": 1, "x": 2})")); })
            .find("unknown key 'x'") != std::string::npos);
  CHECK(validation_message([] { app::normalize_profile(Json::parse(R"({"type": "constant", "rho": 1})")); })
            .find("missing 'mu'") != std::string::npos);
  CHECK(validation_message([] { app::normalize_profile(Json::parse(R"({"type": "wavy"})")); })
            .find("unknown type") != std::string::npos);
  const auto p = app::make_profile(Json::parse(R"({"type": "smoothed_layer", "rho_1": 2, "mu_1": 1, "rho_s": 1, "mu_s": 1, "y_s": 2, "width": 0.5})"));
  CHECK(p.eval(0.0).rho == 2.0);
  CHECK(p.eval(2.5).rho == 1.0);
}

TEST_CASE("table files: comments, header and line-numbered errors") {
  const fs::path d = scratch_dir("table");
  std::ofstream(d / "ok.csv") << "# sample medium\ny,rho,mu\n0, 2, 1\n0.5, 1.5, 1  # midpoint\n\n1, 1, 1\n";
  const auto rows = app::read_table(d / "ok.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].rho == 1.5);
  std::ofstream(d / "bad.csv") << "y rho mu\n0 2 1\n1 1.5 1\n0.5 1 1\n";
  const std::string msg = validation_message([&] { app::read_table(d / "bad.csv"); });
  CHECK(msg.find("bad.csv:4:") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
  std::ofstream(d / "junk.csv") << "0 2 1\n1 one 1\n";
  CHECK(validation_message([&] { app::read_table(d / "junk.csv"); }).find("junk.csv:2:") != std::string::npos);
  const auto p = app::make_profile(Json{{"type", "table"}, {"file", "ok.csv"}}, d);
  CHECK(p.eval(5.0).rho == 1.0);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(app::parse_config(base_config()));
  Json c = base_config();
  c["schema"] = "shwave-config/0";
  CHECK(validation_message([&] { app::parse_config(c); }).find("schema") != std::string::npos);
  c = base_config();
  c["task"] = "everything";
  CHECK(validation_message([&] { app::parse_config(c); }).find("unknown task") != std::string::npos);
  c = base_config();
  c.erase("k");
  CHECK(validation_message([&] { app::parse_config(c); }).find("needs 'k'") != std::string::npos);
  c = base_config();
  c["k"] = {3, 2};
  CHECK(validation_message([&] { app::parse_config(c); }).find("increasing") != std::string::npos);
  c = base_config();
  c["k"] = -1;
  CHECK_THROWS_AS(app::parse_config(c), Error);
  c = base_config();
  c["solver"] = {{"rel_tol", "tight"}};
  CHECK(validation_message([&] { app::parse_config(c); }).find("solver.rel_tol") != std::string::npos);
  c = base_config();
  c.erase("k");
  c["k_grid"] = {{"start", 1}, {"stop", 10}, {"step", 1}};
  const auto cfg = app::parse_config(c);
  REQUIRE(cfg.k.size() == 10);
  CHECK(cfg.k.back() == 10.0);
  c["k_grid"] = {{"start", 1}, {"stop", 2}, {"count", 5}};
  CHECK(app::parse_config(c).k[1] == 1.25);
}

TEST_CASE("tolerance record covers every solver knob") {
  const Json t = app::tolerances_json(app::parse_config(base_config()));
  for (const char* key : {"coordinates", "rel_tol", "abs_tol", "max_step", "max_modes", "omega_grid_n",
                          "root_tol", "residual_tol", "oscillation_y_max"})
    CHECK(t.contains(key));
  for (const char* key : {"margin", "default_y_bar", "guard", "tail_rel_tol", "tail_residual_tol",
                          "damping_tol", "robustness_tol", "max_retries", "robustness_check", "tail_stretch"})
    CHECK(t.at("matching").contains(key));
}

TEST_CASE("CSV rows and SVG plot") {
  Mode m;
  m.K = 4;
  m.Omega = 2.25;
  m.m = 2;
  m.residual = 1e-11;
  m.y_bar = 1.5;
  m.y_tail = 20;
  const std::string csv = app::csv_report({{2.0, &m}});
  CHECK(csv == "k,omega,K,Omega,mode_index,residual,y_bar,y_tail\n2,1.5,4,2.25,2,9.9999999999999994e-12,1.5,20\n");
  const std::string svg = app::svg_plot({{1, {{1, 0.8}, {2, 1.5}}}, {2, {{2, 1.9}}}}, 2.0, 1.0, 1.0 / 6);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("class=\"cutoff\"") != std::string::npos);
  CHECK(svg.find("class=\"lower\"") != std::string::npos);
  CHECK(svg.find("<polyline class=\"branch\" data-m=\"1\"") != std::string::npos);
  CHECK(svg.find("<circle class=\"branch\" data-m=\"2\"") != std::string::npos);
}

TEST_CASE("run: report content and worker-count determinism") {
  const fs::path d = scratch_dir("run");
  Json c = base_config();
  c["k"] = {1, 2, 4};
  std::ofstream(d / "cfg.json") << c.dump(2);
  app::Request req;
  req.config = d / "cfg.json";
  req.output_dir = d / "w1";
  req.workers = 1;
  req.fixtures = SHWAVE_FIXTURES_DIR;
  const auto a = app::run(req);
  CHECK(a.exit_code == 0);
  req.output_dir = d / "w3";
  req.workers = 3;
  const auto b = app::run(req);
  CHECK(b.exit_code == 0);
  Json ra = a.report, rb = b.report;
  ra.erase("generated_at");
  rb.erase("generated_at");
  CHECK(ra.dump() == rb.dump());
  CHECK(ra["result"]["searches"].size() == 3);
  const auto& cmp = ra["oracle_comparison"];
  CHECK(cmp["matched"] == 6);  // K = 1, 4, 16 from both oracles
  for (const auto& e : cmp["entries"]) CHECK(e["agree"] == true);
  CHECK(fs::exists(d / "w1" / "shwave.json"));
  CHECK(fs::exists(d / "w1" / "shwave.csv"));
  CHECK_FALSE(fs::exists(d / "w1" / "shwave.svg"));
}

TEST_CASE("run: configuration errors exit 1 without output") {
  const fs::path d = scratch_dir("bad");
  std::ofstream(d / "cfg.json") << "{ \"schema\": ";
  app::Request req;
  req.config = d / "cfg.json";
  const auto r = app::run(req);
  CHECK(r.exit_code == 1);
  CHECK(r.files.empty());
  req.config = d / "missing.json";
  CHECK(app::run(req).exit_code == 1);
}

}  // TEST_SUITE
