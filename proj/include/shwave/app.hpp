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

// Run configuration, profile registry and report writers behind the CLI.
// The config format is documented in docs/config.md.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shwave/dispersion.hpp"
#include "shwave/profile.hpp"

namespace shwave::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "shwave-config/1";
inline constexpr const char* kReportSchema = "shwave-report/1";
inline constexpr const char* kFixtureSchema = "shwave-fixture/1";

enum class Task { classify, modes, branches, estimate, oscillation };

const char* to_string(Task t) noexcept;

// Builds a profile from its registry entry. `spec` is {"type": name, params...};
// relative table paths resolve against `base_dir`.
MaterialProfile make_profile(const Json& spec, const std::filesystem::path& base_dir = {});
// Canonical form of a profile entry: defaults filled in, keys in registry order.
Json normalize_profile(const Json& spec);

// Whitespace or comma separated "y rho mu" rows; '#' starts a comment and a
// leading non-numeric header row is skipped. Errors name the line.
std::vector<Sample> read_table(const std::filesystem::path& file);

struct OutputSpec {
  std::filesystem::path dir = ".";
  std::string prefix = "shwave";
  bool csv = true;
  bool plot = false;
};

struct RunConfig {
  Json profile_spec;  // normalized
  std::filesystem::path base_dir;
  Task task = Task::modes;
  std::vector<double> k;
  SolverOptions solver;
  double oscillation_y_max = 1e8;
  OutputSpec output;
  unsigned workers = 1;
};

RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& file);

// Every tolerance the run depends on, defaults included.
Json tolerances_json(const RunConfig& cfg);

struct Request {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::filesystem::path> fixtures;
  std::optional<unsigned> workers;
  bool plot = false;
};

struct Outcome {
  int exit_code = 0;  // 0 ok, 1 validation, 2 solver error, 3 non-existence
  std::string summary;
  std::vector<std::filesystem::path> files;
  Json report;
};

Outcome run(const Request& req);

struct CsvRow {
  double k;
  const Mode* mode;
};

std::string csv_report(const std::vector<CsvRow>& rows);

struct PlotSeries {
  int m;
  std::vector<std::pair<double, double>> points;  // (k, omega)
};

// omega(k) branches with the lines omega = k sqrt(upper) and omega = k sqrt(lower).
std::string svg_plot(const std::vector<PlotSeries>& series, double k_max, double upper_ratio,
                     double lower_ratio);

// Fixture files of `dir` whose profile and K match; each entry compares the
// solver's Omega list against the frozen oracle values.
Json compare_fixtures(const std::filesystem::path& dir, const Json& profile_spec,
                      const std::vector<ModeSearch>& searches);

}  // namespace shwave::app
