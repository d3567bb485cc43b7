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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shwave/shwave.h"

int main(int argc, char** argv) {
  CLI::App cli{"shwave: surface shear-wave dispersion for depth-graded half-spaces"};
  std::string config, output_dir, fixtures;
  unsigned workers = 0;
  bool plot = false;
  cli.add_option("--config", config, "run configuration (JSON)")->required();
  cli.add_flag("--plot", plot, "write an SVG plot of omega(k)");
  cli.add_option("--workers", workers, "worker threads (default: from the config)")
      ->check(CLI::PositiveNumber);
  cli.add_option("--output-dir", output_dir, "directory for the reports");
  cli.add_option("--fixtures", fixtures, "oracle fixture directory to compare against");
  cli.set_version_flag("--version", shwave_version());
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::vector<char> summary(4096, '\0');
  shwave_run_options opt{};
  opt.config_path = config.c_str();
  opt.output_dir = output_dir.empty() ? nullptr : output_dir.c_str();
  opt.fixtures_dir = fixtures.empty() ? nullptr : fixtures.c_str();
  opt.workers = workers;
  opt.plot = plot ? 1 : 0;
  opt.summary = summary.data();
  opt.summary_capacity = summary.size();

  int exit_code = 2;
  const shwave_status st = shwave_run(&opt, &exit_code);
  if (st != SHWAVE_OK) {
    std::fprintf(stderr, "shwave: %s: %s\n", shwave_status_string(st), shwave_last_error());
    return 2;
  }
  std::FILE* out = (exit_code == 1 || exit_code == 2) ? stderr : stdout;
  std::fprintf(out, "%s\n", summary.data());
  return exit_code;
}
