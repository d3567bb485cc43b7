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

// Regenerates tests/fixtures from the two reference oracles. The Prufer
// solver is not involved.
//
//   make_fixtures <output-dir>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "shwave/app.hpp"
#include "shwave/oracle.hpp"

namespace fs = std::filesystem;
using shwave::app::Json;

namespace {

void emit(const fs::path& dir, const std::string& name, const Json& profile, double K,
          const shwave::oracle::OracleResult& r) {
  Json j;
  j["schema"] = shwave::app::kFixtureSchema;
  j["profile"] = shwave::app::normalize_profile(profile);
  j["K"] = K;
  j["method"] = shwave::oracle::to_string(r.method);
  j["omegas"] = r.omegas;
  Json disc;
  for (const auto& [key, value] : r.discretization) disc[key] = value;
  j["discretization"] = std::move(disc);
  j["usable"] = r.usable;
  j["detail"] = r.detail;
  std::ofstream(dir / (name + ".json")) << j.dump(2) << "\n";
  std::printf("%-28s %zu modes%s\n", name.c_str(), r.omegas.size(), r.usable ? "" : " (UNUSABLE)");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 1;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);

  const Json exp_spec = {{"type", "exp_density"}, {"rho_inf", 1.0}, {"delta_rho", 5.0}, {"d", 1.0}};
  const auto exp_profile = shwave::app::make_profile(exp_spec);
  for (double K : {1.0, 4.0, 16.0}) {
    const std::string tag = "exp_q5_K" + std::to_string(static_cast<int>(K));
    emit(dir, tag + "_bessel", exp_spec, K, shwave::oracle::bessel_mode_frequencies(5.0, 1.0, K));
    emit(dir, tag + "_fd", exp_spec, K, shwave::oracle::fd_mode_frequencies(exp_profile, K, 200.0));
  }

  const Json layer_spec = {{"type", "smoothed_layer"}, {"rho_1", 2.0}, {"mu_1", 1.0}, {"rho_s", 1.0},
                           {"mu_s", 1.0},             {"y_s", 2.0},   {"width", 0.5}};
  const auto layer = shwave::app::make_profile(layer_spec);
  for (double K : {4.0, 16.0}) {
    const std::string tag = "layer_K" + std::to_string(static_cast<int>(K));
    emit(dir, tag + "_fd", layer_spec, K, shwave::oracle::fd_mode_frequencies(layer, K, 200.0));
  }
  return 0;
}
