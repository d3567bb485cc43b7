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
#include <random>

#include <doctest.h>
#include <json.hpp>

#include "shwave/app.hpp"
#include "shwave/error.hpp"
#include "shwave/oracle.hpp"

using namespace shwave;

TEST_SUITE("oracle") {

TEST_CASE("own Bessel J agrees with the standard library") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0, worst_d = 0;
  for (int i = 0; i < 2000; ++i) {
    const double nu = 40 * u(rng), x = 1e-3 + 60 * u(rng);
    const auto v = oracle::bessel_j(nu, x);
    const double j = std::cyl_bessel_j(nu, x);
    const double dj = nu / x * j - std::cyl_bessel_j(nu + 1, x);
    worst = std::max(worst, std::abs(v.j - j));
    worst_d = std::max(worst_d, std::abs(v.dj - dj));
    // Bessel equation for the second derivative.
    CHECK(std::abs(x * x * v.d2j + x * v.dj + (x * x - nu * nu) * v.j) <= 1e-9 * std::max(1.0, nu * nu));
  }
  CHECK(worst <= 1e-11);
  CHECK(worst_d <= 1e-11);
}

TEST_CASE("series and recurrence branches agree on their overlap") {
  for (double nu : {0.0, 0.5, 1.414, 7.3}) {
    for (double x : {0.5, 3.0, 9.0}) {
      const auto a = oracle::bessel_j_series(nu, x);
      const auto b = oracle::bessel_j_recurrence(nu, x);
      CHECK(std::abs(a.j - b.j) <= 1e-12);
      CHECK(std::abs(a.dj - b.dj) <= 1e-12);
    }
  }
}

TEST_CASE("self-test: ODE residual and the first zero of J1'") {
  const auto t = oracle::bessel_self_test(5.0, 1.0, 1.0, 0.5);
  CHECK(t.passed);
  CHECK(t.max_residual <= 1e-9);
  CHECK(t.known_zero_derivative <= 1e-8);
}

TEST_CASE("vanishing contrast has no roots") {
  CHECK(oracle::bessel_mode_frequencies(1e-9, 1.0, 4.0).omegas.empty());
}

TEST_CASE("finite differences: constant medium, cross-check and the oscillatory study") {
  const auto flat = oracle::fd_mode_frequencies(MaterialProfile::constant(1, 1), 4.0, 100.0, 4000);
  CHECK(flat.omegas.empty());
  const auto fd = oracle::fd_mode_frequencies(MaterialProfile::exp_density(1, 5, 1), 1.0, 200.0);
  const auto bj = oracle::bessel_mode_frequencies(5.0, 1.0, 1.0);
  CHECK(fd.usable);
  REQUIRE(fd.omegas.size() == bj.omegas.size());
  for (std::size_t i = 0; i < bj.omegas.size(); ++i)
    CHECK(std::abs(fd.omegas[i] - bj.omegas[i]) <= 1e-4 * bj.omegas[i]);

  const auto osc = MaterialProfile::power_density(1, 3, 1.5);
  const auto e400 = oracle::fd_eigenvalues(osc, 4.0, 400.0, 40000);
  const auto e800 = oracle::fd_eigenvalues(osc, 4.0, 800.0, 80000);
  CHECK(e400.size() >= 4);
  CHECK(e800.size() > e400.size());
  for (double v : e400) CHECK(v < 4.0);
}

TEST_CASE("finite differences reject coarse grids") {
  CHECK_THROWS_AS(oracle::fd_mode_frequencies(MaterialProfile::constant(1, 1), 1.0, 10.0, 999), Error);
}

TEST_CASE("frozen fixtures reproduce") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SHWAVE_FIXTURES_DIR)) {
    std::ifstream in(entry.path());
    const auto fx = nlohmann::json::parse(in);
    const auto profile = app::make_profile(app::Json(fx.at("profile")));
    const double K = fx.at("K");
    const auto frozen = fx.at("omegas").get<std::vector<double>>();
    oracle::OracleResult now;
    if (fx.at("method") == "bessel") {
      now = oracle::bessel_mode_frequencies(fx["profile"]["delta_rho"], fx["profile"]["d"], K);
    } else {
      now = oracle::fd_mode_frequencies(profile, K, fx["discretization"]["L"],
                                        static_cast<std::size_t>(fx["discretization"]["n"].get<double>()));
    }
    REQUIRE(now.omegas.size() == frozen.size());
    for (std::size_t i = 0; i < frozen.size(); ++i)
      CHECK(std::abs(now.omegas[i] - frozen[i]) <= 1e-12 * frozen[i]);
    ++seen;
  }
  CHECK(seen >= 8);
}

}  // TEST_SUITE
