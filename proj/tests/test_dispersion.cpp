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
#include <fstream>
#include <numbers>

#include <doctest.h>
#include <json.hpp>

#include "shwave/dispersion.hpp"
#include "shwave/oracle.hpp"

using namespace shwave;
using std::numbers::pi;

namespace {

const PreparedProfile& exp5() {
  static const PreparedProfile p(MaterialProfile::exp_density(1, 5, 1));
  return p;
}

std::vector<double> omegas(const ModeSearch& s) {
  std::vector<double> out;
  for (const Mode& m : s.modes) out.push_back(m.Omega);
  return out;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return w;
}

}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("mismatch in a constant medium is not a multiple of pi") {
  const PreparedProfile flat(MaterialProfile::constant(1, 1));
  const double Phi = mismatch(flat, 4.0, 1.0);
  CHECK(Phi > -3 * pi / 4);
  CHECK(Phi < -pi / 4);
}

TEST_CASE("mismatch vanishes modulo pi at the Bessel roots") {
  const auto ref = oracle::bessel_mode_frequencies(5.0, 1.0, 1.0);
  REQUIRE(ref.omegas.size() == 2);
  for (std::size_t i = 0; i < ref.omegas.size(); ++i) {
    const double Phi = mismatch(exp5(), 1.0, ref.omegas[i]);
    CHECK(std::abs(Phi - static_cast<double>(i) * pi) <= 1e-9);
  }
}

TEST_CASE("mismatch is the same in depth and tau coordinates") {
  const PreparedProfile p(MaterialProfile::exp_modulus(2.0, -1.2, 0.7, 1.5));
  SolverOptions tau;
  tau.coordinates = Coordinates::tau;
  const double K = 6.0;
  const auto iv = p.interval(K);
  for (double t : {0.1, 0.4, 0.8, 0.99}) {
    const double Omega = iv.lo + t * (iv.hi - iv.lo);
    CHECK(std::abs(mismatch(p, K, Omega) - mismatch(p, K, Omega, tau)) <= 1e-8);
  }
}

TEST_CASE("non-existence examples") {
  const PreparedProfile flat(MaterialProfile::constant(1, 1));
  const PreparedProfile neg(MaterialProfile::exp_density(1, -0.5, 1));
  for (double K : {1.0, 4.0, 9.0}) {
    const auto a = find_modes(flat, K);
    CHECK(a.modes.empty());
    CHECK(a.nonexistence);
    const auto b = find_modes(neg, K);
    CHECK(b.modes.empty());
    CHECK(b.nonexistence);
  }
}

TEST_CASE("exponential profile at K = 1 matches the Bessel roots and the frozen fixture") {
  const auto s = find_modes(exp5(), 1.0);
  const auto ref = oracle::bessel_mode_frequencies(5.0, 1.0, 1.0);
  CHECK(max_rel(omegas(s), ref.omegas) <= 1e-6);
  std::ifstream in(std::string(SHWAVE_FIXTURES_DIR) + "/exp_q5_K1_bessel.json");
  REQUIRE(in);
  const auto fx = nlohmann::json::parse(in);
  CHECK(max_rel(omegas(s), fx.at("omegas").get<std::vector<double>>()) <= 1e-6);
  for (const Mode& m : s.modes) {
    CHECK(m.Omega > s.interval.lo);
    CHECK(m.Omega < s.interval.hi);
    CHECK(m.residual <= 1e-8);
    CHECK_FALSE(m.flagged);
  }
}

TEST_CASE("mode counts below Omega step at the modes") {
  const auto s = find_modes(exp5(), 16.0);
  REQUIRE(s.modes.size() == 6);
  for (const Mode& m : s.modes) {
    CHECK(mode_count_below(exp5(), 16.0, m.Omega * (1 - 1e-6)) == m.m - 1);
    CHECK(mode_count_below(exp5(), 16.0, m.Omega * (1 + 1e-6)) == m.m);
  }
}

TEST_CASE("coordinate invariance of the mode set for a graded modulus") {
  const PreparedProfile p(MaterialProfile::exp_modulus(2.0, -1.2, 0.7, 1.5));
  SolverOptions tau;
  tau.coordinates = Coordinates::tau;
  const auto a = find_modes(p, 9.0);
  const auto b = find_modes(p, 9.0, tau);
  REQUIRE(a.modes.size() >= 1);
  CHECK(max_rel(omegas(a), omegas(b)) <= 1e-8);
}

TEST_CASE("worker count does not change the result") {
  SolverOptions one, three;
  three.workers = 3;
  const auto a = find_modes(exp5(), 25.0, one);
  const auto b = find_modes(exp5(), 25.0, three);
  CHECK(omegas(a) == omegas(b));
}

TEST_CASE("branch tracing examples") {
  const PreparedProfile flat(MaterialProfile::constant(1, 1));
  CHECK(trace_branches(flat, {1, 2, 3}).branches.empty());

  std::vector<double> ks;
  for (int k = 1; k <= 10; ++k) ks.push_back(k);
  const auto t = trace_branches(exp5(), ks);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(t.errors[i].empty());
    CHECK(t.searches[i].modes.size() >= prev);
    prev = t.searches[i].modes.size();
  }
  const double lo = std::sqrt(exp5().classification().min_mu_over_rho), hi = 1.0;
  for (const Branch& b : t.branches) {
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      const auto& pt = b.points[j];
      CHECK(pt.omega / pt.k > lo);
      CHECK(pt.omega / pt.k < hi);
      if (j > 0) CHECK(pt.omega > b.points[j - 1].omega);
    }
  }
}

TEST_CASE("mode-count estimate examples") {
  CHECK(estimate_mode_count(MaterialProfile::constant(1, 1), 4.0).value == 0.0);
  for (double K : {1.0, 16.0, 1600.0}) {
    const auto e = estimate_mode_count(MaterialProfile::exp_density(1, 5, 1), K);
    CHECK(e.finite);
    CHECK(e.value == doctest::Approx(2 * std::sqrt(5 * K) / pi).epsilon(1e-8));
  }
  CHECK_FALSE(estimate_mode_count(MaterialProfile::power_density(1, 3, 1.5), 4.0).finite);
}

TEST_CASE("oscillation test examples") {
  CHECK(oscillation_test(MaterialProfile::power_density(1, 3, 1.5)).verdict ==
        OscillationVerdict::oscillatory);
  CHECK(oscillation_test(MaterialProfile::exp_density(1, 5, 1)).verdict ==
        OscillationVerdict::non_oscillatory);
  CHECK(oscillation_test(MaterialProfile::exp_density(1, -0.5, 1)).verdict ==
        OscillationVerdict::non_oscillatory);
}

TEST_CASE("mode shapes: normalization, decay, nodes and the Bessel eigenfunction") {
  const auto s = find_modes(exp5(), 16.0);
  std::vector<double> grid;
  for (int i = 0; i <= 4000; ++i) grid.push_back(i * 0.01);
  for (const Mode& m : s.modes) {
    const auto shape = reconstruct_mode_shape(exp5().profile(), m, grid);
    CHECK(shape.u.front() == 1.0);
    CHECK(std::isfinite(shape.max_abs));
    CHECK(std::abs(shape.u.back()) < 1e-6 * shape.max_abs);
    CHECK(shape.continuity_error <= 1e-6);
    int nodes = 0;
    for (std::size_t i = 1; i < shape.u.size(); ++i)
      if ((shape.u[i - 1] > 0) != (shape.u[i] > 0) && std::abs(shape.u[i]) > 1e-9 * shape.max_abs) ++nodes;
    CHECK((nodes == m.m - 1 || nodes == m.m));
  }
  const Mode& m1 = s.modes.front();
  const double nu = 2 * std::sqrt(m1.K - m1.Omega), c = 5 * m1.Omega;
  const auto shape = reconstruct_mode_shape(exp5().profile(), m1, grid);
  const double j0 = std::cyl_bessel_j(nu, 2 * std::sqrt(c));
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(shape.u[i] - std::cyl_bessel_j(nu, 2 * std::sqrt(c) * std::exp(-grid[i] / 2)) / j0));
  CHECK(worst <= 1e-5);
}

}  // TEST_SUITE
