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
#include <numbers>
#include <random>

#include <doctest.h>

#include "dual_oracle.hpp"
#include "shwave/decay.hpp"
#include "shwave/prufer.hpp"

using namespace shwave;
using std::numbers::pi;

namespace {

CoefFn constant_coef(double gamma, double mu = 1.0) {
  return [=](double) { return PhaseCoef{gamma, 1.0 / mu}; };
}

}  // namespace

TEST_SUITE("prufer") {

TEST_CASE("unit coefficients advance the angle linearly") {
  const auto s = integrate_phase(constant_coef(1.0), pi / 2, 0.0, 3.0, {});
  CHECK(s.phi == doctest::Approx(pi / 2 + 3.0).epsilon(1e-12));
  CHECK(s.log_r == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("backward sweep at the stationary angle stays put") {
  double worst = 0.0;
  const double phi = integrate_angle(constant_coef(-1.0), 3 * pi / 4, 5.0, 0.0, {},
                                     [&](double, double v) { worst = std::max(worst, std::abs(v - 3 * pi / 4)); });
  CHECK(std::abs(phi - 3 * pi / 4) < 1e-12);
  CHECK(worst < 1e-12);
}

TEST_CASE("gamma = 4 against u = cos 2y") {
  double phi = pi / 2;
  for (int i = 1; i <= 1000; ++i) {
    const double y = i * 1e-3;
    phi = testing::lift(std::atan2(std::cos(2 * y), -2 * std::sin(2 * y)), phi);
  }
  const auto s = integrate_phase(constant_coef(4.0), pi / 2, 0.0, 1.0, {});
  CHECK(std::abs(s.phi - phi) < 1e-9);
  const double r = std::hypot(std::cos(2.0), 2 * std::sin(2.0));
  CHECK(s.log_r == doctest::Approx(std::log(r)).epsilon(1e-9));
}

TEST_CASE("surface phase examples") {
  const auto flat = MaterialProfile::constant(1.0, 1.0);
  const auto q = surface_phase(flat, {4, 1}, 6.0);
  CHECK(q.phi > 0.0);
  CHECK(q.phi < pi / 2);
  CHECK(surface_phase(flat, {1, 2}, pi).phi == doctest::Approx(3 * pi / 2).epsilon(1e-11));
}

TEST_CASE("surface phase agrees with the (u, w) system") {
  const auto p = MaterialProfile::exp_density(1.0, 5.0, 1.0);
  const ParamPoint A{1.0, 0.9};
  const auto s = surface_phase(p, A, 10.0);
  const auto ref = testing::dual_sweep(p, A, 0.0, 10.0, 1.0, 0.0, pi / 2);
  CHECK(std::abs(s.phi - ref.phi) <= 1e-8);
  CHECK(s.log_r == doctest::Approx(std::log(std::hypot(ref.u, ref.w))).epsilon(1e-7));
}

TEST_CASE("graded modulus: Prufer and (u, w) agree in both coordinates") {
  const auto p = MaterialProfile::exp_modulus(2.0, -1.2, 0.7, 1.5);
  const ParamPoint A{3.0, 3.5};
  const auto ref = testing::dual_sweep(p, A, 0.0, 6.0, 1.0, 0.0, pi / 2);
  const PhaseSystem depth(p, A);
  CHECK(std::abs(propagate_angle(depth, pi / 2, 0.0, 6.0, {}) - ref.phi) <= 1e-8);
  const auto map = std::make_shared<const TauMap>(build_tau(p));
  const PhaseSystem tau(p, A, map);
  CHECK(std::abs(propagate_angle(tau, pi / 2, 0.0, tau.to_x(6.0), {}) - ref.phi) <= 1e-8);
}

TEST_CASE("monotonicity, barrier and uw invariants on random sweeps") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0, samples = 0;
  for (int c = 0; c < 30; ++c) {
    const auto p = c % 2 ? MaterialProfile::exp_density(1.0, 6 * u(rng), 0.3 + 2 * u(rng))
                         : MaterialProfile::exp_modulus(1.0 + u(rng), -0.9 * u(rng), 0.3 + u(rng));
    const double K = 0.5 + 20 * u(rng);
    const ParamPoint A{K, K * (0.1 + 1.1 * u(rng))};
    const PhaseSystem sys(p, A);
    double prev_phi = pi / 2, prev_y = 0.0, prev_uw = 0.0, max_phi = pi / 2;
    propagate_phase(sys, pi / 2, 0.0, 8.0, {}, 0.0, [&](const ode::DenseStep<2>& st) {
      for (int j = 1; j <= 8; ++j) {
        const double y = st.x0 + st.h * j / 8.0;
        const auto v = st(y);
        const double g0 = sys(prev_y).gamma, g1 = sys(y).gamma, gm = sys(0.5 * (y + prev_y)).gamma;
        const double uw = std::exp(2 * v[1]) * std::sin(v[0]) * std::cos(v[0]);
        ++samples;
        if (g0 >= 0 && g1 >= 0 && gm >= 0 && v[0] < prev_phi - 1e-8) ++violations;
        const double m = std::floor(max_phi / pi);
        if (max_phi > m * pi && v[0] < m * pi - 1e-8) ++violations;
        if (g0 <= 0 && g1 <= 0 && gm <= 0 && uw < prev_uw - 1e-8 * std::max(1.0, std::abs(uw)))
          ++violations;
        max_phi = std::max(max_phi, v[0]);
        prev_phi = v[0];
        prev_y = y;
        prev_uw = uw;
      }
    });
  }
  CHECK(samples > 1000);
  CHECK(violations == 0);
}

}  // TEST_SUITE
