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
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "shwave/liouville.hpp"

using namespace shwave;

TEST_SUITE("liouville") {

TEST_CASE("constant modulus gives a linear map") {
  const auto two = build_tau(MaterialProfile::constant(1.0, 2.0));
  for (double y : two.knots_y()) CHECK(two.tau(y) == doctest::Approx(y / 2).epsilon(1e-14));
  CHECK(y_of_tau(two, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
  const auto one = build_tau(MaterialProfile::constant(3.0, 1.0));
  for (double y : {0.0, 0.25, 7.0, 40.0}) CHECK(one.tau(y) == doctest::Approx(y).epsilon(1e-14));
}

TEST_CASE("tau(1) for mu = 1 + exp(-y) against an independent quadrature") {
  auto f = [](double y) { return 1.0 / (1.0 + std::exp(-y)); };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0);
  const auto map = build_tau(MaterialProfile::exp_modulus(1.0, 1.0, 1.0));
  CHECK(std::abs(map.tau(1.0) - ref) <= 1e-9);
  CHECK(std::abs(ref - std::log((std::exp(1.0) + 1.0) / 2.0)) < 1e-14);
}

TEST_CASE("y(tau) fixes the origin and round-trips") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& p : {MaterialProfile::exp_modulus(1.0, 1.0, 1.0),
                        MaterialProfile::exp_modulus(2.0, -1.5, 0.4, 3.0),
                        MaterialProfile::smoothed_layer(2.0, 0.5, 1.0, 2.0, 2.0, 0.5),
                        MaterialProfile::table({{0, 1, 1}, {0.5, 1.2, 2}, {2, 1.1, 1.4}})}) {
    const auto map = build_tau(p);
    CHECK(y_of_tau(map, 0.0) == 0.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double y = 30 * u(rng) * u(rng);
      worst = std::max(worst, std::abs(map.y(map.tau(y)) - y) / std::max(y, 1e-300));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("transformed coefficient examples") {
  const auto unit = std::make_shared<const TauMap>(build_tau(MaterialProfile::exp_density(1, 5, 1)));
  const auto t1 = transform(MaterialProfile::exp_density(1, 5, 1), unit, {1, 0.5});
  for (double y : {0.0, 0.7, 3.0})
    CHECK(t1.gamma_bar(unit->tau(y)) ==
          doctest::Approx(MaterialProfile::exp_density(1, 5, 1).gamma({1, 0.5}, y)).epsilon(1e-12));
  CHECK(t1.gamma_bar(unit->tau(0.0)) == doctest::Approx(2.0));

  const auto p2 = MaterialProfile::constant(1.0, 2.0);
  const auto m2 = std::make_shared<const TauMap>(build_tau(p2));
  const auto t2 = transform(p2, m2, {1, 1});
  for (double tau : {0.0, 0.4, 9.0}) CHECK(t2.gamma_bar(tau) == doctest::Approx(-2.0));
  CHECK(t2.gamma_bar_inf() == doctest::Approx(-2.0));
}

TEST_CASE("Arg a is preserved and the transformed medium stays integrable") {
  const auto p = MaterialProfile::exp_modulus(1.0, -0.6, 0.8, 1.3);
  const auto map = std::make_shared<const TauMap>(build_tau(p));
  const auto t = transform(p, map, {1, 1});
  for (double y : {0.0, 0.3, 1.0, 5.0}) {
    const auto m = t.material(map->tau(y));
    CHECK(std::atan2(m.mu, m.rho) == doctest::Approx(p.arg_a(y)).epsilon(1e-12));
  }
  const double mu_inf = p.mu_inf();
  const auto bar = MaterialProfile::custom([t](double tau) { return t.material(tau); },
                                           {mu_inf * p.rho_inf(), mu_inf * mu_inf},
                                           map->tau(p.y_max_data()), 0.5, "transformed");
  REQUIRE(check_assumptions(p).integrable);
  CHECK(check_assumptions(bar).integrable);
}

}  // TEST_SUITE
