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

#include <doctest.h>

#include "shwave/ode.hpp"
#include "shwave/quadrature.hpp"

using namespace shwave;

TEST_SUITE("numerics") {

TEST_CASE("dopri5 integrates exponential growth forward and backward") {
  auto f = [](double, const ode::State<1>& y) { return ode::State<1>{y[0]}; };
  ode::StepControl c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  const auto fwd = ode::integrate<1>(f, {1.0}, 0.0, 2.0, c);
  CHECK(fwd[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
  const auto bwd = ode::integrate<1>(f, fwd, 2.0, 0.0, c);
  CHECK(bwd[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dense output matches the harmonic oscillator inside each step") {
  auto f = [](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; };
  ode::StepControl c;
  c.rel_tol = 1e-11;
  c.abs_tol = 1e-13;
  double worst = 0.0;
  int steps = 0;
  ode::integrate<2>(f, {0.0, 1.0}, 0.0, 10.0, c, [&](const ode::DenseStep<2>& s) {
    ++steps;
    for (double t : {0.13, 0.5, 0.91}) {
      const double x = s.x0 + t * s.h;
      worst = std::max(worst, std::abs(s(x)[0] - std::sin(x)));
    }
  });
  CHECK(steps > 5);
  CHECK(worst < 1e-8);
}

TEST_CASE("step budget exhaustion raises an integration error with the last state") {
  auto f = [](double, const ode::State<1>& y) { return ode::State<1>{y[0]}; };
  ode::StepControl c;
  c.max_steps = 3;
  c.max_step = 0.01;
  try {
    ode::integrate<1>(f, {1.0}, 0.0, 1.0, c);
    FAIL("expected an exception");
  } catch (const IntegrationError& e) {
    CHECK(e.kind() == ErrorKind::integration);
    CHECK(e.last_x() > 0.0);
    CHECK(e.last_state().size() == 1);
  }
}

TEST_CASE("Gauss-Kronrod is exact on low-degree polynomials") {
  const auto r = quad::gauss_kronrod15([](double x) { return 3 * x * x - 2 * x + 7; }, -1.0, 2.0);
  CHECK(r.value == doctest::Approx(27.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration of a peaked integrand") {
  const double v = quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0).value;
  CHECK(v == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-11));
}

TEST_CASE("tail integral: convergent and divergent cases") {
  const auto conv = quad::integrate_to_infinity([](double y) { return std::exp(-y); }, 0.0);
  CHECK(conv.verdict == quad::TailVerdict::converged);
  CHECK(conv.value == doctest::Approx(1.0).epsilon(1e-9));
  const auto div = quad::integrate_to_infinity([](double y) { return 1.0 / (1.0 + y); }, 0.0);
  CHECK(div.verdict == quad::TailVerdict::divergent);
}

}  // TEST_SUITE
