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

#include "dual_oracle.hpp"
#include "shwave/decay.hpp"
#include "shwave/error.hpp"

using namespace shwave;
using std::numbers::pi;

namespace {

struct Setup {
  MaterialProfile p;
  ProfileScan scan;
  explicit Setup(MaterialProfile profile) : p(std::move(profile)), scan(p) {}
};

// Decaying Bessel solution of u'' + (Omega (1 + q e^{-y}) - K) u = 0.
double bessel_angle(double q, double K, double Omega, double y) {
  const double nu = 2 * std::sqrt(K - Omega);
  const double x = 2 * std::sqrt(Omega * q) * std::exp(-y / 2);
  const double j = std::cyl_bessel_j(nu, x);
  const double dj = 0.5 * (std::cyl_bessel_j(nu - 1, x) - std::cyl_bessel_j(nu + 1, x));
  const double w = dj * (-x / 2);
  double phi = std::atan2(j, w);
  if (phi <= 0) phi += pi;
  return phi;
}

}  // namespace

TEST_SUITE("decay") {

TEST_CASE("matching point examples") {
  const Setup flat(MaterialProfile::constant(1, 1));
  CHECK(select_matching_point(flat.p, {4, 1}, flat.scan) == 1.0);
  const Setup e(MaterialProfile::exp_density(1, 5, 1));
  const double yb = select_matching_point(e.p, {1, 0.5}, e.scan);
  CHECK(yb == doctest::Approx(std::log(5.0) + 0.5).epsilon(0.011 / 2.1));
  CHECK(e.p.gamma({1, 0.5}, yb - 0.5 + 0.011) < 0.0);
  try {
    select_matching_point(e.p, {1, 1}, e.scan);
    FAIL("expected a precondition error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("tail start examples") {
  const Setup t(MaterialProfile::table({{0, 2, 1}, {1, 1, 1}}));
  const double yb = select_matching_point(t.p, {1, 0.6}, t.scan);
  REQUIRE(yb < 1.0);
  CHECK(select_tail_start(t.p, {1, 0.6}, yb, t.scan) == 1.0);

  const Setup e(MaterialProfile::exp_density(1, 5, 1));
  MatchingOptions tight;
  tight.tail_rel_tol = 1e-8;
  const double yb2 = select_matching_point(e.p, {1, 0.5}, e.scan, tight);
  const double Y = select_tail_start(e.p, {1, 0.5}, yb2, e.scan, tight);
  CHECK(Y >= std::log(5e8));
  CHECK(Y <= std::log(5e8) + 0.02);

  const Setup flat(MaterialProfile::constant(1, 1));
  CHECK(select_tail_start(flat.p, {4, 1}, 1.0, flat.scan) == 1.0);
}

TEST_CASE("frozen-coefficient tail angle examples") {
  const auto flat = MaterialProfile::constant(1, 1);
  CHECK(decaying_phase_at_tail(flat, {2, 1}, 3.0) == doctest::Approx(3 * pi / 4).epsilon(1e-15));
  CHECK(decaying_phase_at_tail(flat, {4, 1}, 3.0) == doctest::Approx(5 * pi / 6).epsilon(1e-15));
  const double near = decaying_phase_at_tail(flat, {1, 1 - 1e-12}, 3.0);
  CHECK(near > pi / 2);
  CHECK(near - pi / 2 < 1e-5);
}

TEST_CASE("decaying sweep in a constant medium is stationary") {
  const Setup flat(MaterialProfile::constant(1, 1));
  const ParamPoint A{2, 1};
  const auto cfg = matching_config(flat.p, A, flat.scan);
  const auto r = decaying_phase(PhaseSystem(flat.p, A), cfg);
  CHECK(r.state.phi == doctest::Approx(3 * pi / 4).epsilon(1e-14));
}

TEST_CASE("decaying sweep against the (u, w) system and the Bessel solution") {
  const Setup e(MaterialProfile::exp_density(1, 5, 1));
  const ParamPoint A{1, 0.5};
  const auto cfg = matching_config(e.p, A, e.scan);
  const auto r = decaying_phase(PhaseSystem(e.p, A), cfg);
  const double g = e.p.gamma(A, cfg.y_tail);
  const auto ref = testing::dual_sweep(e.p, A, cfg.y_tail, cfg.y_bar, 1.0, -std::sqrt(-g),
                                       decaying_phase_at_tail(e.p, A, cfg.y_tail));
  CHECK(std::abs(r.state.phi - ref.phi) <= 1e-8);
  CHECK(std::abs(r.state.phi - bessel_angle(5.0, 1.0, 0.5, cfg.y_bar)) <= 1e-8);
}

TEST_CASE("angle stays in (pi/2, pi) and does not depend on the tail window") {
  const Setup e(MaterialProfile::exp_density(1, 5, 1));
  for (double Omega : {0.3, 0.6, 0.9, 0.999}) {
    const ParamPoint A{1, Omega};
    const auto cfg = matching_config(e.p, A, e.scan);
    double lo = pi, hi = 0;
    const auto r = decaying_phase(PhaseSystem(e.p, A), cfg, {}, {}, false,
                                  [&](const ode::DenseStep<2>& st) {
                                    lo = std::min(lo, st(st.x1())[0]);
                                    hi = std::max(hi, st(st.x1())[0]);
                                  });
    CHECK(lo > pi / 2);
    CHECK(hi < pi);
    MatchingOptions wide;
    wide.tail_stretch = 2.0;
    const auto cfg2 = matching_config(e.p, A, e.scan, wide);
    CHECK(cfg2.y_tail > cfg.y_tail);
    const auto r2 = decaying_phase(PhaseSystem(e.p, A), cfg2, {}, wide);
    CHECK(std::abs(r2.state.phi - r.state.phi) <= 1e-8);
  }
}

TEST_CASE("decaying angle is nonincreasing in Omega at a common matching depth") {
  const Setup e(MaterialProfile::exp_density(1, 5, 1));
  const double K = 9.0;
  const auto top = matching_config(e.p, {K, 8.9}, e.scan);
  double prev = pi;
  for (double Omega = 1.6; Omega < 8.9; Omega += 0.25) {
    auto cfg = matching_config(e.p, {K, Omega}, e.scan);
    cfg.y_bar = top.y_bar;
    cfg.y_tail = std::max(cfg.y_tail, top.y_bar);
    const double phi = decaying_phase(PhaseSystem(e.p, {K, Omega}), cfg).state.phi;
    CHECK(phi <= prev + 1e-12);
    prev = phi;
  }
}

}  // TEST_SUITE
