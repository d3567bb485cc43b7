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

#include "shwave/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shwave/error.hpp"

namespace shwave {
namespace {

ode::StepControl control(const IntegratorSettings& s, double max_step) {
  if (!(s.rel_tol > 0.0 && s.abs_tol > 0.0))
    throw Error(ErrorKind::validation, "integrator tolerances must be positive");
  ode::StepControl c;
  c.rel_tol = s.rel_tol;
  c.abs_tol = s.abs_tol;
  c.max_step = std::min(s.max_step, max_step);
  return c;
}

template <class F>
auto phase_rhs(const F& coef) {
  return [&coef](double x, const ode::State<2>& v) {
    const PhaseCoef c = coef(x);
    const double sn = std::sin(v[0]), cs = std::cos(v[0]);
    return ode::State<2>{c.gamma * sn * sn + c.inv_mu * cs * cs, (c.inv_mu - c.gamma) * sn * cs};
  };
}

template <class F>
auto angle_rhs(const F& coef) {
  return [&coef](double x, const ode::State<1>& v) {
    const PhaseCoef c = coef(x);
    const double sn = std::sin(v[0]), cs = std::cos(v[0]);
    return ode::State<1>{c.gamma * sn * sn + c.inv_mu * cs * cs};
  };
}

template <class F>
double angle_segment(const F& coef, double phi, double from, double to, const ode::StepControl& c,
                     const std::function<void(double, double)>& on_step) {
  if (on_step) {
    const auto obs = [&](const ode::DenseStep<1>& d) { on_step(d.x0, d.r1[0]); };
    const double out = ode::integrate<1>(angle_rhs(coef), ode::State<1>{phi}, from, to, c, obs)[0];
    on_step(to, out);
    return out;
  }
  return ode::integrate<1>(angle_rhs(coef), ode::State<1>{phi}, from, to, c)[0];
}

template <class F>
ode::State<2> phase_segment(const F& coef, ode::State<2> v, double from, double to,
                            const ode::StepControl& c, const PhaseObserver& observer) {
  if (observer) {
    const auto obs = [&](const ode::DenseStep<2>& d) { observer(d); };
    return ode::integrate<2>(phase_rhs(coef), v, from, to, c, obs);
  }
  return ode::integrate<2>(phase_rhs(coef), v, from, to, c);
}

// Splits [from, to] at the structured-region boundary; returns the pieces in
// integration order with their step caps.
struct Piece {
  double a, b, cap;
};

std::vector<Piece> pieces(const PhaseSystem& sys, double from, double to) {
  const double e = sys.structured_end();
  const double cap = sys.structured_step();
  if (!std::isfinite(cap)) return {{from, to, kInf}};
  const double lo = std::min(from, to), hi = std::max(from, to);
  if (hi <= e) return {{from, to, cap}};
  if (lo >= e) return {{from, to, kInf}};
  if (from < to) return {{from, e, cap}, {e, to, kInf}};
  return {{from, e, kInf}, {e, to, cap}};
}

}  // namespace

const char* to_string(Coordinates c) noexcept {
  return c == Coordinates::tau ? "tau" : "depth";
}

PhaseState integrate_phase(const CoefFn& coef, double phi0, double from, double to,
                           const IntegratorSettings& s, double log_r0,
                           const PhaseObserver& observer) {
  const ode::State<2> v = phase_segment(coef, {phi0, log_r0}, from, to, control(s, kInf), observer);
  return {to, v[0], v[1]};
}

PhaseState integrate_phase(const std::function<double(double)>& gamma,
                           const std::function<double(double)>& mu, double phi0, double from,
                           double to, const IntegratorSettings& s) {
  const CoefFn coef = [&](double x) { return PhaseCoef{gamma(x), 1.0 / mu(x)}; };
  return integrate_phase(coef, phi0, from, to, s);
}

double integrate_angle(const CoefFn& coef, double phi0, double from, double to,
                       const IntegratorSettings& s,
                       const std::function<void(double, double)>& on_step) {
  return angle_segment(coef, phi0, from, to, control(s, kInf), on_step);
}

PhaseSystem::PhaseSystem(MaterialProfile profile, ParamPoint A)
    : profile_(std::move(profile)), A_(A) {
  init_limits();
}

PhaseSystem::PhaseSystem(MaterialProfile profile, ParamPoint A, std::shared_ptr<const TauMap> map)
    : profile_(std::move(profile)), A_(A), map_(std::move(map)) {
  if (!map_) throw Error(ErrorKind::precondition, "tau coordinates need a tau map");
  init_limits();
}

void PhaseSystem::init_limits() {
  if (!(A_.K > 0.0 && A_.Omega > 0.0))
    throw Error(ErrorKind::domain, "parameter point needs K > 0 and Omega > 0");
  const double extent = profile_.y_max_data();
  x_extent_ = to_x(extent);
  const double feature = profile_.feature_length();
  if (std::isfinite(feature)) {
    // Converting a depth interval to tau shrinks it by at most the largest
    // 1/mu seen near the surface; use the surface and limit values as a guard.
    const double scale = map_ ? std::min(1.0 / profile_.eval(0.0).mu, map_->tail_slope()) : 1.0;
    x_feature_ = feature * scale;
  }
}

PhaseCoef PhaseSystem::operator()(double x) const {
  if (!map_) {
    const MaterialPoint p = profile_.eval(x);
    return {A_.Omega * p.rho - A_.K * p.mu, 1.0 / p.mu};
  }
  const MaterialPoint p = profile_.eval(map_->y(x));
  return {p.mu * (A_.Omega * p.rho - A_.K * p.mu), 1.0};
}

CoefFn PhaseSystem::coef() const {
  return [this](double x) { return (*this)(x); };
}

double PhaseSystem::to_x(double y) const { return map_ ? map_->tau(y) : y; }
double PhaseSystem::to_y(double x) const { return map_ ? map_->y(x) : x; }

double propagate_angle(const PhaseSystem& sys, double phi0, double from, double to,
                       const IntegratorSettings& s,
                       const std::function<void(double, double)>& on_step) {
  double phi = phi0;
  for (const Piece& p : pieces(sys, from, to))
    phi = angle_segment(sys, phi, p.a, p.b, control(s, p.cap), on_step);
  return phi;
}

PhaseState propagate_phase(const PhaseSystem& sys, double phi0, double from, double to,
                           const IntegratorSettings& s, double log_r0,
                           const PhaseObserver& observer) {
  ode::State<2> v{phi0, log_r0};
  for (const Piece& p : pieces(sys, from, to))
    v = phase_segment(sys, v, p.a, p.b, control(s, p.cap), observer);
  return {to, v[0], v[1]};
}

PhaseState surface_phase(const MaterialProfile& profile, const ParamPoint& A, double y_end,
                         const IntegratorSettings& s) {
  if (!(y_end > 0.0)) throw Error(ErrorKind::domain, "y_end must be positive");
  const PhaseSystem sys(profile, A);
  return propagate_phase(sys, std::numbers::pi / 2, 0.0, y_end, s);
}

}  // namespace shwave
