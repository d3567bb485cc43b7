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

#include "shwave/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "shwave/error.hpp"

namespace shwave {

TauMap TauMap::build(const MaterialProfile& profile, const TauOptions& opt) {
  const double y_end = opt.y_end > 0.0 ? opt.y_end : profile.y_max_data() + 10.0;
  const double seed = std::clamp(profile.feature_length(), 1e-3, 1.0);
  auto inv_mu = [&](double y) {
    const double mu = profile.eval(y).mu;
    if (!(mu > 0.0)) throw Error(ErrorKind::validation, "mu is not positive");
    return 1.0 / mu;
  };

  TauMap map;
  map.y_.push_back(0.0);
  map.tau_.push_back(0.0);
  map.slope_.push_back(inv_mu(0.0));

  // Depth-first subdivision keeps knots ordered: a pending stack of right
  // endpoints, the left endpoint is always the last accepted knot.
  std::vector<double> pending;
  const auto seeds = static_cast<std::size_t>(std::ceil(y_end / seed));
  for (std::size_t i = seeds; i >= 1; --i)
    pending.push_back(std::min(y_end, static_cast<double>(i) * seed));
  while (!pending.empty()) {
    const double a = map.y_.back();
    const double b = pending.back();
    const double h = b - a;
    const double ta = map.tau_.back();
    const double fa = map.slope_.back();
    const double fb = inv_mu(b);
    const quad::Result whole = quad::gauss_kronrod15(inv_mu, a, b);
    const double m = 0.5 * (a + b);
    const quad::Result left = quad::gauss_kronrod15(inv_mu, a, m);
    const double predicted = ta + 0.5 * whole.value + h * (fa - fb) / 8.0;
    const double tol = opt.interp_tol * std::max(1.0, ta);
    const bool accurate = std::abs(predicted - (ta + left.value)) <= tol &&
                          whole.error <= std::max(tol, opt.rel_tol * whole.value);
    if (accurate || h < 1e-7) {
      pending.pop_back();
      map.y_.push_back(b);
      map.tau_.push_back(ta + whole.value);
      map.slope_.push_back(fb);
    } else {
      pending.push_back(m);
    }
  }
  map.tail_slope_ = 1.0 / profile.mu_inf();
  return map;
}

double TauMap::hermite(std::size_t k, double y) const {
  const double h = y_[k + 1] - y_[k];
  const double t = (y - y_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * tau_[k] + (t3 - 2 * t2 + t) * h * slope_[k] +
         (-2 * t3 + 3 * t2) * tau_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double TauMap::tau(double y) const {
  if (!(y >= 0.0)) throw Error(ErrorKind::domain, "depth must be >= 0");
  if (y >= y_.back()) return tau_.back() + (y - y_.back()) * tail_slope_;
  const auto it = std::upper_bound(y_.begin(), y_.end(), y);
  return hermite(static_cast<std::size_t>(it - y_.begin()) - 1, y);
}

double TauMap::y(double tau) const {
  if (!(tau >= 0.0)) throw Error(ErrorKind::domain, "tau must be >= 0");
  if (tau >= tau_.back()) return y_.back() + (tau - tau_.back()) / tail_slope_;
  const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  const std::size_t k = static_cast<std::size_t>(it - tau_.begin()) - 1;
  // Safeguarded Newton on the forward interpolant so that y(tau(y)) == y.
  double lo = y_[k], hi = y_[k + 1];
  double x = lo + (hi - lo) * (tau - tau_[k]) / (tau_[k + 1] - tau_[k]);
  for (int it2 = 0; it2 < 60; ++it2) {
    const double f = hermite(k, x) - tau;
    if (f == 0.0) break;
    if (f > 0.0) hi = x; else lo = x;
    const double eps = 1e-7 * (y_[k + 1] - y_[k]);
    const double df = (hermite(k, std::min(x + eps, y_[k + 1])) -
                       hermite(k, std::max(x - eps, y_[k]))) /
                      (std::min(x + eps, y_[k + 1]) - std::max(x - eps, y_[k]));
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

TauMap build_tau(const MaterialProfile& profile, const TauOptions& opt) {
  return TauMap::build(profile, opt);
}

double y_of_tau(const TauMap& map, double tau) { return map.y(tau); }

TransformedCoefficient::TransformedCoefficient(MaterialProfile profile,
                                               std::shared_ptr<const TauMap> map, ParamPoint A)
    : profile_(std::move(profile)), map_(std::move(map)), A_(A) {
  if (!map_) throw Error(ErrorKind::precondition, "tau map is null");
}

double TransformedCoefficient::gamma_bar(double tau) const {
  const MaterialPoint p = profile_.eval(map_->y(tau));
  return p.mu * (A_.Omega * p.rho - A_.K * p.mu);
}

double TransformedCoefficient::gamma_bar_inf() const {
  const double mu = profile_.mu_inf(), rho = profile_.rho_inf();
  return A_.Omega * mu * rho - A_.K * mu * mu;
}

MaterialPoint TransformedCoefficient::material(double tau) const {
  const MaterialPoint p = profile_.eval(map_->y(tau));
  return {p.mu * p.rho, p.mu * p.mu};
}

TransformedCoefficient transform(const MaterialProfile& profile, std::shared_ptr<const TauMap> map,
                                 const ParamPoint& A) {
  return TransformedCoefficient(profile, std::move(map), A);
}

}  // namespace shwave
