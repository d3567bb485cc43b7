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

// Change of depth variable tau(y) = integral_0^y ds / mu(s). In tau the
// equation takes the unit-modulus form u'' + gamma_bar(tau) u = 0 with
// gamma_bar = mu * gamma_A evaluated at y(tau).

#pragma once

#include <memory>
#include <vector>

#include "shwave/profile.hpp"

namespace shwave {

struct TauOptions {
  double rel_tol = 1e-10;     // quadrature tolerance for the knot increments
  double interp_tol = 1e-11;  // cubic Hermite interpolation error between knots
  double y_end = 0.0;         // 0: y_max_data + 10
};

class TauMap {
 public:
  static TauMap build(const MaterialProfile& profile, const TauOptions& opt = {});

  double tau(double y) const;
  double y(double tau) const;
  double tail_slope() const { return tail_slope_; }
  const std::vector<double>& knots_y() const { return y_; }
  const std::vector<double>& knots_tau() const { return tau_; }

 private:
  std::vector<double> y_, tau_, slope_;  // slope = 1/mu at the knot
  double tail_slope_ = 1.0;

  double hermite(std::size_t k, double y) const;
};

TauMap build_tau(const MaterialProfile& profile, const TauOptions& opt = {});
double y_of_tau(const TauMap& map, double tau);

// gamma_bar_A(tau) = mu(y(tau)) gamma_A(y(tau)).
class TransformedCoefficient {
 public:
  TransformedCoefficient(MaterialProfile profile, std::shared_ptr<const TauMap> map, ParamPoint A);

  double gamma_bar(double tau) const;
  double gamma_bar_inf() const;
  // Coefficient pair mu * (rho, mu) of the transformed equation.
  MaterialPoint material(double tau) const;
  const TauMap& map() const { return *map_; }

 private:
  MaterialProfile profile_;
  std::shared_ptr<const TauMap> map_;
  ParamPoint A_;
};

TransformedCoefficient transform(const MaterialProfile& profile, std::shared_ptr<const TauMap> map,
                                 const ParamPoint& A);

}  // namespace shwave
