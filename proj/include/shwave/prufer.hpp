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

// Prufer form of (mu u')' + gamma u = 0 with u = r sin(phi), mu u' = r cos(phi):
//
//   phi'     = gamma sin^2(phi) + cos^2(phi) / mu
//   (ln r)'  = (1/mu - gamma) sin(phi) cos(phi)
//
// phi is the ODE state itself, so it is continuous without any unwrapping.

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "shwave/liouville.hpp"
#include "shwave/ode.hpp"
#include "shwave/profile.hpp"

namespace shwave {

struct PhaseCoef {
  double gamma;
  double inv_mu;
};

using CoefFn = std::function<PhaseCoef(double)>;

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = kInf;
};

struct PhaseState {
  double y;
  double phi;
  double log_r;
};

using PhaseObserver = std::function<void(const ode::DenseStep<2>&)>;

// Integrates (phi, ln r) from `from` to `to` (either direction).
PhaseState integrate_phase(const CoefFn& coef, double phi0, double from, double to,
                           const IntegratorSettings& s, double log_r0 = 0.0,
                           const PhaseObserver& observer = {});
PhaseState integrate_phase(const std::function<double(double)>& gamma,
                           const std::function<double(double)>& mu, double phi0, double from,
                           double to, const IntegratorSettings& s);

// Angle only; the amplitude equation decouples and is skipped.
double integrate_angle(const CoefFn& coef, double phi0, double from, double to,
                       const IntegratorSettings& s,
                       const std::function<void(double x, double phi)>& on_step = {});

enum class Coordinates { depth, tau };

const char* to_string(Coordinates c) noexcept;

// The phase equation of one parameter point in depth or tau coordinates.
// Positions passed to the integrators are in the chosen coordinate; the
// conversions to and from depth are exposed for matching-point bookkeeping.
class PhaseSystem {
 public:
  PhaseSystem(MaterialProfile profile, ParamPoint A);
  PhaseSystem(MaterialProfile profile, ParamPoint A, std::shared_ptr<const TauMap> map);

  PhaseCoef operator()(double x) const;
  CoefFn coef() const;
  double to_x(double y) const;
  double to_y(double x) const;
  Coordinates coordinates() const { return map_ ? Coordinates::tau : Coordinates::depth; }
  const MaterialProfile& profile() const { return profile_; }
  const ParamPoint& point() const { return A_; }

  // Integrator settings for the span [a, b] in x: steps are capped at the
  // profile's feature length inside the structured region only.
  double structured_end() const { return x_extent_; }
  double structured_step() const { return x_feature_; }

 private:
  MaterialProfile profile_;
  ParamPoint A_;
  std::shared_ptr<const TauMap> map_;
  double x_extent_ = 0.0;
  double x_feature_ = kInf;

  void init_limits();
};

// Same integrators as above, split at the end of the structured region so the
// feature-length step cap applies only where the coefficients vary.
double propagate_angle(const PhaseSystem& sys, double phi0, double from, double to,
                       const IntegratorSettings& s,
                       const std::function<void(double x, double phi)>& on_step = {});
PhaseState propagate_phase(const PhaseSystem& sys, double phi0, double from, double to,
                           const IntegratorSettings& s, double log_r0 = 0.0,
                           const PhaseObserver& observer = {});

// Surface-launched solution: phi(0) = pi/2 (u'(0) = 0), ln r(0) = 0, so u(0) = 1.
PhaseState surface_phase(const MaterialProfile& profile, const ParamPoint& A, double y_end,
                         const IntegratorSettings& s = {});

}  // namespace shwave
