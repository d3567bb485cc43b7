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

// The decaying tail solution: matching depth y_bar, tail start Y, the
// frozen-coefficient angle at Y and the backward sweep from Y to y_bar.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "shwave/profile.hpp"
#include "shwave/prufer.hpp"

namespace shwave {

struct ScanGridOptions {
  double dense_end = 200.0;     // uniform part covers [0, min(dense_end, y_max_data + 10)]
  double dense_spacing = 0.01;  // further capped at feature_length / 10
  double ratio = 1.001;         // geometric growth beyond the uniform part
  double y_end = 1e9;
};

// Depth grid with the material values precomputed. gamma_A >= 0 exactly where
// mu/rho <= Omega/K, so sign questions for any A reduce to searches on the
// ratio column; suffix extrema make them logarithmic.
class ProfileScan {
 public:
  explicit ProfileScan(const MaterialProfile& profile, const ScanGridOptions& opt = {});

  const std::vector<double>& y() const { return y_; }
  std::size_t size() const { return y_.size(); }
  double rho(std::size_t i) const { return rho_[i]; }
  double mu(std::size_t i) const { return mu_[i]; }
  double mu_max() const { return mu_max_; }

  // Index of the last grid depth with gamma_A >= 0, nullopt when gamma_A < 0
  // on the whole grid.
  std::optional<std::size_t> last_nonnegative(const ParamPoint& A) const;
  // First index with y >= depth (size() if none).
  std::size_t index_at_or_after(double depth) const;
  // Bound on |gamma_A - gamma_inf| over [y_i, y_end].
  double beta_bound(const ParamPoint& A, std::size_t i) const;
  // Bound on the integral of |gamma_A - gamma_inf| over [y_i, y_end].
  double beta_integral_bound(const ParamPoint& A, std::size_t i) const;

 private:
  std::vector<double> y_, rho_, mu_, suffix_min_ratio_, suffix_max_drho_, suffix_max_dmu_,
      tail_int_drho_, tail_int_dmu_;
  double mu_max_ = 0.0;
};

struct MatchingOptions {
  double margin = 0.5;
  double default_y_bar = 1.0;
  double guard = 1e-9;  // reject Omega > Omega_bar (1 - guard)
  double tail_rel_tol = 1e-2;
  double tail_residual_tol = kInf;
  double damping_tol = 1e-10;  // required exp(-2 integral of kappa) over [y_bar, Y]
  double robustness_tol = 1e-8;
  int max_retries = 4;
  bool robustness_check = true;
  double tail_stretch = 1.0;  // Y <- y_bar + tail_stretch (Y - y_bar)
};

struct MatchingConfig {
  double y_bar;
  double y_tail;
  double tail_rel_tol;
  double tail_residual_tol;
};

double select_matching_point(const MaterialProfile& profile, const ParamPoint& A,
                             const ProfileScan& scan, const MatchingOptions& opt = {});
double select_tail_start(const MaterialProfile& profile, const ParamPoint& A, double y_bar,
                         const ProfileScan& scan, const MatchingOptions& opt = {});
MatchingConfig matching_config(const MaterialProfile& profile, const ParamPoint& A,
                               const ProfileScan& scan, const MatchingOptions& opt = {});

// arccot(-sqrt(-gamma_A(Y) mu(Y))), in (pi/2, pi).
double decaying_phase_at_tail(const MaterialProfile& profile, const ParamPoint& A, double Y);
// The same angle in the coordinates of `sys` (the Prufer angle is coordinate
// independent; only the position is converted).
double decaying_phase_at_tail(const PhaseSystem& sys, double Y);

struct DecayResult {
  PhaseState state;        // at y_bar (position in the system's coordinate)
  double y_tail = 0.0;     // depth Y actually used
  double robustness_delta = 0.0;
  int retries = 0;
};

// Backward sweep from (Y, phi+(Y)) to y_bar. The sweep is repeated from a
// doubled tail window until the angle at y_bar moves by at most
// robustness_tol. With `amplitude` the log-amplitude is integrated as well
// (starting from 0 at Y).
DecayResult decaying_phase(const PhaseSystem& sys, const MatchingConfig& cfg,
                           const IntegratorSettings& s = {}, const MatchingOptions& opt = {},
                           bool amplitude = false, const PhaseObserver& observer = {});

}  // namespace shwave
