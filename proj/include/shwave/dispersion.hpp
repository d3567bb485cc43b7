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

// Mode search by angle matching. For fixed K the mismatch
//
//   Phi(Omega) = phi0(y_bar; Omega) - phi+(y_bar; Omega)
//
// between the surface-launched and the decaying Prufer angles increases with
// Omega, and the m-th mode is the root of Phi = (m - 1) pi. Counting
// floor(Phi / pi) + 1 gives the number of modes at or below Omega and does not
// depend on the matching depth as long as gamma_A < 0 beyond it.

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "shwave/decay.hpp"
#include "shwave/profile.hpp"
#include "shwave/prufer.hpp"
#include "shwave/quadrature.hpp"

namespace shwave {

struct SolverOptions {
  Coordinates coordinates = Coordinates::depth;
  IntegratorSettings integrator;
  MatchingOptions matching;
  std::size_t max_modes = 64;
  std::size_t omega_grid_n = 256;
  double root_tol = 1e-10;      // relative bracket width in Omega
  double residual_tol = 1e-8;   // angle residual flagged above this
  unsigned workers = 1;
  std::vector<double> omega_hints;  // extra scan points (warm start)
};

// A profile with everything that does not depend on (K, Omega) precomputed.
class PreparedProfile {
 public:
  explicit PreparedProfile(MaterialProfile profile, const ScanOptions& classification = {},
                           const ScanGridOptions& grid = {});
  PreparedProfile(const PreparedProfile&) = delete;
  PreparedProfile& operator=(const PreparedProfile&) = delete;

  const MaterialProfile& profile() const { return profile_; }
  const ProfileClass& classification() const { return class_; }
  const ProfileScan& scan() const { return scan_; }
  std::shared_ptr<const TauMap> tau_map() const;
  PhaseSystem system(const ParamPoint& A, Coordinates c) const;
  OmegaInterval interval(double K) const;
  double cutoff(double K) const { return K * profile_.mu_inf() / profile_.rho_inf(); }

 private:
  MaterialProfile profile_;
  ProfileClass class_;
  ProfileScan scan_;
  mutable std::once_flag tau_once_;
  mutable std::shared_ptr<const TauMap> tau_;
};

struct MismatchValue {
  double Omega = 0.0;
  double Phi = 0.0;
  double phi_surface = 0.0;  // lifted surface angle at y_bar
  double phi_decay = 0.0;    // decaying angle at y_bar, in (pi/2, pi)
  double y_bar = 0.0;
  double y_tail = 0.0;
};

// Full evaluation; `y_bar` overrides the matching depth (it must lie beyond
// the last sign change of gamma_A).
MismatchValue evaluate_mismatch(const PreparedProfile& p, double K, double Omega,
                                const SolverOptions& opt = {},
                                std::optional<double> y_bar = std::nullopt);
double mismatch(const PreparedProfile& p, double K, double Omega, const SolverOptions& opt = {});
// Number of modes with frequency at or below Omega.
long mode_count_below(const PreparedProfile& p, double K, double Omega,
                      const SolverOptions& opt = {});

struct Mode {
  double K = 0.0;
  double Omega = 0.0;
  int m = 0;
  double phi_surface = 0.0;
  double phi_decay = 0.0;
  double residual = 0.0;
  double y_bar = 0.0;
  double y_tail = 0.0;
  bool flagged = false;  // bracket needed the count fallback or residual above tolerance
};

// Matched eigenfunction of a mode sampled on `y_grid` (ascending): the surface
// sweep on [0, y_bar], the decaying sweep on [y_bar, y_tail] scaled by
// (-1)^(m-1) r0/r+ and the frozen-coefficient exponential beyond y_tail.
// u(0) = 1. Throws consistency when the two sweeps do not join.
struct ModeShape {
  std::vector<double> y;
  std::vector<double> u;
  double continuity_error = 0.0;  // |u-(y_bar) - u+(y_bar)| / max |u|
  double max_abs = 0.0;
};

ModeShape reconstruct_mode_shape(const MaterialProfile& profile, const Mode& mode,
                                 const std::vector<double>& y_grid,
                                 const IntegratorSettings& s = {}, double tol = 1e-6);

struct ModeSearch {
  double K = 0.0;
  OmegaInterval interval{0.0, 0.0};
  std::vector<Mode> modes;
  bool truncated = false;
  bool nonexistence = false;
  std::string reason;
  std::vector<std::string> warnings;
  std::size_t evaluations = 0;
};

ModeSearch find_modes(const PreparedProfile& p, double K, const SolverOptions& opt = {});

struct BranchPoint {
  double k = 0.0;
  double omega = 0.0;
  Mode mode;
};

struct Branch {
  int m = 0;
  std::vector<BranchPoint> points;
  std::vector<double> gaps;  // k values after the branch's onset where the mode was not found
};

struct BranchTrace {
  std::vector<double> k_grid;
  std::vector<ModeSearch> searches;            // one per k
  std::vector<std::string> errors;             // one per k, empty when the search succeeded
  std::vector<Branch> branches;
};

// Sequential in k (each search warm-starts from the previous roots); the
// worker pool is used inside each search, so the result does not depend on
// the number of workers.
BranchTrace trace_branches(const PreparedProfile& p, const std::vector<double>& k_grid,
                           const SolverOptions& opt = {});

struct ModeCountEstimate {
  double value = 0.0;  // +inf when the integral diverges
  bool finite = true;
  std::string diagnostic;
  quad::TailIntegral integral;
};

// pi^-1 * integral_0^inf sqrt(max(gamma_Ainf, 0) / mu), A_inf = (K, K mu_inf / rho_inf).
ModeCountEstimate estimate_mode_count(const MaterialProfile& profile, double K,
                                      const quad::TailOptions& tail = {});

enum class OscillationVerdict { oscillatory, non_oscillatory, inconclusive };

const char* to_string(OscillationVerdict v) noexcept;

struct OscillationWindow {
  double start = 0.0;
  double end = 0.0;
  double integral = 0.0;       // of sqrt(gamma_hat / mu) over the window
  double cumulative_I = 0.0;   // I(end)
  double cumulative_V = 0.0;   // V(end), total variation of ln gamma_hat
  double min_gamma_hat = 0.0;  // extreme sampled values in the window
  double max_gamma_hat = 0.0;
};

struct OscillationReport {
  OscillationVerdict verdict = OscillationVerdict::inconclusive;
  std::string reason;
  bool tail_positive = false;
  double decay_ratio = 0.0;  // window integral ratio across the last three doublings
  std::vector<OscillationWindow> windows;
};

// Oscillation test of the limit-case equation along the ray of a_inf.
OscillationReport oscillation_test(const MaterialProfile& profile, double y_max = 1e8);

}  // namespace shwave
