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

#include "shwave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shwave/error.hpp"

namespace shwave {

ProfileScan::ProfileScan(const MaterialProfile& profile, const ScanGridOptions& opt) {
  const double dense_end = std::min(opt.dense_end, profile.y_max_data() + 10.0);
  double h = std::min(opt.dense_spacing, profile.feature_length() / 10.0);
  h = std::max(h, dense_end / 200000.0);
  const auto n = static_cast<std::size_t>(std::ceil(dense_end / h));
  for (std::size_t i = 0; i <= n; ++i) y_.push_back(dense_end * static_cast<double>(i) / n);
  for (double y = dense_end * opt.ratio; y < opt.y_end * opt.ratio; y *= opt.ratio)
    y_.push_back(std::min(y, opt.y_end));

  const std::size_t m = y_.size();
  rho_.resize(m);
  mu_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const MaterialPoint p = profile.eval(y_[i]);
    rho_[i] = p.rho;
    mu_[i] = p.mu;
    mu_max_ = std::max(mu_max_, p.mu);
  }
  const double rho_inf = profile.rho_inf(), mu_inf = profile.mu_inf();
  suffix_min_ratio_.resize(m);
  suffix_max_drho_.resize(m);
  suffix_max_dmu_.resize(m);
  tail_int_drho_.assign(m, 0.0);
  tail_int_dmu_.assign(m, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    const double ratio = mu_[k] / rho_[k];
    const double drho = std::abs(rho_[k] - rho_inf), dmu = std::abs(mu_[k] - mu_inf);
    const bool last = k + 1 == m;
    suffix_min_ratio_[k] = last ? ratio : std::min(ratio, suffix_min_ratio_[k + 1]);
    suffix_max_drho_[k] = last ? drho : std::max(drho, suffix_max_drho_[k + 1]);
    suffix_max_dmu_[k] = last ? dmu : std::max(dmu, suffix_max_dmu_[k + 1]);
    if (!last) {
      const double w = y_[k + 1] - y_[k];
      tail_int_drho_[k] = tail_int_drho_[k + 1] +
                          0.5 * w * (drho + std::abs(rho_[k + 1] - rho_inf));
      tail_int_dmu_[k] = tail_int_dmu_[k + 1] + 0.5 * w * (dmu + std::abs(mu_[k + 1] - mu_inf));
    }
  }
}

std::optional<std::size_t> ProfileScan::last_nonnegative(const ParamPoint& A) const {
  const double t = A.Omega / A.K;
  const auto it = std::upper_bound(suffix_min_ratio_.begin(), suffix_min_ratio_.end(), t);
  const auto first_above = static_cast<std::size_t>(it - suffix_min_ratio_.begin());
  if (first_above == 0) return std::nullopt;
  if (first_above == size()) {
    std::ostringstream msg;
    msg << "no negative tail found: gamma_A >= 0 persists to depth " << y_.back()
        << " (Omega too close to or above the cutoff K mu_inf / rho_inf)";
    throw Error(ErrorKind::no_negative_tail, msg.str());
  }
  return first_above - 1;
}

std::size_t ProfileScan::index_at_or_after(double depth) const {
  return static_cast<std::size_t>(std::lower_bound(y_.begin(), y_.end(), depth) - y_.begin());
}

double ProfileScan::beta_bound(const ParamPoint& A, std::size_t i) const {
  return A.Omega * suffix_max_drho_[i] + A.K * suffix_max_dmu_[i];
}

double ProfileScan::beta_integral_bound(const ParamPoint& A, std::size_t i) const {
  return A.Omega * tail_int_drho_[i] + A.K * tail_int_dmu_[i];
}

double select_matching_point(const MaterialProfile& profile, const ParamPoint& A,
                             const ProfileScan& scan, const MatchingOptions& opt) {
  if (!(A.K > 0.0 && A.Omega > 0.0))
    throw Error(ErrorKind::domain, "parameter point needs K > 0 and Omega > 0");
  const double cutoff = A.K * profile.mu_inf() / profile.rho_inf();
  if (A.Omega >= cutoff * (1.0 - opt.guard)) {
    std::ostringstream msg;
    msg << "Omega = " << A.Omega << " is not below the cutoff " << cutoff
        << " by the guard band; the tail does not decay";
    throw Error(ErrorKind::precondition, msg.str());
  }
  const std::optional<std::size_t> last = scan.last_nonnegative(A);
  if (!last) return opt.default_y_bar;
  // Beyond the turning point the surface solution is dominated by the growing
  // direction; a margin longer than the decay length 1/kappa_inf makes the
  // mismatch needlessly steep.
  const double gamma_inf = A.Omega * profile.rho_inf() - A.K * profile.mu_inf();
  const double margin = std::min(opt.margin, 1.0 / std::sqrt(-gamma_inf / profile.mu_inf()));
  const std::vector<double>& y = scan.y();
  return std::max(y[*last + 1], y[*last] + margin);
}

double select_tail_start(const MaterialProfile& profile, const ParamPoint& A, double y_bar,
                         const ProfileScan& scan, const MatchingOptions& opt) {
  const double gamma_inf = A.Omega * profile.rho_inf() - A.K * profile.mu_inf();
  if (!(gamma_inf < 0.0))
    throw Error(ErrorKind::precondition, "tail start needs gamma_A(inf) < 0");
  auto stretched = [&](double Y) { return y_bar + opt.tail_stretch * (Y - y_bar); };
  if (profile.exact_tail()) return stretched(std::max(y_bar, profile.y_max_data()));

  const std::vector<double>& y = scan.y();
  // Coefficient closeness: suffix bounds are monotone, so binary search.
  std::size_t lo = scan.index_at_or_after(y_bar), hi = scan.size();
  auto close_enough = [&](std::size_t i) {
    return scan.beta_bound(A, i) <= opt.tail_rel_tol * std::abs(gamma_inf) &&
           scan.beta_integral_bound(A, i) <= opt.tail_residual_tol;
  };
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (close_enough(mid)) hi = mid; else lo = mid + 1;
  }
  std::size_t i = lo;
  // Damping of the growing direction between y_bar and Y.
  const double needed = -0.5 * std::log(opt.damping_tol);
  const std::size_t start = scan.index_at_or_after(y_bar);
  double damping = 0.0;
  auto kappa = [&](std::size_t k) {
    const double g = A.Omega * scan.rho(k) - A.K * scan.mu(k);
    return std::sqrt(std::max(-g, 0.0) / scan.mu(k));
  };
  for (std::size_t k = start; k + 1 < scan.size(); ++k) {
    if (k >= i && damping >= needed) break;
    damping += 0.5 * (y[k + 1] - y[k]) * (kappa(k) + kappa(k + 1));
    i = std::max(i, k + 1);
  }
  if (i >= scan.size() || damping < needed) {
    std::ostringstream msg;
    msg << "tail start not found before depth " << y.back()
        << "; increase the profile's data extent or loosen tail_rel_tol";
    throw Error(ErrorKind::convergence, msg.str());
  }
  return stretched(std::max(y[i], y_bar));
}

MatchingConfig matching_config(const MaterialProfile& profile, const ParamPoint& A,
                               const ProfileScan& scan, const MatchingOptions& opt) {
  const double y_bar = select_matching_point(profile, A, scan, opt);
  const double y_tail = select_tail_start(profile, A, y_bar, scan, opt);
  return {y_bar, y_tail, opt.tail_rel_tol, opt.tail_residual_tol};
}

double decaying_phase_at_tail(const MaterialProfile& profile, const ParamPoint& A, double Y) {
  const double g = profile.gamma(A, Y);
  if (!(g < 0.0)) throw Error(ErrorKind::precondition, "gamma_A(Y) must be negative");
  return std::numbers::pi / 2 + std::atan(std::sqrt(-g * profile.eval(Y).mu));
}

double decaying_phase_at_tail(const PhaseSystem& sys, double Y) {
  const PhaseCoef c = sys(sys.to_x(Y));
  if (!(c.gamma < 0.0)) throw Error(ErrorKind::precondition, "gamma_A(Y) must be negative");
  return std::numbers::pi / 2 + std::atan(std::sqrt(-c.gamma / c.inv_mu));
}

namespace {

PhaseState sweep(const PhaseSystem& sys, double y_bar, double Y, const IntegratorSettings& s,
                 bool amplitude, const PhaseObserver& observer) {
  const double x_bar = sys.to_x(y_bar);
  const double x_tail = sys.to_x(Y);
  const double phi_tail = decaying_phase_at_tail(sys, Y);
  constexpr double half_pi = std::numbers::pi / 2;
  auto check = [&](double x, double phi) {
    if (!(phi > half_pi && phi < std::numbers::pi)) {
      std::ostringstream msg;
      msg << "decaying angle left (pi/2, pi) at depth " << sys.to_y(x) << ": " << phi;
      throw Error(ErrorKind::consistency, msg.str());
    }
  };
  PhaseState st{x_bar, phi_tail, 0.0};
  if (amplitude || observer) {
    const PhaseObserver obs = [&](const ode::DenseStep<2>& d) {
      check(d.x0, d.r1[0]);
      if (observer) observer(d);
    };
    st = propagate_phase(sys, phi_tail, x_tail, x_bar, s, 0.0, obs);
  } else {
    st.phi = propagate_angle(sys, phi_tail, x_tail, x_bar, s, check);
  }
  check(x_bar, st.phi);
  return st;
}

}  // namespace

DecayResult decaying_phase(const PhaseSystem& sys, const MatchingConfig& cfg,
                           const IntegratorSettings& s, const MatchingOptions& opt,
                           bool amplitude, const PhaseObserver& observer) {
  if (!(cfg.y_bar > 0.0 && cfg.y_bar <= cfg.y_tail))
    throw Error(ErrorKind::precondition, "matching config needs 0 < y_bar <= y_tail");
  DecayResult out;
  double Y = cfg.y_tail;
  PhaseState st = sweep(sys, cfg.y_bar, Y, s, amplitude, observer);
  if (!opt.robustness_check || sys.profile().exact_tail()) {
    out.state = st;
    out.y_tail = Y;
    return out;
  }
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    const double Y2 = Y + std::max(Y - cfg.y_bar, 1.0);
    const PhaseState st2 = sweep(sys, cfg.y_bar, Y2, s, amplitude, observer);
    const double delta = std::abs(st2.phi - st.phi);
    if (delta <= opt.robustness_tol) {
      out.state = st2;
      out.y_tail = Y2;
      out.robustness_delta = delta;
      out.retries = attempt;
      return out;
    }
    Y = Y2;
    st = st2;
  }
  std::ostringstream msg;
  msg << "decaying angle at y_bar = " << cfg.y_bar << " still moves after " << opt.max_retries
      << " tail doublings";
  throw Error(ErrorKind::convergence, msg.str());
}

}  // namespace shwave
