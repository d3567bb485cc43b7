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

#include "shwave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "shwave/error.hpp"
#include "shwave/parallel.hpp"

namespace shwave {
namespace {

constexpr double kPi = std::numbers::pi;

long count_from_phi(double Phi) { return static_cast<long>(std::floor(Phi / kPi)) + 1; }

std::string format_warning(double Omega, const std::exception& e) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "Omega = " << Omega << ": " << e.what();
  return msg.str();
}

}  // namespace

PreparedProfile::PreparedProfile(MaterialProfile profile, const ScanOptions& classification,
                                 const ScanGridOptions& grid)
    : profile_(std::move(profile)),
      class_(classify(profile_, classification)),
      scan_(profile_, grid) {}

std::shared_ptr<const TauMap> PreparedProfile::tau_map() const {
  std::call_once(tau_once_, [this] {
    tau_ = std::make_shared<const TauMap>(TauMap::build(profile_));
  });
  return tau_;
}

PhaseSystem PreparedProfile::system(const ParamPoint& A, Coordinates c) const {
  if (c == Coordinates::tau) return PhaseSystem(profile_, A, tau_map());
  return PhaseSystem(profile_, A);
}

OmegaInterval PreparedProfile::interval(double K) const {
  return admissible_interval(profile_, class_, K);
}

MismatchValue evaluate_mismatch(const PreparedProfile& p, double K, double Omega,
                                const SolverOptions& opt, std::optional<double> y_bar) {
  const ParamPoint A{K, Omega};
  const MaterialProfile& profile = p.profile();
  double yb = select_matching_point(profile, A, p.scan(), opt.matching);
  if (y_bar) {
    const std::optional<std::size_t> last = p.scan().last_nonnegative(A);
    if (last && *y_bar < p.scan().y()[*last + 1])
      throw Error(ErrorKind::precondition,
                  "matching depth lies before the last sign change of gamma_A");
    yb = *y_bar;
  }
  const double Y = select_tail_start(profile, A, yb, p.scan(), opt.matching);
  const PhaseSystem sys = p.system(A, opt.coordinates);
  const MatchingConfig cfg{yb, Y, opt.matching.tail_rel_tol, opt.matching.tail_residual_tol};
  const DecayResult decay = decaying_phase(sys, cfg, opt.integrator, opt.matching);
  const double phi0 = propagate_angle(sys, kPi / 2, 0.0, sys.to_x(yb), opt.integrator);
  MismatchValue v;
  v.Omega = Omega;
  v.phi_surface = phi0;
  v.phi_decay = decay.state.phi;
  v.Phi = phi0 - decay.state.phi;
  v.y_bar = yb;
  v.y_tail = decay.y_tail;
  return v;
}

double mismatch(const PreparedProfile& p, double K, double Omega, const SolverOptions& opt) {
  return evaluate_mismatch(p, K, Omega, opt).Phi;
}

long mode_count_below(const PreparedProfile& p, double K, double Omega, const SolverOptions& opt) {
  return count_from_phi(evaluate_mismatch(p, K, Omega, opt).Phi);
}

ModeShape reconstruct_mode_shape(const MaterialProfile& profile, const Mode& mode,
                                 const std::vector<double>& y_grid, const IntegratorSettings& s,
                                 double tol) {
  if (!std::is_sorted(y_grid.begin(), y_grid.end()) || (!y_grid.empty() && y_grid.front() < 0.0))
    throw Error(ErrorKind::domain, "mode-shape grid must be ascending and start at depth >= 0");
  const ParamPoint A{mode.K, mode.Omega};
  const double y_bar = mode.y_bar, Y = mode.y_tail;
  if (!(y_bar > 0.0 && Y >= y_bar)) throw Error(ErrorKind::precondition, "mode carries no matching depths");
  const PhaseSystem sys(profile, A);
  ModeShape out;
  out.y = y_grid;
  out.u.assign(y_grid.size(), 0.0);
  auto u_of = [](double phi, double log_r) { return std::exp(log_r) * std::sin(phi); };

  // Surface sweep over the points in [0, y_bar].
  const std::size_t n_fwd =
      static_cast<std::size_t>(std::upper_bound(y_grid.begin(), y_grid.end(), y_bar) - y_grid.begin());
  std::size_t next = 0;
  while (next < n_fwd && y_grid[next] == 0.0) out.u[next++] = 1.0;
  const PhaseState fwd = propagate_phase(sys, kPi / 2, 0.0, y_bar, s, 0.0, [&](const ode::DenseStep<2>& st) {
    while (next < n_fwd && y_grid[next] <= st.x1()) {
      const auto v = st(y_grid[next]);
      out.u[next++] = u_of(v[0], v[1]);
    }
  });
  for (; next < n_fwd; ++next) out.u[next] = u_of(fwd.phi, fwd.log_r);

  // Decaying sweep, visited from the deepest point upward.
  const double phi_tail = decaying_phase_at_tail(sys, Y);
  const std::size_t n_tail =
      static_cast<std::size_t>(std::upper_bound(y_grid.begin(), y_grid.end(), Y) - y_grid.begin());
  std::size_t back = n_tail;
  while (back > n_fwd && y_grid[back - 1] == Y) out.u[--back] = u_of(phi_tail, 0.0);
  const PhaseState bwd = propagate_phase(sys, phi_tail, Y, y_bar, s, 0.0, [&](const ode::DenseStep<2>& st) {
    while (back > n_fwd && y_grid[back - 1] >= st.x1()) {
      const auto v = st(y_grid[back - 1]);
      out.u[--back] = u_of(v[0], v[1]);
    }
  });
  for (; back > n_fwd; --back) out.u[back - 1] = u_of(bwd.phi, bwd.log_r);

  const double offset = static_cast<double>(mode.m - 1) * kPi;
  const double residual = std::abs(fwd.phi - bwd.phi - offset);
  if (residual > tol)
    throw Error(ErrorKind::consistency, "angle mismatch " + std::to_string(residual) +
                                            " at the matching depth exceeds the tolerance");
  const double scale = ((mode.m - 1) % 2 == 0 ? 1.0 : -1.0) * std::exp(fwd.log_r - bwd.log_r);
  const PhaseCoef c = sys(Y);
  const double kappa = std::sqrt(-c.gamma * c.inv_mu);
  for (std::size_t i = n_fwd; i < y_grid.size(); ++i)
    out.u[i] = i < n_tail ? scale * out.u[i]
                          : scale * u_of(phi_tail, 0.0) * std::exp(-kappa * (y_grid[i] - Y));
  for (double v : out.u) out.max_abs = std::max(out.max_abs, std::abs(v));
  const double u_minus = u_of(fwd.phi, fwd.log_r);
  const double u_plus = scale * u_of(bwd.phi, bwd.log_r);
  const double w_minus = std::exp(fwd.log_r) * std::cos(fwd.phi);
  const double w_plus = scale * std::exp(bwd.log_r) * std::cos(bwd.phi);
  const double norm = std::max(out.max_abs, std::hypot(u_minus, w_minus));
  out.continuity_error = std::max(std::abs(u_minus - u_plus), std::abs(w_minus - w_plus)) / norm;
  if (out.continuity_error > tol)
    throw Error(ErrorKind::consistency, "mode shape is discontinuous at the matching depth");
  return out;
}

namespace {

struct GridPoint {
  double Omega;
  std::optional<MismatchValue> value;
  std::string error;
};

struct Bracket {
  double a, b;
  int m;
  MismatchValue at_b;
};

struct Refined {
  Mode mode;
  std::size_t evaluations = 0;
  std::vector<std::string> warnings;
};

Mode make_mode(double K, int m, const MismatchValue& v) {
  Mode mode;
  mode.K = K;
  mode.Omega = v.Omega;
  mode.m = m;
  mode.phi_surface = v.phi_surface;
  mode.phi_decay = v.phi_decay;
  mode.residual = std::abs(v.Phi - (m - 1) * kPi);
  mode.y_bar = v.y_bar;
  mode.y_tail = v.y_tail;
  return mode;
}

// Bisection on Phi - (m - 1) pi with the matching depth of the right end,
// which stays valid for every Omega in the bracket. Stops when the bracket is
// below root_tol and the angle residual below residual_tol, or when the
// bracket cannot shrink any further.
Refined refine(const PreparedProfile& p, double K, const Bracket& br, const SolverOptions& opt) {
  Refined out;
  const double target = (br.m - 1) * kPi;
  double a = br.a, b = br.b;
  MismatchValue vb = br.at_b;
  std::optional<MismatchValue> va;
  auto settled = [&] {
    const double fb = std::abs(vb.Phi - target);
    const double fa = va ? std::abs(va->Phi - target) : kInf;
    return b - a <= opt.root_tol * b && std::min(fa, fb) <= opt.residual_tol;
  };
  try {
    while (!settled()) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const MismatchValue v = evaluate_mismatch(p, K, mid, opt, br.at_b.y_bar);
      ++out.evaluations;
      if (v.Phi - target >= 0.0) {
        b = mid;
        vb = v;
      } else {
        a = mid;
        va = v;
      }
    }
  } catch (const Error& e) {
    // Fall back to bisection on the (matching-depth independent) count.
    out.warnings.push_back(format_warning(0.5 * (a + b), e));
    while (b - a > opt.root_tol * b) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const MismatchValue v = evaluate_mismatch(p, K, mid, opt);
      ++out.evaluations;
      if (count_from_phi(v.Phi) >= br.m) {
        b = mid;
        vb = v;
      } else {
        a = mid;
        va.reset();
      }
    }
    vb.Phi = vb.phi_surface - vb.phi_decay;
    out.mode = make_mode(K, br.m, vb);
    out.mode.flagged = true;
    return out;
  }
  const MismatchValue& best =
      va && std::abs(va->Phi - target) < std::abs(vb.Phi - target) ? *va : vb;
  out.mode = make_mode(K, br.m, best);
  if (out.mode.residual > opt.residual_tol && opt.integrator.rel_tol > 1e-13) {
    // The residual sits at the integration noise level: repeat on a slightly
    // widened bracket with tighter integrator tolerances.
    SolverOptions tight = opt;
    tight.integrator.rel_tol *= 1e-2;
    tight.integrator.abs_tol *= 1e-2;
    const double w = std::max(64.0 * (b - a), 1e-7 * b);
    Bracket inner{std::max(br.a, a - w), std::min(br.b, b + w), br.m, {}};
    inner.at_b = evaluate_mismatch(p, K, inner.b, tight, br.at_b.y_bar);
    Refined again = refine(p, K, inner, tight);
    again.evaluations += out.evaluations + 1;
    return again;
  }
  if (out.mode.residual > opt.residual_tol) {
    out.mode.flagged = true;
    std::ostringstream msg;
    msg.precision(3);
    msg << "mode " << br.m << ": angle residual " << out.mode.residual << " above tolerance";
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace

ModeSearch find_modes(const PreparedProfile& p, double K, const SolverOptions& opt) {
  if (!(K > 0.0)) throw Error(ErrorKind::domain, "K must be positive");
  ModeSearch out;
  out.K = K;
  out.interval = p.interval(K);
  if (p.classification().global_negative) {
    out.nonexistence = true;
    out.reason =
        "nonexistence: global negative monotonicity (Arg a(y) >= Arg a_inf for every depth)";
    return out;
  }
  if (out.interval.empty()) {
    out.nonexistence = true;
    out.reason = "nonexistence: empty admissible interval (min mu/rho equals mu_inf/rho_inf)";
    return out;
  }
  const double lo = out.interval.lo, hi = out.interval.hi;
  const double guard = opt.matching.guard;
  const double top = hi * (1.0 - 2.0 * guard);
  const std::size_t n = std::max<std::size_t>(opt.omega_grid_n, 2);

  std::vector<double> grid;
  for (std::size_t i = 1; i <= n; ++i)
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n + 1));
  // Geometric refinement toward the cutoff, where modes can accumulate.
  for (double s = 0.5 * (hi - lo) / static_cast<double>(n + 1); s > 2.0 * guard * hi; s *= 0.5)
    grid.push_back(hi - s);
  grid.push_back(top);
  for (double h : opt.omega_hints)
    if (h > lo && h < top) grid.push_back(h);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.back() > top) grid.pop_back();

  // Counts in ascending chunks of fixed size; stop once more than max_modes
  // modes lie below the chunk's end.
  constexpr std::size_t chunk = 16;
  std::vector<GridPoint> pts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) pts[i].Omega = grid[i];
  std::vector<Bracket> brackets;
  double left = lo;
  long left_count = 0;
  std::optional<MismatchValue> left_value;
  for (std::size_t start = 0; start < pts.size() && !out.truncated; start += chunk) {
    const std::size_t stop = std::min(pts.size(), start + chunk);
    parallel_for(stop - start, opt.workers, [&](std::size_t j) {
      GridPoint& gp = pts[start + j];
      try {
        gp.value = evaluate_mismatch(p, K, gp.Omega, opt);
      } catch (const Error& e) {
        gp.error = format_warning(gp.Omega, e);
      }
    });
    out.evaluations += stop - start;
    for (std::size_t i = start; i < stop && !out.truncated; ++i) {
      if (!pts[i].value) {
        out.warnings.push_back(pts[i].error);
        continue;
      }
      const long c = count_from_phi(pts[i].value->Phi);
      if (c < left_count) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "mode count decreased at Omega = " << pts[i].Omega << " (" << left_count << " -> "
            << c << ")";
        out.warnings.push_back(msg.str());
        continue;
      }
      for (long m = left_count + 1; m <= c; ++m) {
        if (static_cast<std::size_t>(m) > opt.max_modes) {
          out.truncated = true;
          break;
        }
        brackets.push_back({left, pts[i].Omega, static_cast<int>(m), *pts[i].value});
      }
      left = pts[i].Omega;
      left_count = c;
      left_value = pts[i].value;
    }
  }

  std::vector<Refined> refined(brackets.size());
  parallel_for(brackets.size(), opt.workers,
               [&](std::size_t i) { refined[i] = refine(p, K, brackets[i], opt); });
  for (Refined& r : refined) {
    out.evaluations += r.evaluations;
    out.modes.push_back(r.mode);
    for (std::string& w : r.warnings) out.warnings.push_back(std::move(w));
  }
  std::sort(out.modes.begin(), out.modes.end(),
            [](const Mode& l, const Mode& r) { return l.Omega < r.Omega; });
  if (out.modes.empty()) out.reason = "no mode below the cutoff";
  return out;
}

BranchTrace trace_branches(const PreparedProfile& p, const std::vector<double>& k_grid,
                           const SolverOptions& opt) {
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0)) throw Error(ErrorKind::domain, "k values must be positive");
    if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
      throw Error(ErrorKind::validation, "k grid must be strictly increasing");
  }
  BranchTrace out;
  out.k_grid = k_grid;
  out.searches.resize(k_grid.size());
  out.errors.resize(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const double k = k_grid[i];
    SolverOptions local = opt;
    local.omega_hints.clear();
    // Linear extrapolation of each branch from the two previous k values.
    if (i >= 2) {
      std::map<int, double> prev, prev2;
      for (const Mode& m : out.searches[i - 1].modes) prev[m.m] = std::sqrt(m.Omega);
      for (const Mode& m : out.searches[i - 2].modes) prev2[m.m] = std::sqrt(m.Omega);
      for (const auto& [m, w1] : prev) {
        const auto it = prev2.find(m);
        if (it == prev2.end()) continue;
        const double slope = (w1 - it->second) / (k_grid[i - 1] - k_grid[i - 2]);
        const double w = w1 + slope * (k - k_grid[i - 1]);
        local.omega_hints.push_back(w * w * (1.0 - 1e-3));
        local.omega_hints.push_back(w * w * (1.0 + 1e-3));
      }
    }
    try {
      out.searches[i] = find_modes(p, k * k, local);
    } catch (const Error& e) {
      out.searches[i].K = k * k;
      out.errors[i] = e.what();
    }
  }

  std::map<int, Branch> branches;
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    for (const Mode& m : out.searches[i].modes) {
      Branch& b = branches[m.m];
      b.m = m.m;
      b.points.push_back({k_grid[i], std::sqrt(m.Omega), m});
    }
  }
  for (auto& [m, b] : branches) {
    const double onset = b.points.front().k;
    std::size_t next = 0;
    for (double k : k_grid) {
      if (k < onset) continue;
      if (next < b.points.size() && b.points[next].k == k)
        ++next;
      else
        b.gaps.push_back(k);
    }
    out.branches.push_back(std::move(b));
  }
  return out;
}

ModeCountEstimate estimate_mode_count(const MaterialProfile& profile, double K,
                                      const quad::TailOptions& tail) {
  if (!(K > 0.0)) throw Error(ErrorKind::domain, "K must be positive");
  const double Omega = K * profile.mu_inf() / profile.rho_inf();
  auto integrand = [&](double y) {
    const MaterialPoint p = profile.eval(y);
    return std::sqrt(std::max(Omega * p.rho - K * p.mu, 0.0) / p.mu);
  };
  ModeCountEstimate out;
  out.integral = quad::integrate_to_infinity(integrand, 0.0, tail);
  if (out.integral.verdict == quad::TailVerdict::converged) {
    out.value = out.integral.value / kPi;
    out.diagnostic = "integral converged";
  } else {
    out.value = kInf;
    out.finite = false;
    std::ostringstream msg;
    msg.precision(6);
    msg << "integral does not settle up to depth " << tail.y_max << " (window ratio "
        << out.integral.decay_ratio << "); the limit-case equation is likely oscillatory";
    out.diagnostic = msg.str();
  }
  return out;
}

const char* to_string(OscillationVerdict v) noexcept {
  switch (v) {
    case OscillationVerdict::oscillatory: return "oscillatory";
    case OscillationVerdict::non_oscillatory: return "non_oscillatory";
    case OscillationVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OscillationReport oscillation_test(const MaterialProfile& profile, double y_max) {
  OscillationReport out;
  auto ghat = [&](double y) { return profile.limit_gamma_hat(y); };
  auto root_integrand = [&](double y) {
    return std::sqrt(std::max(ghat(y), 0.0) / profile.eval(y).mu);
  };
  constexpr std::size_t samples = 256;
  double I = 0.0, V = 0.0;
  for (double start = 0.0, width = 1.0; start < y_max;) {
    const double end = std::min(start + width, y_max);
    OscillationWindow w;
    w.start = start;
    w.end = end;
    w.integral = quad::integrate(root_integrand, start, end, 1e-10, 1e-300).value;
    // Sampled total variation of ln(gamma_hat) over the window.
    double prev_log = 0.0;
    bool have_prev = false;
    w.min_gamma_hat = kInf;
    w.max_gamma_hat = -kInf;
    for (std::size_t j = 0; j <= samples; ++j) {
      const double t = static_cast<double>(j) / samples;
      const double y = start + (end - start) * t;
      const double g = ghat(y);
      w.min_gamma_hat = std::min(w.min_gamma_hat, g);
      w.max_gamma_hat = std::max(w.max_gamma_hat, g);
      if (g > 0.0) {
        const double lg = std::log(g);
        if (have_prev) V += std::abs(lg - prev_log);
        prev_log = lg;
        have_prev = true;
      } else {
        have_prev = false;
      }
    }
    I += w.integral;
    w.cumulative_I = I;
    w.cumulative_V = V;
    out.windows.push_back(w);
    if (start > 0.0) width *= 2.0;
    start = end;
  }

  const std::size_t n = out.windows.size();
  if (n < 5) {
    out.reason = "too few doubling windows below y_max";
    return out;
  }
  bool all_nonpositive = true, all_positive = true;
  for (std::size_t j = n - 4; j < n; ++j) {
    if (out.windows[j].max_gamma_hat > 0.0) all_nonpositive = false;
    if (!(out.windows[j].min_gamma_hat > 0.0)) all_positive = false;
  }
  out.tail_positive = all_positive;
  if (all_nonpositive) {
    out.verdict = OscillationVerdict::non_oscillatory;
    out.reason = "limit coefficient gamma_hat_inf is not positive on the tail";
    return out;
  }
  if (!all_positive) {
    out.reason = "limit coefficient changes sign on the tail";
    return out;
  }
  const double last = out.windows[n - 1].integral, earlier = out.windows[n - 4].integral;
  out.decay_ratio = earlier > 0.0 ? last / earlier : kInf;
  if (out.decay_ratio <= 0.5) {
    out.verdict = OscillationVerdict::non_oscillatory;
    out.reason = "integral of sqrt(gamma_hat_inf / mu) converges";
    return out;
  }
  bool ratio_decreasing = true;
  for (std::size_t j = n - 4; j + 1 < n; ++j) {
    const double r0 = out.windows[j].cumulative_V / out.windows[j].cumulative_I;
    const double r1 = out.windows[j + 1].cumulative_V / out.windows[j + 1].cumulative_I;
    if (!(r1 < r0)) ratio_decreasing = false;
  }
  if (ratio_decreasing) {
    out.verdict = OscillationVerdict::oscillatory;
    out.reason = "I(T) grows without saturation and V(T)/I(T) decreases";
  } else {
    out.reason = "I(T) grows but V(T)/I(T) does not decrease";
  }
  return out;
}

}  // namespace shwave
