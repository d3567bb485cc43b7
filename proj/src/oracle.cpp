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

#include "shwave/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "shwave/error.hpp"

namespace shwave::oracle {
namespace {

constexpr double kSeriesLimit = 12.0;

}  // namespace

BesselValue bessel_j_series(double nu, double x) {
  if (!(nu >= 0.0) || !(x > 0.0))
    throw Error(ErrorKind::domain, "Bessel series needs nu >= 0 and x > 0");
  using ld = long double;
  const ld h = static_cast<ld>(x) / 2;
  const ld q = -h * h;
  ld t = std::exp(static_cast<ld>(nu) * std::log(h) - std::lgamma(static_cast<ld>(nu) + 1));
  ld j = 0, dj = 0, d2j = 0;
  for (int k = 0; k < 1000; ++k) {
    if (k > 0) t *= q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    const ld p = 2 * static_cast<ld>(k) + nu;
    j += t;
    dj += t * p;
    d2j += t * p * (p - 1);
    if (k > h && std::abs(t) * (p * p + 1) <= 1e-21L * (std::abs(j) + std::abs(dj) + 1e-300L))
      break;
  }
  const ld xl = x;
  return {static_cast<double>(j), static_cast<double>(dj / xl),
          static_cast<double>(d2j / (xl * xl))};
}

BesselValue bessel_j_recurrence(double nu, double x) {
  if (!(nu >= 0.0) || !(x > 0.0))
    throw Error(ErrorKind::domain, "Bessel recurrence needs nu >= 0 and x > 0");
  using ld = long double;
  const double whole = std::floor(nu);
  const ld f = static_cast<ld>(nu - whole);
  const auto target = static_cast<long>(whole);
  const double big = std::max(nu, x);
  long N = target + static_cast<long>(std::ceil(x + 40.0 + 4.0 * std::sqrt(big))) + 2;
  if (N % 2) ++N;

  // Backward recurrence J_{mu-1} = (2 mu / x) J_mu - J_{mu+1} over orders f + k.
  ld next = 0, cur = 1e-300L;
  ld j_target = 0, j_target_plus = 0;
  ld norm = 0;
  // Normalization (x/2)^f = Gamma(1+f) J_f + sum_k (f+2k) Gamma(f+k)/k! J_{f+2k}.
  auto coef = [&](long k) -> ld {
    if (k == 0) return std::exp(std::lgamma(1 + f));
    return (f + 2 * k) * std::exp(std::lgamma(f + k) - std::lgamma(static_cast<ld>(k) + 1));
  };
  for (long k = N; k >= 0; --k) {
    // cur holds J_{f+k}, next holds J_{f+k+1} (unnormalized).
    if (k == target) j_target = cur;
    if (k == target + 1) j_target_plus = cur;
    if (k % 2 == 0) norm += coef(k / 2) * cur;
    if (k == 0) break;
    const ld prev = 2 * (f + k) / x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e1000L) {
      cur *= 1e-1000L;
      next *= 1e-1000L;
      norm *= 1e-1000L;
      j_target *= 1e-1000L;
      j_target_plus *= 1e-1000L;
    }
  }
  const ld scale = std::pow(static_cast<ld>(x) / 2, f) / norm;
  const ld j = j_target * scale;
  const ld jp = j_target_plus * scale;
  const ld dj = static_cast<ld>(nu) / x * j - jp;
  const ld d2j = -dj / x - (1 - static_cast<ld>(nu) * nu / (static_cast<ld>(x) * x)) * j;
  return {static_cast<double>(j), static_cast<double>(dj), static_cast<double>(d2j)};
}

BesselValue bessel_j(double nu, double x) {
  if (x <= kSeriesLimit || x <= 0.5 * nu) return bessel_j_series(nu, x);
  return bessel_j_recurrence(nu, x);
}

SelfTest bessel_self_test(double q, double d, double K, double Omega, int samples,
                          unsigned seed) {
  SelfTest out;
  const double nu = 2.0 * d * std::sqrt(std::max(K - Omega, 0.0));
  const double X = 2.0 * d * std::sqrt(Omega * q);
  // Depths where the series is accurate in long double (x <= 20).
  const double y0 = X > 20.0 ? 2.0 * d * std::log(X / 20.0) : 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> depth(y0, y0 + 10.0 * d);
  double max_u = 0.0, max_res = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double y = depth(rng);
    const double x = X * std::exp(-y / (2.0 * d));
    const BesselValue b = bessel_j_series(nu, x);
    // u(y) = J(x(y)), x' = -x/(2d): u'' = (x^2 J'' + x J') / (4 d^2).
    const double u2 = (x * x * b.d2j + x * b.dj) / (4.0 * d * d);
    const double gamma = Omega * (1.0 + q * std::exp(-y / d)) - K;
    max_u = std::max(max_u, std::abs(b.j));
    max_res = std::max(max_res, std::abs(u2 + gamma * b.j));
  }
  out.max_residual = max_u > 0.0 ? max_res / max_u : max_res;
  for (double x : {1.0, 5.0, 9.0, 12.0}) {
    const BesselValue s = bessel_j_series(nu, x), r = bessel_j_recurrence(nu, x);
    const double scale = std::max({std::abs(s.j), std::abs(s.dj), 1e-300});
    out.branch_mismatch = std::max(
        out.branch_mismatch, std::max(std::abs(s.j - r.j), std::abs(s.dj - r.dj)) / scale);
  }
  out.known_zero_derivative = std::abs(bessel_j(1.0, 1.841183781340659).dj);
  out.passed = out.max_residual <= 1e-9 && out.branch_mismatch <= 1e-10 &&
               out.known_zero_derivative <= 1e-8;
  std::ostringstream msg;
  msg << "residual " << out.max_residual << ", branch mismatch " << out.branch_mismatch
      << ", J'_1 at first zero " << out.known_zero_derivative;
  out.detail = msg.str();
  return out;
}

const char* to_string(Method m) noexcept {
  return m == Method::bessel ? "bessel" : "finite_difference";
}

OracleResult bessel_mode_frequencies(double q, double d, double K) {
  if (!(q > 0.0 && d > 0.0 && K > 0.0))
    throw Error(ErrorKind::domain, "Bessel oracle needs q > 0, d > 0, K > 0");
  OracleResult out;
  out.method = Method::bessel;
  const double lo = K / (1.0 + q), hi = K;
  const SelfTest st = bessel_self_test(q, d, K, 0.5 * (lo + hi));
  if (!st.passed) throw Error(ErrorKind::oracle_unavailable, "Bessel self-test failed: " + st.detail);

  auto f = [&](double Omega) {
    const double nu = 2.0 * d * std::sqrt(K - Omega);
    return bessel_j(nu, 2.0 * d * std::sqrt(Omega * q)).dj;
  };
  constexpr int uniform = 4000;
  std::vector<double> grid;
  for (int i = 1; i < uniform; ++i) grid.push_back(lo + (hi - lo) * i / uniform);
  for (double s = (hi - lo) / uniform / 2.0; s > 1e-12 * hi; s *= 0.5) grid.push_back(hi - s);
  std::sort(grid.begin(), grid.end());

  double a = grid.front(), fa = f(a);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double b = grid[i], fb = f(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      double l = a, r = b, fl = fa;
      for (int it = 0; it < 200 && r - l > 4.0 * std::numeric_limits<double>::epsilon() * r;
           ++it) {
        const double mid = 0.5 * (l + r);
        const double fm = f(mid);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = mid;
          fl = fm;
        } else {
          r = mid;
        }
      }
      out.omegas.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
  }
  out.discretization = {{"scan_points", static_cast<double>(grid.size())},
                        {"series_limit", kSeriesLimit}};
  out.detail = st.detail;
  return out;
}

std::vector<double> fd_eigenvalues(const MaterialProfile& profile, double K, double L,
                                   std::size_t n) {
  if (!(K > 0.0 && L > 0.0) || n < 16)
    throw Error(ErrorKind::domain, "finite differences need K > 0, L > 0, n >= 16");
  const double h = L / static_cast<double>(n);
  const double cutoff = K * profile.mu_inf() / profile.rho_inf();
  std::vector<double> diag(n), off(n, 0.0), b(n);
  std::vector<double> mu_half(n);
  for (std::size_t i = 0; i < n; ++i) mu_half[i] = profile.eval((i + 0.5) * h).mu;
  for (std::size_t i = 0; i < n; ++i) {
    const MaterialPoint p = profile.eval(static_cast<double>(i) * h);
    if (i == 0) {
      // Mirrored Neumann row, halved to keep the pencil symmetric.
      diag[0] = mu_half[0] / (h * h) + 0.5 * K * p.mu;
      b[0] = 0.5 * p.rho;
    } else {
      diag[i] = (mu_half[i - 1] + mu_half[i]) / (h * h) + K * p.mu;
      b[i] = p.rho;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) off[i] = -mu_half[i] / (h * h) / std::sqrt(b[i] * b[i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] /= b[i];

  std::vector<double> w(n);
  std::vector<lapack_int> support(2 * n);
  lapack_int found = 0;
  double z_dummy = 0.0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), diag.data(),
                     off.data(), 0.0, cutoff, 0, 0, 0.0, &found, w.data(), &z_dummy, 1,
                     support.data());
  if (info != 0)
    throw Error(ErrorKind::convergence, "tridiagonal eigensolver failed, info = " +
                                            std::to_string(static_cast<long>(info)));
  std::vector<double> out(w.begin(), w.begin() + found);
  out.erase(std::remove_if(out.begin(), out.end(), [&](double v) { return !(v < cutoff); }),
            out.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine) {
  const std::size_t m = std::min(coarse.size(), fine.size());
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
  return r;
}

}  // namespace

OracleResult fd_mode_frequencies(const MaterialProfile& profile, double K, double L,
                                 std::size_t n, double stability) {
  if (n < 1000) throw Error(ErrorKind::domain, "finite-difference oracle needs n >= 1000");
  OracleResult out;
  out.method = Method::finite_difference;
  out.discretization = {{"L", L}, {"n", static_cast<double>(n)}};
  const std::vector<double> base =
      richardson(fd_eigenvalues(profile, K, L, n), fd_eigenvalues(profile, K, L, 2 * n));
  const std::vector<double> wide = richardson(fd_eigenvalues(profile, K, 2.0 * L, 2 * n),
                                              fd_eigenvalues(profile, K, 2.0 * L, 4 * n));
  std::size_t j = 0;
  for (; j < std::min(base.size(), wide.size()); ++j) {
    if (std::abs(base[j] - wide[j]) > stability * std::abs(wide[j])) break;
    out.omegas.push_back(wide[j]);
  }
  for (std::size_t k = j; k < wide.size(); ++k) out.unconverged.push_back(wide[k]);
  out.usable = out.unconverged.empty() && base.size() == wide.size();
  std::ostringstream msg;
  msg << base.size() << " eigenvalues below the cutoff at L = " << L << ", " << wide.size()
      << " at 2L; " << out.omegas.size() << " stable to " << stability;
  out.detail = msg.str();
  return out;
}

}  // namespace shwave::oracle
