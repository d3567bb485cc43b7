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

// Reference spectra that share no numerics with the Prufer solver:
//
//  * rho = 1 + q exp(-y/d), mu = 1: the decaying solution is J_nu(x) with
//    nu = 2d sqrt(K - Omega), x = 2d sqrt(Omega q) exp(-y/(2d)), and u'(0) = 0
//    becomes J'_nu(2d sqrt(Omega q)) = 0.
//  * any profile: second-order finite differences on [0, L] with a mirrored
//    Neumann row at 0 and u(L) = 0, solved as a symmetric tridiagonal
//    eigenproblem.

#pragma once

#include <string>
#include <vector>

#include "shwave/profile.hpp"

namespace shwave::oracle {

// J_nu(x) and its first two derivatives for real nu >= 0, x >= 0.
struct BesselValue {
  double j;
  double dj;
  double d2j;
};

// Power series (long double) for small x, Miller backward recurrence with the
// Neumann-series normalization otherwise. d2j comes from the differentiated
// series on the series branch and from the Bessel equation on the other.
BesselValue bessel_j(double nu, double x);
BesselValue bessel_j_series(double nu, double x);
BesselValue bessel_j_recurrence(double nu, double x);

struct SelfTest {
  bool passed = false;
  double max_residual = 0.0;        // |u'' + gamma u| / max|u| at the sample depths
  double branch_mismatch = 0.0;     // series vs recurrence on the overlap
  double known_zero_derivative = 0.0;  // |J'_1(1.841183781340659)|
  std::string detail;
};

// Residual of the closed-form solution against the ODE at `samples`
// pseudo-random depths, cross-check of the two evaluation branches, and the
// first zero of J'_1.
SelfTest bessel_self_test(double q, double d, double K, double Omega, int samples = 20,
                          unsigned seed = 12345);

enum class Method { bessel, finite_difference };

const char* to_string(Method m) noexcept;

struct OracleResult {
  std::vector<double> omegas;  // Omega values, ascending
  Method method = Method::bessel;
  // Bessel: series terms / scan points; finite differences: L and n.
  std::vector<std::pair<std::string, double>> discretization;
  bool usable = true;
  std::vector<double> unconverged;  // eigenvalues that failed the stability check
  std::string detail;
};

OracleResult bessel_mode_frequencies(double q, double d, double K);

// Eigenvalues below the cutoff for one discretization (L, n).
std::vector<double> fd_eigenvalues(const MaterialProfile& profile, double K, double L,
                                   std::size_t n);

// Richardson-extrapolated eigenvalues (n, 2n) at L, checked against the same
// at (2L, 4n); eigenvalues stable to `stability` relative are returned.
OracleResult fd_mode_frequencies(const MaterialProfile& profile, double K, double L,
                                 std::size_t n = 20000, double stability = 1e-5);

}  // namespace shwave::oracle
