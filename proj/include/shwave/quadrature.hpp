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

#pragma once

#include <functional>
#include <vector>

namespace shwave::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// One 15-point Kronrod rule with its embedded 7-point Gauss estimate.
Result gauss_kronrod15(const Integrand& f, double a, double b);

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

// Globally adaptive bisection of [a, b] until the summed error estimate is
// below max(abs_tol, rel_tol * |I|). Returns the accepted panels sorted by
// position; their sum is the integral.
std::vector<Panel> adaptive_panels(const Integrand& f, double a, double b, double rel_tol,
                                   double abs_tol, std::size_t max_panels = 4096);

Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-14);

// Integral over [y0, inf) assembled from doubling windows [y0, y0+w],
// [y0+w, y0+2w], [y0+2w, y0+4w], ...
struct WindowRow {
  double start;
  double end;
  double integral;    // of the window alone
  double cumulative;  // from y0 to end
};

enum class TailVerdict { converged, divergent, undecided };

struct TailIntegral {
  double value = 0.0;  // cumulative integral plus geometric tail extrapolation when converged
  TailVerdict verdict = TailVerdict::undecided;
  double decay_ratio = 0.0;  // W(8T)/W(T) on the last three doublings
  std::vector<WindowRow> windows;
};

struct TailOptions {
  double first_window = 1.0;
  double y_max = 1048576.0;     // last window ends at or before this depth
  double negligible = 1e-14;    // window integrand magnitude treated as zero
  double decay_factor = 2.0;    // required decay across three doublings
  double rel_tol = 1e-10;
};

// Integrates a nonnegative integrand to infinity with the doubling-window
// heuristic: the integral is declared convergent once the window integrals
// shrink by at least decay_factor across three consecutive doublings (or the
// integrand becomes negligible), divergent if they fail to do so at y_max.
TailIntegral integrate_to_infinity(const Integrand& f, double y0, const TailOptions& opt = {});

}  // namespace shwave::quad
