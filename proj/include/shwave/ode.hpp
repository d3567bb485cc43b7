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

// Dormand-Prince 5(4) embedded Runge-Kutta pair with step-size control and
// the fourth-order continuous extension of Hairer, Norsett & Wanner (DOPRI5).
// Integration runs in either direction; a negative span integrates backward
// with the same code path.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "shwave/error.hpp"

namespace shwave::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects a step automatically
  std::size_t max_steps = 20'000'000;
};

// Continuous extension over one accepted step [x0, x0 + h].
template <std::size_t N>
struct DenseStep {
  double x0 = 0.0;
  double h = 0.0;
  State<N> r1{}, r2{}, r3{}, r4{}, r5{};

  double x1() const { return x0 + h; }

  State<N> operator()(double x) const {
    const double t = (x - x0) / h;
    const double t1 = 1.0 - t;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = r1[i] + t * (r2[i] + t1 * (r3[i] + t * (r4[i] + t1 * r5[i])));
    return out;
  }
};

struct NoObserver {
  template <class Step>
  void operator()(const Step&) const noexcept {}
};

namespace detail {

inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
double scaled_norm(const State<N>& v, const State<N>& y, const StepControl& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = c.abs_tol + c.rel_tol * std::abs(y[i]);
    acc += (v[i] / sc) * (v[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
std::vector<double> to_vector(const State<N>& s) {
  return std::vector<double>(s.begin(), s.end());
}

}  // namespace detail

template <std::size_t N, class Rhs>
double initial_step(Rhs& f, double x, const State<N>& y, const State<N>& f0, double dir,
                    double span, const StepControl& c) {
  const double d0 = detail::scaled_norm<N>(y, y, c);
  const double d1 = detail::scaled_norm<N>(f0, y, c);
  double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, span, c.max_step});
  State<N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * f0[i];
  State<N> f1 = f(x + dir * h0, y1);
  State<N> df;
  for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
  const double d2 = detail::scaled_norm<N>(df, y, c) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, span, c.max_step});
}

// Integrates y' = f(x, y) from x0 to x1 (either direction) and returns y(x1).
// The observer receives a DenseStep for every accepted step, in order of
// integration.
template <std::size_t N, class Rhs, class Observer = NoObserver>
State<N> integrate(Rhs&& f, State<N> y, double x0, double x1, const StepControl& c,
                   Observer&& observer = Observer{}) {
  using namespace detail;
  if (x0 == x1) return y;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  double x = x0;
  State<N> k1 = f(x, y);
  double h = c.initial_step > 0.0 ? std::min({c.initial_step, span, c.max_step})
                                  : initial_step<N>(f, x, y, k1, dir, span, c);
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  std::size_t steps = 0;
  bool last_rejected = false;

  while (dir * (x1 - x) > 0.0) {
    if (++steps > c.max_steps)
      throw IntegrationError("step budget exhausted", x, to_vector<N>(y));
    const double remaining = std::abs(x1 - x);
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      throw IntegrationError("step size underflow", x, to_vector<N>(y));
    const double s = dir * h;

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + s * a21 * k1[i];
    k2 = f(x + c2 * s, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + s * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(x + c3 * s, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + s * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(x + c4 * s, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + s * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(x + c5 * s, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + s * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double xnew = final_step ? x1 : x + s;
    k6 = f(x + s, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + s * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = f(xnew, ynew);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = s * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    double en = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = c.abs_tol + c.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      en += (err[i] / sc) * (err[i] / sc);
    }
    en = std::sqrt(en / static_cast<double>(N));
    if (!std::isfinite(en)) {
      h *= 0.1;
      last_rejected = true;
      continue;
    }

    if (en <= 1.0) {
      if constexpr (!std::is_same_v<std::decay_t<Observer>, NoObserver>) {
        DenseStep<N> d;
        d.x0 = x;
        d.h = xnew - x;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = s * k1[i] - ydiff;
          d.r1[i] = y[i];
          d.r2[i] = ydiff;
          d.r3[i] = bspl;
          d.r4[i] = ydiff - s * k7[i] - bspl;
          d.r5[i] = s * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
        }
        observer(d);
      }
      x = xnew;
      y = ynew;
      k1 = k7;
      double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, c.max_step);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return y;
}

}  // namespace shwave::ode
