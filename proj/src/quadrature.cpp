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

#include "shwave/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace shwave::quad {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

Result gauss_kronrod15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

std::vector<Panel> adaptive_panels(const Integrand& f, double a, double b, double rel_tol,
                                   double abs_tol, std::size_t max_panels) {
  auto worse = [](const Panel& l, const Panel& r) { return l.error < r.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
  const Result first = gauss_kronrod15(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  while (heap.size() < max_panels && total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    const Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;
    heap.pop();
    const Result l = gauss_kronrod15(f, p.a, mid);
    const Result r = gauss_kronrod15(f, mid, p.b);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push({p.a, mid, l.value, l.error});
    heap.push({mid, p.b, r.value, r.error});
  }
  std::vector<Panel> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::sort(out.begin(), out.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  return out;
}

Result integrate(const Integrand& f, double a, double b, double rel_tol, double abs_tol) {
  Result r;
  if (a == b) return r;
  for (const Panel& p : adaptive_panels(f, a, b, rel_tol, abs_tol)) {
    r.value += p.value;
    r.error += p.error;
  }
  return r;
}

TailIntegral integrate_to_infinity(const Integrand& f, double y0, const TailOptions& opt) {
  TailIntegral out;
  double start = y0;
  double width = opt.first_window;
  double cumulative = 0.0;
  bool negligible = false;
  while (start < opt.y_max) {
    const double end = std::min(start + width, opt.y_max);
    const double w = integrate(f, start, end, opt.rel_tol, 1e-300).value;
    cumulative += w;
    out.windows.push_back({start, end, w, cumulative});
    if (std::abs(w) <= opt.negligible * (end - start) && out.windows.size() >= 2) {
      negligible = true;
      break;
    }
    // Window boundaries: y0, y0+w, y0+2w, y0+4w, ...
    if (out.windows.size() > 1) width *= 2.0;
    start = end;
  }
  out.value = cumulative;
  const std::size_t n = out.windows.size();
  if (negligible) {
    out.verdict = TailVerdict::converged;
    return out;
  }
  if (n < 5) return out;
  const double last = std::abs(out.windows[n - 1].integral);
  const double earlier = std::abs(out.windows[n - 4].integral);
  out.decay_ratio = earlier > 0.0 ? last / earlier : 0.0;
  if (out.decay_ratio * opt.decay_factor <= 1.0) {
    out.verdict = TailVerdict::converged;
    const double r = std::cbrt(out.decay_ratio);
    if (r < 1.0) out.value += out.windows[n - 1].integral * r / (1.0 - r);
  } else {
    out.verdict = TailVerdict::divergent;
  }
  return out;
}

}  // namespace shwave::quad
