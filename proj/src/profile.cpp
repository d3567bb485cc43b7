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

#include "shwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shwave/error.hpp"

namespace shwave {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::validation, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

class ConstantModel final : public ProfileModel {
 public:
  ConstantModel(double rho, double mu) : p_{rho, mu} {
    require(positive(rho) && positive(mu), "constant profile needs rho > 0 and mu > 0");
  }
  MaterialPoint at(double) const override { return p_; }
  MaterialPoint limit() const override { return p_; }
  double data_extent() const override { return 0.0; }
  bool exact_tail() const override { return true; }
  std::string name() const override { return "constant"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"rho", p_.rho}, {"mu", p_.mu}};
  }

 private:
  MaterialPoint p_;
};

// Depth where |delta| * exp(-y/d) drops below 1e-12 of the limit value.
double exp_extent(double limit, double delta, double d) {
  const double ratio = std::abs(delta) / (1e-12 * limit);
  return ratio > 1.0 ? d * std::log(ratio) : d;
}

class ExpDensityModel final : public ProfileModel {
 public:
  ExpDensityModel(double rho_inf, double delta, double d, double mu)
      : rho_inf_(rho_inf), delta_(delta), d_(d), mu_(mu) {
    require(positive(rho_inf) && positive(mu) && positive(d),
            "exp_density needs rho_inf > 0, mu > 0, d > 0");
    require(std::isfinite(delta) && rho_inf + std::min(delta, 0.0) > 0.0,
            "exp_density needs rho_inf + delta_rho > 0");
  }
  MaterialPoint at(double y) const override {
    return {rho_inf_ + delta_ * std::exp(-y / d_), mu_};
  }
  MaterialPoint limit() const override { return {rho_inf_, mu_}; }
  double data_extent() const override { return exp_extent(rho_inf_, delta_, d_); }
  double feature_length() const override { return d_; }
  std::string name() const override { return "exp_density"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"rho_inf", rho_inf_}, {"delta_rho", delta_}, {"d", d_}, {"mu", mu_}};
  }

 private:
  double rho_inf_, delta_, d_, mu_;
};

class ExpModulusModel final : public ProfileModel {
 public:
  ExpModulusModel(double mu_inf, double delta, double d, double rho)
      : mu_inf_(mu_inf), delta_(delta), d_(d), rho_(rho) {
    require(positive(mu_inf) && positive(rho) && positive(d),
            "exp_modulus needs mu_inf > 0, rho > 0, d > 0");
    require(std::isfinite(delta) && mu_inf + std::min(delta, 0.0) > 0.0,
            "exp_modulus needs mu_inf + delta_mu > 0");
  }
  MaterialPoint at(double y) const override {
    return {rho_, mu_inf_ + delta_ * std::exp(-y / d_)};
  }
  MaterialPoint limit() const override { return {rho_, mu_inf_}; }
  double data_extent() const override { return exp_extent(mu_inf_, delta_, d_); }
  double feature_length() const override { return d_; }
  std::string name() const override { return "exp_modulus"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"mu_inf", mu_inf_}, {"delta_mu", delta_}, {"d", d_}, {"rho", rho_}};
  }

 private:
  double mu_inf_, delta_, d_, rho_;
};

class PowerDensityModel final : public ProfileModel {
 public:
  PowerDensityModel(double rho_inf, double c, double p, double mu)
      : rho_inf_(rho_inf), c_(c), p_(p), mu_(mu) {
    require(positive(rho_inf) && positive(mu) && positive(p),
            "power_density needs rho_inf > 0, mu > 0, p > 0");
    require(std::isfinite(c) && rho_inf + std::min(c, 0.0) > 0.0,
            "power_density needs rho_inf + c > 0");
  }
  MaterialPoint at(double y) const override {
    return {rho_inf_ + c_ * std::pow(1.0 + y, -p_), mu_};
  }
  MaterialPoint limit() const override { return {rho_inf_, mu_}; }
  double data_extent() const override {
    const double ratio = std::abs(c_) / (1e-6 * rho_inf_);
    return std::clamp(std::pow(std::max(ratio, 1.0), 1.0 / p_) - 1.0, 10.0, 1e4);
  }
  std::string name() const override { return "power_density"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"rho_inf", rho_inf_}, {"c", c_}, {"p", p_}, {"mu", mu_}};
  }

 private:
  double rho_inf_, c_, p_, mu_;
};

class SmoothedLayerModel final : public ProfileModel {
 public:
  SmoothedLayerModel(double rho1, double mu1, double rho_s, double mu_s, double y_s, double w)
      : layer_{rho1, mu1}, sub_{rho_s, mu_s}, y_s_(y_s), w_(w) {
    require(positive(rho1) && positive(mu1) && positive(rho_s) && positive(mu_s),
            "smoothed_layer needs positive densities and moduli");
    require(positive(y_s) && positive(w) && w <= y_s,
            "smoothed_layer needs 0 < smoothing width <= y_s");
  }
  MaterialPoint at(double y) const override {
    const double t = std::clamp((y - (y_s_ - w_)) / w_, 0.0, 1.0);
    const double s = t * t * (3.0 - 2.0 * t);
    return {layer_.rho + (sub_.rho - layer_.rho) * s, layer_.mu + (sub_.mu - layer_.mu) * s};
  }
  MaterialPoint limit() const override { return sub_; }
  double data_extent() const override { return y_s_; }
  bool exact_tail() const override { return true; }
  double feature_length() const override { return w_; }
  std::string name() const override { return "smoothed_layer"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"rho_1", layer_.rho}, {"mu_1", layer_.mu}, {"rho_s", sub_.rho},
            {"mu_s", sub_.mu},     {"y_s", y_s_},       {"width", w_}};
  }

 private:
  MaterialPoint layer_, sub_;
  double y_s_, w_;
};

// Fritsch-Carlson slopes with the shape-preserving three-point end rule.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& v) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (v[k + 1] - v[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto edge = [](double h0, double h1, double m0, double m1) {
    double e = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (e * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(e) > 3.0 * std::abs(m0)) return 3.0 * m0;
    return e;
  };
  d[0] = edge(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

class TableModel final : public ProfileModel {
 public:
  TableModel(std::vector<Sample> samples, std::optional<double> rho_inf,
             std::optional<double> mu_inf) {
    require(samples.size() >= 2, "table profile needs at least two samples");
    require(samples.front().y == 0.0, "table profile must start at depth 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Sample& s = samples[i];
      std::ostringstream where;
      where << "sample " << i + 1 << ": ";
      require(std::isfinite(s.y), where.str() + "depth is not finite");
      require(positive(s.rho) && positive(s.mu), where.str() + "rho and mu must be positive");
      if (i > 0)
        require(s.y > samples[i - 1].y, where.str() + "depths must be strictly increasing");
      y_.push_back(s.y);
      rho_.push_back(s.rho);
      mu_.push_back(s.mu);
    }
    limit_ = {rho_inf.value_or(rho_.back()), mu_inf.value_or(mu_.back())};
    require(positive(limit_.rho) && positive(limit_.mu), "table limits must be positive");
    const double tol = 1e-12;
    require(std::abs(limit_.rho - rho_.back()) <= tol * limit_.rho &&
                std::abs(limit_.mu - mu_.back()) <= tol * limit_.mu,
            "table limits must equal the last sample (the profile is clamped beyond it)");
    drho_ = pchip_slopes(y_, rho_);
    dmu_ = pchip_slopes(y_, mu_);
    min_spacing_ = kInf;
    for (std::size_t k = 0; k + 1 < y_.size(); ++k)
      min_spacing_ = std::min(min_spacing_, y_[k + 1] - y_[k]);
  }

  MaterialPoint at(double y) const override {
    if (y >= y_.back()) return limit_;
    const auto it = std::upper_bound(y_.begin(), y_.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - y_.begin()) - 1;
    const double h = y_[k + 1] - y_[k];
    const double t = (y - y_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    auto interp = [&](const std::vector<double>& v, const std::vector<double>& d) {
      return h00 * v[k] + h10 * h * d[k] + h01 * v[k + 1] + h11 * h * d[k + 1];
    };
    return {interp(rho_, drho_), interp(mu_, dmu_)};
  }
  MaterialPoint limit() const override { return limit_; }
  double data_extent() const override { return y_.back(); }
  bool exact_tail() const override { return true; }
  double feature_length() const override { return min_spacing_; }
  std::string name() const override { return "table"; }
  std::vector<std::pair<std::string, double>> parameters() const override {
    return {{"samples", static_cast<double>(y_.size())},
            {"rho_inf", limit_.rho},
            {"mu_inf", limit_.mu}};
  }

 private:
  std::vector<double> y_, rho_, mu_, drho_, dmu_;
  MaterialPoint limit_{};
  double min_spacing_ = kInf;
};

class CustomModel final : public ProfileModel {
 public:
  CustomModel(std::function<MaterialPoint(double)> f, MaterialPoint limit, double extent,
              double feature, std::string name)
      : f_(std::move(f)), limit_(limit), extent_(extent), feature_(feature), name_(std::move(name)) {
    require(static_cast<bool>(f_), "custom profile needs an evaluator");
    require(positive(limit.rho) && positive(limit.mu), "custom profile limits must be positive");
    require(std::isfinite(extent) && extent >= 0.0, "custom profile extent must be >= 0");
  }
  MaterialPoint at(double y) const override { return f_(y); }
  MaterialPoint limit() const override { return limit_; }
  double data_extent() const override { return extent_; }
  double feature_length() const override { return feature_; }
  std::string name() const override { return name_; }
  std::vector<std::pair<std::string, double>> parameters() const override { return {}; }

 private:
  std::function<MaterialPoint(double)> f_;
  MaterialPoint limit_;
  double extent_, feature_;
  std::string name_;
};

std::vector<double> classification_grid(const MaterialProfile& profile, const ScanOptions& scan) {
  const double extent = profile.y_max_data();
  const double window = scan.tail_window > 0.0 ? scan.tail_window : std::max(10.0, extent);
  const std::size_t n = std::max<std::size_t>(scan.grid_points, 2);
  std::vector<double> grid;
  grid.reserve(n + 256);
  if (extent > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      grid.push_back(extent * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    grid.push_back(0.0);
  }
  for (std::size_t i = 1; i <= 256; ++i)
    grid.push_back(extent + window * static_cast<double>(i) / 256.0);
  return grid;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

double ParamPoint::arg() const { return std::atan2(Omega, K); }

MaterialProfile::MaterialProfile(std::shared_ptr<const ProfileModel> model)
    : model_(std::move(model)) {
  require(model_ != nullptr, "profile model is null");
  limit_ = model_->limit();
}

MaterialProfile MaterialProfile::constant(double rho, double mu) {
  return MaterialProfile(std::make_shared<ConstantModel>(rho, mu));
}
MaterialProfile MaterialProfile::exp_density(double rho_inf, double delta_rho, double d,
                                             double mu) {
  return MaterialProfile(std::make_shared<ExpDensityModel>(rho_inf, delta_rho, d, mu));
}
MaterialProfile MaterialProfile::exp_modulus(double mu_inf, double delta_mu, double d,
                                             double rho) {
  return MaterialProfile(std::make_shared<ExpModulusModel>(mu_inf, delta_mu, d, rho));
}
MaterialProfile MaterialProfile::power_density(double rho_inf, double c, double p, double mu) {
  return MaterialProfile(std::make_shared<PowerDensityModel>(rho_inf, c, p, mu));
}
MaterialProfile MaterialProfile::smoothed_layer(double rho_1, double mu_1, double rho_s,
                                                double mu_s, double y_s, double width) {
  return MaterialProfile(
      std::make_shared<SmoothedLayerModel>(rho_1, mu_1, rho_s, mu_s, y_s, width));
}
MaterialProfile MaterialProfile::table(std::vector<Sample> samples, std::optional<double> rho_inf,
                                       std::optional<double> mu_inf) {
  return MaterialProfile(std::make_shared<TableModel>(std::move(samples), rho_inf, mu_inf));
}
MaterialProfile MaterialProfile::custom(std::function<MaterialPoint(double)> f,
                                        MaterialPoint limit, double data_extent,
                                        double feature_length, std::string name) {
  return MaterialProfile(std::make_shared<CustomModel>(std::move(f), limit, data_extent,
                                                       feature_length, std::move(name)));
}

MaterialPoint MaterialProfile::eval(double y) const {
  if (!(y >= 0.0)) throw Error(ErrorKind::domain, "depth must be >= 0");
  const MaterialPoint p = model_->at(y);
  if (!(p.rho > 0.0 && p.mu > 0.0))
    throw Error(ErrorKind::validation, "profile lost positivity at depth " + std::to_string(y));
  return p;
}

double MaterialProfile::gamma(const ParamPoint& A, double y) const {
  const MaterialPoint p = eval(y);
  return A.Omega * p.rho - A.K * p.mu;
}

double MaterialProfile::arg_a(double y) const {
  const MaterialPoint p = eval(y);
  return std::atan2(p.mu, p.rho);
}

double MaterialProfile::arg_a_inf() const { return std::atan2(limit_.mu, limit_.rho); }

double MaterialProfile::limit_gamma_hat(double y) const {
  const MaterialPoint p = eval(y);
  return limit_.mu * (p.rho - limit_.rho) - limit_.rho * (p.mu - limit_.mu);
}

CoefficientField::CoefficientField(MaterialProfile profile, ParamPoint A,
                                   std::vector<double> sign_changes)
    : profile_(std::move(profile)),
      A_(A),
      gamma_inf_(A.Omega * profile_.rho_inf() - A.K * profile_.mu_inf()),
      sign_changes_(std::move(sign_changes)) {}

std::optional<double> CoefficientField::lambda() const {
  if (!(gamma_inf_ < 0.0)) return std::nullopt;
  return std::sqrt(-gamma_inf_ / profile_.mu_inf());
}

CoefficientField coefficient_field(const MaterialProfile& profile, const ParamPoint& A,
                                   const ScanOptions& scan) {
  if (!(A.K > 0.0 && A.Omega > 0.0))
    throw Error(ErrorKind::domain, "parameter point needs K > 0 and Omega > 0");
  std::vector<double> changes;
  const std::vector<double> grid = classification_grid(profile, scan);
  double prev = profile.gamma(A, grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double g = profile.gamma(A, grid[i]);
    if ((prev < 0.0) != (g < 0.0)) changes.push_back(grid[i]);
    prev = g;
  }
  return CoefficientField(profile, A, std::move(changes));
}

const char* to_string(TailMonotonicity m) noexcept {
  switch (m) {
    case TailMonotonicity::positive: return "positive";
    case TailMonotonicity::negative: return "negative";
    case TailMonotonicity::mixed: return "mixed";
  }
  return "mixed";
}

ProfileClass classify(const MaterialProfile& profile, const ScanOptions& scan) {
  const std::vector<double> grid = classification_grid(profile, scan);
  const double arg_inf = profile.arg_a_inf();
  const double tail_start = 0.5 * profile.y_max_data();
  ProfileClass out;
  out.global_negative = true;
  bool tail_below = false, tail_above = false;

  std::vector<MaterialPoint> pts;
  pts.reserve(grid.size());
  for (double y : grid) pts.push_back(profile.eval(y));

  std::size_t imin = 0;
  double lip = 0.0, coarse = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double diff = std::atan2(pts[i].mu, pts[i].rho) - arg_inf;
    if (diff < -scan.angle_tol) out.global_negative = false;
    if (grid[i] >= tail_start) {
      if (diff < -scan.angle_tol) tail_below = true;
      if (diff > scan.angle_tol) tail_above = true;
    }
    if (pts[i].mu / pts[i].rho < pts[imin].mu / pts[imin].rho) imin = i;
    if (i > 0) {
      const double h = grid[i] - grid[i - 1];
      const double slope = std::hypot(pts[i].rho - pts[i - 1].rho, pts[i].mu - pts[i - 1].mu) / h;
      lip = std::max(lip, slope);
      const double scale = std::min({pts[i].rho, pts[i].mu, pts[i - 1].rho, pts[i - 1].mu});
      coarse = std::max(coarse, slope * h / scale);
    }
  }
  out.lipschitz_estimate = lip;
  out.coarse_grid_warning = coarse > 0.1;
  if (tail_below && !tail_above)
    out.monotonicity_at_inf = TailMonotonicity::positive;
  else if (tail_above && !tail_below)
    out.monotonicity_at_inf = TailMonotonicity::negative;
  else
    out.monotonicity_at_inf = TailMonotonicity::mixed;

  auto ratio = [&](double y) {
    const MaterialPoint p = profile.eval(std::max(y, 0.0));
    return p.mu / p.rho;
  };
  const double a = imin > 0 ? grid[imin - 1] : grid[imin];
  const double b = imin + 1 < grid.size() ? grid[imin + 1] : grid[imin];
  double ycheck = grid[imin];
  double best = ratio(ycheck);
  if (b > a) {
    const double yr = golden_min(ratio, a, b);
    if (ratio(yr) < best) {
      ycheck = yr;
      best = ratio(yr);
    }
  }
  const double limit_ratio = profile.mu_inf() / profile.rho_inf();
  if (limit_ratio <= best) {
    out.min_mu_over_rho = limit_ratio;
    out.argmin_depth = kInf;
  } else {
    out.min_mu_over_rho = best;
    out.argmin_depth = ycheck;
  }
  return out;
}

OmegaInterval admissible_interval(const MaterialProfile& profile, const ProfileClass& cls,
                                  double K) {
  if (!(K > 0.0)) throw Error(ErrorKind::domain, "K must be positive");
  return {K * cls.min_mu_over_rho, K * profile.mu_inf() / profile.rho_inf()};
}

AssumptionReport check_assumptions(const MaterialProfile& profile, const quad::TailOptions& tail,
                                   std::size_t probe_points) {
  AssumptionReport r;
  const double span = std::max(2.0 * profile.y_max_data(), 1.0);
  const std::size_t n = std::max<std::size_t>(probe_points, 2);
  r.probe_points = n;
  MaterialPoint prev = profile.eval(0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double y0 = span * static_cast<double>(i - 1) / static_cast<double>(n - 1);
    const double y1 = span * static_cast<double>(i) / static_cast<double>(n - 1);
    const MaterialPoint p = profile.eval(y1);
    r.lipschitz_rho = std::max(r.lipschitz_rho, std::abs(p.rho - prev.rho) / (y1 - y0));
    r.lipschitz_mu = std::max(r.lipschitz_mu, std::abs(p.mu - prev.mu) / (y1 - y0));
    prev = p;
  }
  r.lipschitz_ok = std::isfinite(r.lipschitz_rho) && std::isfinite(r.lipschitz_mu);

  const double rho_inf = profile.rho_inf(), mu_inf = profile.mu_inf();
  auto deviation = [&](double y) {
    const MaterialPoint p = profile.eval(y);
    return std::hypot(p.rho - rho_inf, p.mu - mu_inf);
  };
  const quad::TailIntegral ti = quad::integrate_to_infinity(deviation, 0.0, tail);
  r.deviation_integral = ti.value;
  r.integrable = ti.verdict == quad::TailVerdict::converged;
  r.decay_ratio = ti.decay_ratio;
  r.windows = ti.windows;
  r.decay_factor = tail.decay_factor;
  r.check_depth = ti.windows.empty() ? 0.0 : ti.windows.back().end;
  return r;
}

}  // namespace shwave
