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

// Depth-graded media: density rho(y) and shear modulus mu(y) on y >= 0 with
// finite positive limits at infinity, plus the classification of a medium
// against the existence criteria for trapped shear modes.

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shwave/quadrature.hpp"

namespace shwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MaterialPoint {
  double rho;
  double mu;
};

// K = k^2 (squared wavenumber), Omega = omega^2 (squared angular frequency).
struct ParamPoint {
  double K;
  double Omega;

  // Arg A = Arctan(Omega / K).
  double arg() const;
};

class ProfileModel {
 public:
  virtual ~ProfileModel() = default;
  virtual MaterialPoint at(double y) const = 0;
  virtual MaterialPoint limit() const = 0;
  // Largest depth carrying explicit structure. Sampled and layered media are
  // exactly (rho_inf, mu_inf) beyond it; analytic tails are negligible there.
  virtual double data_extent() const = 0;
  virtual bool exact_tail() const { return false; }
  // Length scale over which the coefficients vary; bounds integrator steps.
  virtual double feature_length() const { return kInf; }
  virtual std::string name() const = 0;
  virtual std::vector<std::pair<std::string, double>> parameters() const = 0;
};

struct Sample {
  double y;
  double rho;
  double mu;
};

class MaterialProfile {
 public:
  explicit MaterialProfile(std::shared_ptr<const ProfileModel> model);

  static MaterialProfile constant(double rho, double mu);
  // rho = rho_inf + delta_rho * exp(-y / d), mu constant.
  static MaterialProfile exp_density(double rho_inf, double delta_rho, double d, double mu = 1.0);
  // mu = mu_inf + delta_mu * exp(-y / d), rho constant.
  static MaterialProfile exp_modulus(double mu_inf, double delta_mu, double d, double rho = 1.0);
  // rho = rho_inf + c * (1 + y)^(-p), mu constant.
  static MaterialProfile power_density(double rho_inf, double c, double p, double mu = 1.0);
  // (rho_1, mu_1) near the surface blending with a C1 smoothstep over
  // [y_s - width, y_s] into the homogeneous substrate (rho_s, mu_s).
  static MaterialProfile smoothed_layer(double rho_1, double mu_1, double rho_s, double mu_s,
                                        double y_s, double width);
  // Monotone cubic (Fritsch-Carlson) interpolation of the samples; clamped
  // to the limits beyond the last sample. Limits must match the last sample.
  static MaterialProfile table(std::vector<Sample> samples, std::optional<double> rho_inf = {},
                               std::optional<double> mu_inf = {});
  static MaterialProfile custom(std::function<MaterialPoint(double)> f, MaterialPoint limit,
                                double data_extent, double feature_length = 1.0,
                                std::string name = "custom");

  MaterialPoint eval(double y) const;
  double gamma(const ParamPoint& A, double y) const;

  double rho_inf() const { return limit_.rho; }
  double mu_inf() const { return limit_.mu; }
  double y_max_data() const { return model_->data_extent(); }
  bool exact_tail() const { return model_->exact_tail(); }
  double feature_length() const { return model_->feature_length(); }
  const ProfileModel& model() const { return *model_; }

  // Arg a(y) = Arctan(mu(y) / rho(y)).
  double arg_a(double y) const;
  double arg_a_inf() const;
  // mu_inf * rho_hat(y) - rho_inf * mu_hat(y), the limit-ray coefficient.
  double limit_gamma_hat(double y) const;

 private:
  std::shared_ptr<const ProfileModel> model_;
  MaterialPoint limit_;
};

// gamma_A(y) = gamma_inf + beta(y).
class CoefficientField {
 public:
  CoefficientField(MaterialProfile profile, ParamPoint A, std::vector<double> sign_changes);

  double gamma(double y) const { return profile_.gamma(A_, y); }
  double beta(double y) const { return gamma(y) - gamma_inf_; }
  double gamma_inf() const { return gamma_inf_; }
  // Decay exponent sqrt(-gamma_inf / mu_inf) of the tail, defined when gamma_inf < 0.
  std::optional<double> lambda() const;
  // Depths (on the classification grid) where gamma_A changes sign.
  const std::vector<double>& sign_profile() const { return sign_changes_; }

 private:
  MaterialProfile profile_;
  ParamPoint A_;
  double gamma_inf_;
  std::vector<double> sign_changes_;
};

struct ScanOptions {
  std::size_t grid_points = 2048;
  double tail_window = 0.0;  // 0: max(10, y_max_data)
  double angle_tol = 1e-10;
};

CoefficientField coefficient_field(const MaterialProfile& profile, const ParamPoint& A,
                                   const ScanOptions& scan = {});

enum class TailMonotonicity { positive, negative, mixed };

const char* to_string(TailMonotonicity m) noexcept;

struct ProfileClass {
  TailMonotonicity monotonicity_at_inf = TailMonotonicity::mixed;
  bool global_negative = false;
  double min_mu_over_rho = 0.0;  // infimum of mu/rho over [0, inf)
  double argmin_depth = 0.0;     // +inf when the infimum is the limit value
  double lipschitz_estimate = 0.0;
  bool coarse_grid_warning = false;
};

ProfileClass classify(const MaterialProfile& profile, const ScanOptions& scan = {});

struct OmegaInterval {
  double lo;
  double hi;
  bool empty() const { return !(lo < hi); }
};

OmegaInterval admissible_interval(const MaterialProfile& profile, const ProfileClass& cls,
                                  double K);

struct AssumptionReport {
  double lipschitz_rho = 0.0;
  double lipschitz_mu = 0.0;
  bool lipschitz_ok = false;
  double deviation_integral = 0.0;  // estimate of the integral of |a_hat| over [0, inf)
  bool integrable = false;
  double decay_ratio = 0.0;
  double check_depth = 0.0;
  std::vector<quad::WindowRow> windows;
  double decay_factor = 2.0;
  std::size_t probe_points = 0;
};

AssumptionReport check_assumptions(const MaterialProfile& profile,
                                   const quad::TailOptions& tail = {},
                                   std::size_t probe_points = 8192);

}  // namespace shwave
