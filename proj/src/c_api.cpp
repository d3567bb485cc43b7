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

#include "shwave/shwave.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "shwave/app.hpp"
#include "shwave/dispersion.hpp"
#include "shwave/error.hpp"
#include "shwave/version.hpp"

struct shwave_profile {
  std::unique_ptr<shwave::PreparedProfile> prepared;
};

namespace {

thread_local std::string last_error;

shwave_status fail(shwave_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

shwave_status from_kind(shwave::ErrorKind k) {
  using shwave::ErrorKind;
  switch (k) {
    case ErrorKind::domain: return SHWAVE_E_DOMAIN;
    case ErrorKind::validation: return SHWAVE_E_VALIDATION;
    case ErrorKind::precondition: return SHWAVE_E_PRECONDITION;
    case ErrorKind::integration: return SHWAVE_E_INTEGRATION;
    case ErrorKind::no_negative_tail: return SHWAVE_E_NO_NEGATIVE_TAIL;
    case ErrorKind::convergence: return SHWAVE_E_CONVERGENCE;
    case ErrorKind::consistency: return SHWAVE_E_CONSISTENCY;
    case ErrorKind::oracle_unavailable: return SHWAVE_E_ORACLE_UNAVAILABLE;
    case ErrorKind::io: return SHWAVE_E_IO;
  }
  return SHWAVE_E_INTERNAL;
}

template <class Fn>
shwave_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const shwave::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SHWAVE_E_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SHWAVE_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHWAVE_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SHWAVE_E_INTERNAL, "unknown exception");
  }
}

shwave::SolverOptions solver_options(const shwave_solver_options* opt) {
  shwave::SolverOptions s;
  if (!opt) return s;
  s.coordinates = opt->coordinates == SHWAVE_TAU ? shwave::Coordinates::tau
                                                 : shwave::Coordinates::depth;
  s.integrator.rel_tol = opt->rel_tol;
  s.integrator.abs_tol = opt->abs_tol;
  s.max_modes = opt->max_modes;
  s.root_tol = opt->root_tol;
  s.residual_tol = opt->residual_tol;
  s.matching.tail_stretch = opt->tail_stretch;
  s.workers = opt->workers ? opt->workers : 1;
  return s;
}

shwave_status adopt(shwave::MaterialProfile profile, shwave_profile** out) {
  auto h = std::make_unique<shwave_profile>();
  h->prepared = std::make_unique<shwave::PreparedProfile>(std::move(profile));
  *out = h.release();
  return SHWAVE_OK;
}

#define SHWAVE_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SHWAVE_E_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* shwave_version(void) { return shwave::version_string(); }

const char* shwave_status_string(shwave_status s) {
  switch (s) {
    case SHWAVE_OK: return "ok";
    case SHWAVE_E_ARGUMENT: return "invalid argument";
    case SHWAVE_E_DOMAIN: return "domain error";
    case SHWAVE_E_VALIDATION: return "validation error";
    case SHWAVE_E_PRECONDITION: return "precondition violated";
    case SHWAVE_E_INTEGRATION: return "integration failure";
    case SHWAVE_E_NO_NEGATIVE_TAIL: return "no negative tail";
    case SHWAVE_E_CONVERGENCE: return "not converged";
    case SHWAVE_E_CONSISTENCY: return "consistency check failed";
    case SHWAVE_E_ORACLE_UNAVAILABLE: return "oracle unavailable";
    case SHWAVE_E_IO: return "i/o error";
    case SHWAVE_E_BUFFER_TOO_SMALL: return "buffer too small";
    case SHWAVE_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* shwave_last_error(void) { return last_error.c_str(); }

shwave_status shwave_profile_from_json(const char* json, const char* base_dir,
                                       shwave_profile** out) {
  SHWAVE_REQUIRE(json && out, "json and out must not be null");
  *out = nullptr;
  return guarded([&] {
    const auto spec = shwave::app::Json::parse(json);
    return adopt(shwave::app::make_profile(spec, base_dir ? base_dir : ""), out);
  });
}

shwave_status shwave_profile_from_table(const double* y, const double* rho, const double* mu,
                                        size_t n, shwave_profile** out) {
  SHWAVE_REQUIRE(y && rho && mu && out, "arrays and out must not be null");
  *out = nullptr;
  return guarded([&] {
    std::vector<shwave::Sample> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = {y[i], rho[i], mu[i]};
    return adopt(shwave::MaterialProfile::table(std::move(s)), out);
  });
}

void shwave_profile_destroy(shwave_profile* p) { delete p; }

shwave_status shwave_profile_eval(const shwave_profile* p, double y, double* rho, double* mu) {
  SHWAVE_REQUIRE(p && rho && mu, "null argument");
  return guarded([&] {
    const auto v = p->prepared->profile().eval(y);
    *rho = v.rho;
    *mu = v.mu;
    return SHWAVE_OK;
  });
}

shwave_status shwave_profile_limits(const shwave_profile* p, double* rho_inf, double* mu_inf) {
  SHWAVE_REQUIRE(p && rho_inf && mu_inf, "null argument");
  *rho_inf = p->prepared->profile().rho_inf();
  *mu_inf = p->prepared->profile().mu_inf();
  return SHWAVE_OK;
}

shwave_status shwave_profile_gamma(const shwave_profile* p, double K, double Omega, double y,
                                   double* gamma) {
  SHWAVE_REQUIRE(p && gamma, "null argument");
  return guarded([&] {
    *gamma = p->prepared->profile().gamma({K, Omega}, y);
    return SHWAVE_OK;
  });
}

shwave_status shwave_profile_classify(const shwave_profile* p, shwave_classification* out) {
  SHWAVE_REQUIRE(p && out, "null argument");
  const shwave::ProfileClass& c = p->prepared->classification();
  switch (c.monotonicity_at_inf) {
    case shwave::TailMonotonicity::positive: out->monotonicity_at_inf = SHWAVE_MONOTONE_POSITIVE; break;
    case shwave::TailMonotonicity::negative: out->monotonicity_at_inf = SHWAVE_MONOTONE_NEGATIVE; break;
    case shwave::TailMonotonicity::mixed: out->monotonicity_at_inf = SHWAVE_MONOTONE_MIXED; break;
  }
  out->global_negative = c.global_negative ? 1 : 0;
  out->min_mu_over_rho = c.min_mu_over_rho;
  out->argmin_depth = c.argmin_depth;
  out->coarse_grid_warning = c.coarse_grid_warning ? 1 : 0;
  return SHWAVE_OK;
}

shwave_status shwave_admissible_interval(const shwave_profile* p, double K, double* lo,
                                         double* hi) {
  SHWAVE_REQUIRE(p && lo && hi, "null argument");
  return guarded([&] {
    const auto iv = p->prepared->interval(K);
    *lo = iv.lo;
    *hi = iv.hi;
    return SHWAVE_OK;
  });
}

void shwave_solver_options_init(shwave_solver_options* opt) {
  if (!opt) return;
  const shwave::SolverOptions d;
  opt->coordinates = SHWAVE_DEPTH;
  opt->rel_tol = d.integrator.rel_tol;
  opt->abs_tol = d.integrator.abs_tol;
  opt->max_modes = d.max_modes;
  opt->root_tol = d.root_tol;
  opt->residual_tol = d.residual_tol;
  opt->tail_stretch = d.matching.tail_stretch;
  opt->workers = 1;
}

shwave_status shwave_find_modes(const shwave_profile* p, double K,
                                const shwave_solver_options* opt, shwave_mode* modes,
                                size_t capacity, size_t* count, int* flags) {
  SHWAVE_REQUIRE(p && count, "null argument");
  SHWAVE_REQUIRE(modes || capacity == 0, "modes is null but capacity is positive");
  return guarded([&] {
    const auto s = shwave::find_modes(*p->prepared, K, solver_options(opt));
    *count = s.modes.size();
    if (flags)
      *flags = (s.truncated ? SHWAVE_TRUNCATED : 0) | (s.nonexistence ? SHWAVE_NONEXISTENCE : 0);
    for (size_t i = 0; i < s.modes.size() && i < capacity; ++i) {
      const auto& m = s.modes[i];
      modes[i] = {m.K, m.Omega, m.m, m.phi_surface, m.phi_decay, m.residual, m.y_bar, m.y_tail,
                  m.flagged ? 1 : 0};
    }
    if (s.modes.size() > capacity)
      return fail(SHWAVE_E_BUFFER_TOO_SMALL, "found " + std::to_string(s.modes.size()) +
                                                 " modes, buffer holds " + std::to_string(capacity));
    return SHWAVE_OK;
  });
}

shwave_status shwave_mismatch(const shwave_profile* p, double K, double Omega,
                              const shwave_solver_options* opt, double* phi) {
  SHWAVE_REQUIRE(p && phi, "null argument");
  return guarded([&] {
    *phi = shwave::mismatch(*p->prepared, K, Omega, solver_options(opt));
    return SHWAVE_OK;
  });
}

shwave_status shwave_estimate_mode_count(const shwave_profile* p, double K, double* estimate,
                                         int* finite) {
  SHWAVE_REQUIRE(p && estimate, "null argument");
  return guarded([&] {
    const auto e = shwave::estimate_mode_count(p->prepared->profile(), K);
    *estimate = e.value;
    if (finite) *finite = e.finite ? 1 : 0;
    return SHWAVE_OK;
  });
}

shwave_status shwave_oscillation_test(const shwave_profile* p, double y_max,
                                      shwave_oscillation* verdict) {
  SHWAVE_REQUIRE(p && verdict, "null argument");
  return guarded([&] {
    const auto r = shwave::oscillation_test(p->prepared->profile(), y_max);
    switch (r.verdict) {
      case shwave::OscillationVerdict::oscillatory: *verdict = SHWAVE_OSCILLATORY; break;
      case shwave::OscillationVerdict::non_oscillatory: *verdict = SHWAVE_NON_OSCILLATORY; break;
      case shwave::OscillationVerdict::inconclusive: *verdict = SHWAVE_INCONCLUSIVE; break;
    }
    return SHWAVE_OK;
  });
}

shwave_status shwave_run(const shwave_run_options* opt, int* exit_code) {
  SHWAVE_REQUIRE(opt && opt->config_path && exit_code, "config_path and exit_code are required");
  return guarded([&] {
    shwave::app::Request req;
    req.config = opt->config_path;
    if (opt->output_dir) req.output_dir = opt->output_dir;
    if (opt->fixtures_dir) req.fixtures = opt->fixtures_dir;
    if (opt->workers) req.workers = opt->workers;
    req.plot = opt->plot != 0;
    const auto out = shwave::app::run(req);
    *exit_code = out.exit_code;
    std::string summary = out.summary;
    for (const auto& f : out.files) summary += "\nwrote " + f.string();
    if (opt->summary && opt->summary_capacity > 0) {
      const size_t n = std::min(summary.size(), opt->summary_capacity - 1);
      std::memcpy(opt->summary, summary.data(), n);
      opt->summary[n] = '\0';
    }
    if (out.exit_code == 1 || out.exit_code == 2) last_error = out.summary;
    return SHWAVE_OK;
  });
}

}  // extern "C"
