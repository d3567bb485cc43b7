/* Copyright 2026 The shwave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Plain C client of libshwave. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "shwave/shwave.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static void test_profile_basics(void) {
  shwave_profile* p = NULL;
  double rho = 0, mu = 0, g = 0, lo = 0, hi = 0;
  shwave_classification cls;
  EXPECT(shwave_profile_from_json("{\"type\": \"exp_density\", \"rho_inf\": 1, \"delta_rho\": 5, \"d\": 1}",
                                  NULL, &p) == SHWAVE_OK);
  EXPECT(p != NULL);
  EXPECT(shwave_profile_eval(p, 0.0, &rho, &mu) == SHWAVE_OK);
  EXPECT(fabs(rho - 6.0) < 1e-14 && mu == 1.0);
  EXPECT(shwave_profile_gamma(p, 1.0, 0.5, 0.0, &g) == SHWAVE_OK);
  EXPECT(fabs(g - 2.0) < 1e-14);
  EXPECT(shwave_profile_classify(p, &cls) == SHWAVE_OK);
  EXPECT(!cls.global_negative);
  EXPECT(cls.monotonicity_at_inf == SHWAVE_MONOTONE_POSITIVE);
  EXPECT(shwave_admissible_interval(p, 1.0, &lo, &hi) == SHWAVE_OK);
  EXPECT(fabs(lo - 1.0 / 6.0) < 1e-12 && hi == 1.0);
  EXPECT(shwave_profile_eval(p, -1.0, &rho, &mu) == SHWAVE_E_DOMAIN);
  EXPECT(strlen(shwave_last_error()) > 0);
  shwave_profile_destroy(p);
}

static void test_find_modes(void) {
  shwave_profile* p = NULL;
  shwave_mode modes[8];
  size_t count = 0;
  int flags = -1;
  double est = 0;
  int finite = 0;
  shwave_solver_options opt;
  EXPECT(shwave_profile_from_json("{\"type\": \"exp_density\", \"rho_inf\": 1, \"delta_rho\": 5, \"d\": 1}",
                                  NULL, &p) == SHWAVE_OK);
  shwave_solver_options_init(&opt);
  EXPECT(shwave_find_modes(p, 16.0, &opt, modes, 8, &count, &flags) == SHWAVE_OK);
  EXPECT(count == 6);
  EXPECT(flags == 0);
  EXPECT(fabs(modes[0].Omega - 3.693750356174291) < 1e-6 * 3.7);
  EXPECT(modes[5].m == 6);
  EXPECT(shwave_find_modes(p, 16.0, NULL, modes, 2, &count, NULL) == SHWAVE_E_BUFFER_TOO_SMALL);
  EXPECT(count == 6);
  EXPECT(shwave_estimate_mode_count(p, 1600.0, &est, &finite) == SHWAVE_OK);
  EXPECT(finite == 1 && fabs(est - 2.0 * sqrt(8000.0) / M_PI) < 1e-6);
  shwave_profile_destroy(p);
}

static void test_nonexistence_and_table(void) {
  const double y[] = {0.0, 1.0}, rho[] = {2.0, 1.0}, mu[] = {1.0, 1.0};
  const double bad_y[] = {0.0, 0.0};
  shwave_profile* p = NULL;
  size_t count = 99;
  int flags = 0;
  shwave_oscillation v;
  EXPECT(shwave_profile_from_json("{\"type\": \"constant\", \"rho\": 1, \"mu\": 1}", NULL, &p) == SHWAVE_OK);
  EXPECT(shwave_find_modes(p, 4.0, NULL, NULL, 0, &count, &flags) == SHWAVE_OK);
  EXPECT(count == 0 && (flags & SHWAVE_NONEXISTENCE));
  shwave_profile_destroy(p);

  EXPECT(shwave_profile_from_table(y, rho, mu, 2, &p) == SHWAVE_OK);
  EXPECT(shwave_find_modes(p, 16.0, NULL, NULL, 0, &count, NULL) == SHWAVE_E_BUFFER_TOO_SMALL || count == 0);
  EXPECT(count >= 1);
  EXPECT(shwave_oscillation_test(p, 1e6, &v) == SHWAVE_OK);
  EXPECT(v == SHWAVE_NON_OSCILLATORY);
  shwave_profile_destroy(p);

  p = NULL;
  EXPECT(shwave_profile_from_table(bad_y, rho, mu, 2, &p) == SHWAVE_E_VALIDATION);
  EXPECT(p == NULL);
  EXPECT(strstr(shwave_last_error(), "sample 2") != NULL);
  EXPECT(shwave_profile_from_json("{\"type\": \"nope\"}", NULL, &p) == SHWAVE_E_VALIDATION);
  EXPECT(shwave_profile_from_json("not json", NULL, &p) == SHWAVE_E_VALIDATION);
  EXPECT(shwave_profile_eval(NULL, 0.0, NULL, NULL) == SHWAVE_E_ARGUMENT);
}

static void test_run(void) {
  shwave_run_options opt;
  int code = -1;
  memset(&opt, 0, sizeof opt);
  opt.config_path = "/nonexistent/shwave.json";
  EXPECT(shwave_run(&opt, &code) == SHWAVE_OK);
  EXPECT(code == 1);
  EXPECT(shwave_run(NULL, &code) == SHWAVE_E_ARGUMENT);
}

int main(void) {
  EXPECT(strcmp(shwave_version(), "0.1.0") == 0);
  EXPECT(strcmp(shwave_status_string(SHWAVE_E_BUFFER_TOO_SMALL), "buffer too small") == 0);
  test_profile_basics();
  test_find_modes();
  test_nonexistence_and_table();
  test_run();
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
