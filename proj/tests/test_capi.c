/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "jpsn/jpsn.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

#define NEAR(a, b, tol) EXPECT(fabs((a) - (b)) <= (tol))

static const double kPi = 3.14159265358979323846;

static void config_roundtrip(void) {
  jpsn_config* cfg = NULL;
  EXPECT(jpsn_config_new(&cfg) == JPSN_OK);
  EXPECT(jpsn_config_set(cfg, "chain.seed", "42") == JPSN_OK);
  EXPECT(strcmp(jpsn_last_error(), "") == 0);

  char buf[64];
  size_t needed = 0;
  EXPECT(jpsn_config_get(cfg, "chain.seed", buf, sizeof buf, &needed) == JPSN_OK);
  EXPECT(strcmp(buf, "42") == 0);
  EXPECT(needed == 2);

  /* Truncation still reports the full length. */
  char tiny[3];
  EXPECT(jpsn_config_get(cfg, "model.type", tiny, sizeof tiny, &needed) == JPSN_OK);
  EXPECT(needed == 4);
  EXPECT(strcmp(tiny, "jp") == 0);

  EXPECT(jpsn_config_set(cfg, "no.such.key", "1") == JPSN_E_USAGE);
  EXPECT(strstr(jpsn_last_error(), "no.such.key") != NULL);
  EXPECT(jpsn_config_set(cfg, "chain.thin", "-3") == JPSN_E_USAGE);
  EXPECT(jpsn_config_load(cfg, "/nonexistent/path.cfg") == JPSN_E_DATA);
  EXPECT(jpsn_run("bogus", cfg) == JPSN_E_USAGE);
  jpsn_config_free(cfg);

  EXPECT(jpsn_config_new(NULL) == JPSN_E_USAGE);
  jpsn_config_free(NULL);
}

static void simulate_and_write(void) {
  jpsn_params* params = NULL;
  EXPECT(jpsn_params_example(1, &params) == JPSN_OK);
  EXPECT(jpsn_params_example(7, &params) == JPSN_E_USAGE);

  jpsn_dataset *a = NULL, *b = NULL;
  EXPECT(jpsn_simulate(params, 50, 9, &a) == JPSN_OK);
  EXPECT(jpsn_simulate(params, 50, 9, &b) == JPSN_OK);
  size_t p = 0, q = 0, t = 0;
  EXPECT(jpsn_dataset_dims(a, &p, &q, &t) == JPSN_OK);
  EXPECT(p == 2 && q == 1 && t == 50);

  char path_a[64], path_b[64];
  snprintf(path_a, sizeof path_a, "capi_a_%d.csv", rand());
  snprintf(path_b, sizeof path_b, "capi_b_%d.csv", rand());
  EXPECT(jpsn_dataset_write(a, path_a) == JPSN_OK);
  EXPECT(jpsn_dataset_write(b, path_b) == JPSN_OK);

  FILE* fa = fopen(path_a, "rb");
  FILE* fb = fopen(path_b, "rb");
  EXPECT(fa && fb);
  if (fa && fb) {
    int ca, cb, same = 1;
    do {
      ca = fgetc(fa);
      cb = fgetc(fb);
      if (ca != cb) same = 0;
    } while (ca != EOF && cb != EOF);
    EXPECT(same);
  }
  if (fa) fclose(fa);
  if (fb) fclose(fb);

  jpsn_dataset* back = NULL;
  EXPECT(jpsn_dataset_read(path_a, &back) == JPSN_OK);
  EXPECT(jpsn_dataset_dims(back, &p, &q, &t) == JPSN_OK);
  EXPECT(p == 2 && q == 1 && t == 50);
  EXPECT(jpsn_dataset_read("/nonexistent.csv", &back) == JPSN_E_DATA);

  remove(path_a);
  remove(path_b);
  jpsn_dataset_free(a);
  jpsn_dataset_free(b);
  jpsn_dataset_free(back);
  jpsn_params_free(params);
}

static void params_from_arrays(void) {
  const double mu[3] = {1.0, 0.5, -2.0};
  const double sigma[9] = {1.0, 0.2, 0.1, 0.2, 1.0, 0.0, 0.1, 0.0, 2.0};
  const double lambda[1] = {0.5};
  jpsn_params* params = NULL;
  EXPECT(jpsn_params_new(1, 1, mu, sigma, lambda, &params) == JPSN_OK);
  jpsn_dataset* d = NULL;
  EXPECT(jpsn_simulate(params, 10, 1, &d) == JPSN_OK);
  jpsn_dataset_free(d);
  jpsn_params_free(params);

  const double skew[9] = {1.0, 0.9, 0.1, 0.2, 1.0, 0.0, 0.1, 0.0, 2.0};
  EXPECT(jpsn_params_new(1, 1, mu, skew, lambda, &params) == JPSN_E_USAGE);

  const double bad[9] = {-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  EXPECT(jpsn_params_new(1, 1, mu, bad, lambda, &params) == JPSN_OK);
  EXPECT(jpsn_simulate(params, 10, 1, &d) == JPSN_E_NUMERICAL);
  jpsn_params_free(params);
}

static void scalar_functions(void) {
  double v = 0.0;
  EXPECT(jpsn_atan_star(1.0, 0.0, &v) == JPSN_OK);
  NEAR(v, kPi / 2, 1e-15);
  EXPECT(jpsn_atan_star(-1.0, 0.0, &v) == JPSN_OK);
  NEAR(v, 3 * kPi / 2, 1e-15);
  EXPECT(jpsn_atan_star(0.0, 0.0, &v) == JPSN_E_USAGE);

  const double mu[2] = {0.0, 0.0};
  const double eye[4] = {1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < 8; ++k) {
    EXPECT(jpsn_pn1_log_density(0.7 * k, mu, eye, &v) == JPSN_OK);
    NEAR(exp(v), 1.0 / (2.0 * kPi), 1e-12);
  }

  const double two[2] = {0.0, 2.0};
  EXPECT(jpsn_crps_linear(1.0, two, 2, &v) == JPSN_OK);
  NEAR(v, 0.5, 1e-12);
  const double at[3] = {1.5, 1.5, 1.5};
  EXPECT(jpsn_crps_linear(1.5, at, 3, &v) == JPSN_OK);
  NEAR(v, 0.0, 1e-12);
  EXPECT(jpsn_crps_linear(0.0, at, 3, &v) == JPSN_OK);
  NEAR(v, 1.5, 1e-12);
  EXPECT(jpsn_crps_linear(0.0, at, 0, &v) == JPSN_E_USAGE);

  const double ang[2] = {0.1, 0.1};
  EXPECT(jpsn_crps_circular(0.1, ang, 2, &v) == JPSN_OK);
  NEAR(v, 0.0, 1e-12);
  EXPECT(jpsn_crps_circular(0.1 + kPi, ang, 2, &v) == JPSN_OK);
  NEAR(v, kPi, 1e-12);

  /* Independent draws: ESS close to the length. */
  double chain[4000];
  unsigned long long s = 88172645463325252ULL;
  for (int i = 0; i < 4000; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    chain[i] = (double)(s >> 11) / 9007199254740992.0;
  }
  EXPECT(jpsn_ess(chain, 4000, &v) == JPSN_OK);
  EXPECT(v > 3000 && v < 5000);
  EXPECT(jpsn_ess(chain, 3, &v) == JPSN_E_USAGE);
}

int main(void) {
  EXPECT(strlen(jpsn_version()) > 0);
  config_roundtrip();
  simulate_and_write();
  params_from_arrays();
  scalar_functions();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("all C interface checks passed\n");
  return 0;
}
