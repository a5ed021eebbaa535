#ifndef JPSN_JPSN_H
#define JPSN_JPSN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum {
  JPSN_OK = 0,
  JPSN_E_USAGE = 1,
  JPSN_E_DATA = 2,
  JPSN_E_NUMERICAL = 3
} jpsn_status;

typedef struct jpsn_config jpsn_config;
typedef struct jpsn_dataset jpsn_dataset;
typedef struct jpsn_params jpsn_params;

/* Message of the last failure on this thread; empty after success. */
const char* jpsn_last_error(void);
const char* jpsn_version(void);

jpsn_status jpsn_config_new(jpsn_config** out);
void jpsn_config_free(jpsn_config* cfg);
jpsn_status jpsn_config_load(jpsn_config* cfg, const char* path);
jpsn_status jpsn_config_set(jpsn_config* cfg, const char* key, const char* value);
/* Copies the value into buf (truncated to len - 1 bytes); *needed gets the
   full length without the terminator. */
jpsn_status jpsn_config_get(const jpsn_config* cfg, const char* key, char* buf, size_t len, size_t* needed);

/* Runs simulate, fit, predict, score or summarize. Report text goes to stdout,
   notices to stderr. */
jpsn_status jpsn_run(const char* subcommand, const jpsn_config* cfg);

jpsn_status jpsn_dataset_read(const char* path, jpsn_dataset** out);
jpsn_status jpsn_dataset_write(const jpsn_dataset* data, const char* path);
void jpsn_dataset_free(jpsn_dataset* data);
jpsn_status jpsn_dataset_dims(const jpsn_dataset* data, size_t* p, size_t* q, size_t* t);

/* k in 1..3: the synthetic parameter sets for two angles and one linear. */
jpsn_status jpsn_params_example(int k, jpsn_params** out);
/* mu has 2p + q entries, sigma is row-major (2p + q)^2, lambda has q. */
jpsn_status jpsn_params_new(size_t p, size_t q, const double* mu, const double* sigma, const double* lambda,
                            jpsn_params** out);
void jpsn_params_free(jpsn_params* params);
jpsn_status jpsn_simulate(const jpsn_params* params, size_t t, uint64_t seed, jpsn_dataset** out);

jpsn_status jpsn_atan_star(double s, double c, double* out);
jpsn_status jpsn_pn1_log_density(double theta, const double mu[2], const double sigma[4], double* out);
jpsn_status jpsn_crps_linear(double truth, const double* draws, size_t n, double* out);
jpsn_status jpsn_crps_circular(double truth, const double* draws, size_t n, double* out);
jpsn_status jpsn_ess(const double* chain, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif
