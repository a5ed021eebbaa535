#include "jpsn/jpsn.h"

#include <cstring>
#include <iostream>
#include <new>
#include <span>
#include <string>

#include "jpsn/config.hpp"
#include "jpsn/diagnostics.hpp"
#include "jpsn/dists.hpp"
#include "jpsn/errors.hpp"
#include "jpsn/io.hpp"
#include "jpsn/model.hpp"
#include "jpsn/scoring.hpp"
#include "jpsn/workflow.hpp"

struct jpsn_config {
  jpsn::RunConfig cfg;
};

struct jpsn_dataset {
  jpsn::PolyCylDataset data;
};

struct jpsn_params {
  jpsn::JpsnParams params;
};

namespace {

thread_local std::string g_last_error;

template <class F>
jpsn_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return JPSN_OK;
  } catch (const jpsn::DomainError& e) {
    g_last_error = e.what();
    return JPSN_E_USAGE;
  } catch (const jpsn::NumericalError& e) {
    g_last_error = e.what();
    return JPSN_E_NUMERICAL;
  } catch (const jpsn::InitializationError& e) {
    g_last_error = e.what();
    return JPSN_E_NUMERICAL;
  } catch (const jpsn::Error& e) {
    // Parse, I/O and insufficient-data failures.
    g_last_error = e.what();
    return JPSN_E_DATA;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return JPSN_E_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return JPSN_E_DATA;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw jpsn::DomainError(std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* jpsn_last_error(void) { return g_last_error.c_str(); }

const char* jpsn_version(void) { return jpsn::version_hash(); }

jpsn_status jpsn_config_new(jpsn_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new jpsn_config{};
  });
}

void jpsn_config_free(jpsn_config* cfg) { delete cfg; }

jpsn_status jpsn_config_load(jpsn_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "config");
    need(path, "path");
    cfg->cfg.load_file(path);
  });
}

jpsn_status jpsn_config_set(jpsn_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cfg->cfg.set(key, value);
  });
}

jpsn_status jpsn_config_get(const jpsn_config* cfg, const char* key, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    const std::string& v = cfg->cfg.get(key);
    if (needed) *needed = v.size();
    if (buf && len > 0) {
      const size_t n = std::min(len - 1, v.size());
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
    }
  });
}

jpsn_status jpsn_run(const char* subcommand, const jpsn_config* cfg) {
  return guarded([&] {
    need(subcommand, "subcommand");
    need(cfg, "config");
    jpsn::run_subcommand(subcommand, cfg->cfg, std::cout, std::cerr);
    std::cout.flush();
  });
}

jpsn_status jpsn_dataset_read(const char* path, jpsn_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new jpsn_dataset{jpsn::read_dataset_csv(path).data};
  });
}

jpsn_status jpsn_dataset_write(const jpsn_dataset* data, const char* path) {
  return guarded([&] {
    need(data, "dataset");
    need(path, "path");
    jpsn::write_dataset_csv(path, data->data);
  });
}

void jpsn_dataset_free(jpsn_dataset* data) { delete data; }

jpsn_status jpsn_dataset_dims(const jpsn_dataset* data, size_t* p, size_t* q, size_t* t) {
  return guarded([&] {
    need(data, "dataset");
    if (p) *p = data->data.p();
    if (q) *q = data->data.q();
    if (t) *t = data->data.size();
  });
}

jpsn_status jpsn_params_example(int k, jpsn_params** out) {
  return guarded([&] {
    need(out, "out");
    *out = new jpsn_params{jpsn::synthetic_example(k)};
  });
}

jpsn_status jpsn_params_new(size_t p, size_t q, const double* mu, const double* sigma, const double* lambda,
                            jpsn_params** out) {
  return guarded([&] {
    need(out, "out");
    need(mu, "mu");
    need(sigma, "sigma");
    if (q > 0) need(lambda, "lambda");
    const auto d = static_cast<Eigen::Index>(2 * p + q);
    Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mu, d);
    Eigen::MatrixXd s = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(sigma, d, d);
    Eigen::VectorXd l = q > 0 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(lambda, static_cast<Eigen::Index>(q)))
                              : Eigen::VectorXd();
    *out = new jpsn_params{jpsn::JpsnParams(p, q, m, s, l)};
  });
}

void jpsn_params_free(jpsn_params* params) { delete params; }

jpsn_status jpsn_simulate(const jpsn_params* params, size_t t, uint64_t seed, jpsn_dataset** out) {
  return guarded([&] {
    need(params, "params");
    need(out, "out");
    jpsn::Rng rng(seed, 0);
    *out = new jpsn_dataset{jpsn::simulate_jpsn(params->params, t, rng).data};
  });
}

jpsn_status jpsn_atan_star(double s, double c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = jpsn::atan_star(s, c).value();
  });
}

jpsn_status jpsn_pn1_log_density(double theta, const double mu[2], const double sigma[4], double* out) {
  return guarded([&] {
    need(mu, "mu");
    need(sigma, "sigma");
    need(out, "out");
    Eigen::Matrix2d s;
    s << sigma[0], sigma[1], sigma[2], sigma[3];
    *out = jpsn::pn1_log_density(jpsn::Angle(theta), Eigen::Vector2d(mu[0], mu[1]), s);
  });
}

jpsn_status jpsn_crps_linear(double truth, const double* draws, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(draws, "draws");
    *out = jpsn::crps_linear(truth, std::span<const double>(draws, n));
  });
}

jpsn_status jpsn_crps_circular(double truth, const double* draws, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(draws, "draws");
    *out = jpsn::crps_circular(jpsn::Angle(truth), std::span<const double>(draws, n));
  });
}

jpsn_status jpsn_ess(const double* chain, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(chain, "chain");
    *out = jpsn::ess(std::span<const double>(chain, n));
  });
}

}  // extern "C"
