// Command-line front end. Everything goes through the C interface.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "jpsn/jpsn.h"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> seed, iterations, burnin, thin, holdout, model, chains;
  std::optional<std::string> data, out, params, draws, latents;
  std::vector<std::string> sets;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key = value file or a run manifest");
  sub->add_option("--seed", f.seed, "chain.seed");
  sub->add_option("--iterations", f.iterations, "chain.iterations");
  sub->add_option("--burnin", f.burnin, "chain.burnin");
  sub->add_option("--thin", f.thin, "chain.thin");
  sub->add_option("--holdout-fraction", f.holdout, "scoring.holdout_fraction");
  sub->add_option("--model", f.model, "jpsn | cyl-jpsn | abeley");
  sub->add_option("--chains", f.chains, "independent chains, one stream each");
  sub->add_option("--data", f.data, "input dataset CSV");
  sub->add_option("--out", f.out, "output file or prefix");
  sub->add_option("--params", f.params, "parameter JSON for simulate");
  sub->add_option("--draws", f.draws, "prefix of a previous fit");
  sub->add_option("--latents", f.latents, "latent output CSV for simulate");
  sub->add_option("--set", f.sets, "any configuration key as key=value");
}

int fail(jpsn_status st) {
  std::cerr << "error: " << jpsn_last_error() << '\n';
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint projected and skew normal models for circular-linear data"};
  app.set_version_flag("--version", std::string(jpsn_version()));
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"simulate", "simulate a dataset from parameters"},
      {"fit", "run the sampler and write posterior draws"},
      {"predict", "predict masked entries from stored draws"},
      {"score", "hold out entries and compare models by CRPS"},
      {"summarize", "posterior means, intervals, ESS and dependence"},
  };
  for (const auto& [name, desc] : commands) add_flags(app.add_subcommand(name, desc), flags);
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << jpsn_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return JPSN_E_USAGE;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  jpsn_config* cfg = nullptr;
  if (jpsn_status st = jpsn_config_new(&cfg); st != JPSN_OK) return fail(st);
  auto set = [&](const char* key, const std::optional<std::string>& v) -> jpsn_status {
    return v ? jpsn_config_set(cfg, key, v->c_str()) : JPSN_OK;
  };

  jpsn_status st = JPSN_OK;
  if (!flags.config.empty()) st = jpsn_config_load(cfg, flags.config.c_str());
  for (const auto& kv : flags.sets) {
    if (st != JPSN_OK) break;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      jpsn_config_free(cfg);
      return JPSN_E_USAGE;
    }
    st = jpsn_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
  }
  const std::vector<std::pair<const char*, const std::optional<std::string>*>> mapped = {
      {"chain.seed", &flags.seed},   {"chain.iterations", &flags.iterations},
      {"chain.burnin", &flags.burnin}, {"chain.thin", &flags.thin},
      {"scoring.holdout_fraction", &flags.holdout}, {"model.type", &flags.model},
      {"chain.chains", &flags.chains}, {"io.data", &flags.data},
      {"io.out", &flags.out},        {"io.params", &flags.params},
      {"io.draws", &flags.draws},    {"io.latents", &flags.latents},
  };
  for (const auto& [key, value] : mapped) {
    if (st != JPSN_OK) break;
    st = set(key, *value);
  }
  if (st == JPSN_OK) st = jpsn_run(sub.c_str(), cfg);
  jpsn_config_free(cfg);
  return st == JPSN_OK ? 0 : fail(st);
}
