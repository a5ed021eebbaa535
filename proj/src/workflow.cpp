#include "jpsn/workflow.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jpsn/dependence.hpp"
#include "jpsn/diagnostics.hpp"
#include "jpsn/errors.hpp"
#include "jpsn/io.hpp"
#include "jpsn/model.hpp"
#include "jpsn/scoring.hpp"

#ifndef JPSN_VERSION_HASH
#define JPSN_VERSION_HASH "unknown"
#endif

namespace jpsn {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kHoldoutStream = 1u << 20;

const std::string& require(const RunConfig& cfg, const std::string& key) {
  const std::string& v = cfg.get(key);
  if (v.empty()) throw DomainError(key + " must be set");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(s);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string fixed(double x, int width = 10, int prec = 4) {
  if (std::isnan(x)) return std::string(static_cast<std::size_t>(width - 2), ' ') + "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, prec, x);
  return buf;
}

DatasetRead load_data(const RunConfig& cfg, std::ostream& log) {
  DatasetRead dr = read_dataset_csv(require(cfg, "io.data"));
  if (dr.normalized > 0) log << "note: " << dr.normalized << " angle(s) reduced to [0, 2pi)\n";
  return dr;
}

json blocks_json(const std::vector<CylBlock>& blocks) {
  json arr = json::array();
  for (const auto& b : blocks) arr.push_back({{"circular", b.circular}, {"linear", b.linear}});
  return arr;
}

std::vector<CylBlock> blocks_from_json(const json& arr) {
  std::vector<CylBlock> out;
  for (const auto& b : arr)
    out.push_back({b.at("circular").get<std::vector<std::size_t>>(), b.at("linear").get<std::vector<std::size_t>>()});
  return out;
}

json read_sidecar(const std::string& prefix) {
  try {
    return json::parse(read_text_file(prefix + ".json"));
  } catch (const json::exception& e) {
    throw ParseError(prefix + ".json: " + e.what(), 0);
  }
}

std::string chain_prefix(const std::string& prefix, std::size_t k, std::size_t chains) {
  return chains > 1 ? prefix + ".chain" + std::to_string(k + 1) : prefix;
}

std::string block_prefix(const std::string& prefix, std::size_t b) { return prefix + ".block" + std::to_string(b + 1); }

std::vector<AbeLeyParams> abeley_from_sidecar_block(const std::string& prefix, std::size_t b) {
  return read_abeley_draws(block_prefix(prefix, b) + ".draws.csv");
}

/// Runs fn(k) for k < n, concurrently when n > 1, rethrowing the first error
/// in chain order.
template <class F>
void for_each_chain(std::size_t n, F&& fn) {
  if (n == 1) {
    fn(0);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < n; ++k)
    threads.emplace_back([&, k] {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void print_summary(std::ostream& out, const std::vector<ParamSummary>& rows) {
  out << "parameter            mean       2.5%      97.5%        ESS\n";
  for (const auto& r : rows) {
    char name[32];
    std::snprintf(name, sizeof(name), "%-14s", r.name.c_str());
    out << name << fixed(r.mean) << ' ' << fixed(r.lower) << ' ' << fixed(r.upper) << ' ' << fixed(r.ess, 10, 1)
        << '\n';
  }
}

std::string summary_csv_rows(const std::string& block, const std::vector<ParamSummary>& rows) {
  std::ostringstream out;
  for (const auto& r : rows)
    out << block << ",\"" << r.name << "\"," << format_double(r.mean) << ',' << format_double(r.lower) << ','
        << format_double(r.upper) << ',' << (std::isnan(r.ess) ? std::string("NA") : format_double(r.ess)) << '\n';
  return out.str();
}

std::vector<ParamSummary> summarize_table(const CsvTable& table) {
  std::vector<std::string> names(table.header.begin() + 1, table.header.end());
  std::vector<std::vector<double>> cols;
  for (const auto& n : names) cols.push_back(table.column(n));
  return summarize_columns(names, cols);
}

}  // namespace

const char* version_hash() { return JPSN_VERSION_HASH; }

PriorSpec prior_from_config(const RunConfig& cfg, std::size_t p, std::size_t q) {
  PriorSpec prior = PriorSpec::defaults(p, q);
  const auto d = static_cast<Eigen::Index>(2 * p + q);
  prior.niw.mu0 = Eigen::VectorXd::Constant(d, cfg.get_double("prior.mu0"));
  prior.niw.kappa0 = cfg.get_double("prior.kappa0");
  const std::string& nu = cfg.get("prior.nu0");
  if (nu != "auto") {
    try {
      std::size_t used = 0;
      prior.niw.nu0 = std::stod(nu, &used);
      if (used != nu.size()) throw std::invalid_argument(nu);
    } catch (const std::exception&) {
      throw DomainError("prior.nu0 must be 'auto' or a number");
    }
  }
  prior.niw.psi0 = cfg.get_double("prior.psi_scale") * Eigen::MatrixXd::Identity(d, d);
  const auto qi = static_cast<Eigen::Index>(q);
  prior.lambda_mean = Eigen::VectorXd::Constant(qi, cfg.get_double("prior.lambda_mean"));
  prior.lambda_cov = cfg.get_double("prior.lambda_var") * Eigen::MatrixXd::Identity(qi, qi);
  prior.validate(p, q);
  return prior;
}

ChainConfig chain_from_config(const RunConfig& cfg) {
  ChainConfig c;
  c.iterations = cfg.get_uint("chain.iterations");
  c.burnin = cfg.get_uint("chain.burnin");
  c.thin = cfg.get_uint("chain.thin");
  c.seed = cfg.get_uint("chain.seed");
  c.slice_steps = cfg.get_uint("chain.slice_steps");
  c.store_latents = cfg.get_bool("chain.store_latents");
  c.validate();
  return c;
}

MhConfig mh_from_config(const RunConfig& cfg) {
  MhConfig m;
  m.iterations = cfg.get_uint("chain.iterations");
  m.burnin = cfg.get_uint("chain.burnin");
  m.thin = cfg.get_uint("chain.thin");
  m.window = cfg.get_uint("mh.window");
  m.target_acceptance = cfg.get_double("mh.target_acceptance");
  m.scales.fill(cfg.get_double("mh.initial_scale"));
  m.validate();
  return m;
}

std::vector<CylBlock> parse_partition(const std::string& text, std::size_t p, std::size_t q) {
  if (text == "units") return unit_blocks(p, q);
  std::vector<CylBlock> blocks;
  auto indices = [](const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& tok : split(s, ',')) {
      if (tok.empty()) continue;
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || used == 0) throw DomainError("model.partition: bad index '" + tok + "'");
      out.push_back(v);
    }
    return out;
  };
  for (const auto& part : split(text, ';')) {
    const auto bar = part.find('|');
    if (bar == std::string::npos) throw DomainError("model.partition: block '" + part + "' lacks '|'");
    blocks.push_back({indices(part.substr(0, bar)), indices(part.substr(bar + 1))});
  }
  validate_partition(blocks, p, q);
  return blocks;
}

std::string manifest_json(const std::string& subcommand, const RunConfig& cfg,
                          const std::vector<std::string>& outputs) {
  json j;
  j["subcommand"] = subcommand;
  j["version"] = version_hash();
  j["seed"] = cfg.get_uint("chain.seed");
  json c = json::object();
  for (const auto& [k, v] : cfg.values()) c[k] = v;
  j["config"] = c;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::string& path = require(cfg, "io.out");
  const std::size_t T = cfg.get_uint("simulate.T");
  Rng rng(cfg.get_uint("chain.seed"), 0);
  std::vector<std::string> outputs{path};
  PolyCylDataset data;
  if (cfg.get("model.type") == "abeley") {
    const auto parts = split(cfg.get("simulate.abeley_params"), ',');
    if (parts.size() != 5) throw DomainError("simulate.abeley_params needs alpha,beta,mu,kappa,lambda");
    double v[5];
    for (std::size_t k = 0; k < 5; ++k) {
      try {
        v[k] = std::stod(parts[k]);
      } catch (const std::exception&) {
        throw DomainError("simulate.abeley_params: bad number '" + parts[k] + "'");
      }
    }
    data = simulate_abeley(AbeLeyParams(v[0], v[1], Angle(v[2]), v[3], v[4]), T, rng);
  } else {
    JpsnParams params;
    if (!cfg.get("io.params").empty()) {
      params = parse_params_json(read_text_file(cfg.get("io.params")));
    } else {
      params = synthetic_example(static_cast<int>(cfg.get_uint("simulate.example")));
    }
    Simulation sim = simulate_jpsn(params, T, rng);
    data = std::move(sim.data);
    if (!cfg.get("io.latents").empty()) {
      write_text_file(cfg.get("io.latents"), latent_state_csv(sim.latents));
      outputs.push_back(cfg.get("io.latents"));
    }
  }
  write_dataset_csv(path, data);
  write_text_file(path + ".manifest.json", manifest_json("simulate", cfg, outputs));
  out << "simulated " << data.size() << " observations (p=" << data.p() << ", q=" << data.q() << ") to " << path
      << '\n';
  (void)log;
}

void run_fit(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const DatasetRead dr = load_data(cfg, log);
  const PolyCylDataset& data = dr.data;
  const std::string& prefix = require(cfg, "io.out");
  const std::string model = cfg.get("model.type");
  const std::size_t chains = cfg.get_uint("chain.chains");
  if (chains < 1) throw DomainError("chain.chains must be at least 1");
  const std::size_t p = data.p(), q = data.q();
  std::vector<std::string> outputs;
  std::vector<std::string> lines(chains);

  json base;
  base["model"] = model;
  base["p"] = p;
  base["q"] = q;
  base["T"] = data.size();
  base["labels"] = data.labels();
  base["missing"] = data.missing_count();

  if (model == "jpsn") {
    const PriorSpec prior = prior_from_config(cfg, p, q);
    const ChainConfig base_cfg = chain_from_config(cfg);
    for_each_chain(chains, [&](std::size_t k) {
      ChainConfig c = base_cfg;
      c.stream = k;
      Rng rng(c.seed, c.stream);
      const PosteriorDraws draws = run_gibbs(data, prior, c, rng);
      const std::string pre = chain_prefix(prefix, k, chains);
      write_text_file(pre + ".raw.csv", raw_draws_csv(draws));
      write_text_file(pre + ".identified.csv", identified_draws_csv(draws));
      if (c.store_latents) write_text_file(pre + ".latents.csv", latents_csv(draws));
      if (!draws.missing.empty())
        write_text_file(pre + ".imputed.csv", predictions_csv(data, draws.missing, draws.imputed));
      json side = base;
      side["stream"] = k;
      side["draws"] = draws.size();
      write_text_file(pre + ".json", side.dump(2) + "\n");
      lines[k] = "chain " + std::to_string(k + 1) + ": " + std::to_string(draws.size()) + " draws to " + pre + ".*";
    });
  } else if (model == "cyl-jpsn") {
    const PriorSpec prior = prior_from_config(cfg, p, q);
    const ChainConfig base_cfg = chain_from_config(cfg);
    const auto blocks = parse_partition(cfg.get("model.partition"), p, q);
    for_each_chain(chains, [&](std::size_t k) {
      ChainConfig c = base_cfg;
      c.stream = k * blocks.size();
      const CylindricalFit fit = fit_cylindrical_jpsn(data, blocks, prior, c);
      const std::string pre = chain_prefix(prefix, k, chains);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::string bp = block_prefix(pre, b);
        write_text_file(bp + ".raw.csv", raw_draws_csv(fit.fits[b]));
        write_text_file(bp + ".identified.csv", identified_draws_csv(fit.fits[b]));
        if (c.store_latents) write_text_file(bp + ".latents.csv", latents_csv(fit.fits[b]));
      }
      json side = base;
      side["stream"] = c.stream;
      side["blocks"] = blocks_json(blocks);
      side["draws"] = fit.fits.front().size();
      write_text_file(pre + ".json", side.dump(2) + "\n");
      lines[k] = "chain " + std::to_string(k + 1) + ": " + std::to_string(blocks.size()) + " blocks to " + pre + ".*";
    });
  } else {
    const MhConfig mh = mh_from_config(cfg);
    const AbeLeyPrior prior{cfg.get_double("prior.abeley_shape"), cfg.get_double("prior.abeley_scale")};
    const auto blocks = parse_partition(cfg.get("model.partition"), p, q);
    const std::uint64_t seed = cfg.get_uint("chain.seed");
    for_each_chain(chains, [&](std::size_t k) {
      const std::string pre = chain_prefix(prefix, k, chains);
      json acc = json::array();
      std::size_t n = 0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        Rng rng(seed, k * blocks.size() + b);
        const AbeLeyDraws d = fit_abeley_mh(data.subset(blocks[b].circular, blocks[b].linear), prior, mh, rng);
        write_text_file(block_prefix(pre, b) + ".draws.csv", abeley_draws_csv(d));
        acc.push_back({{"acceptance", d.acceptance}, {"scales", d.scales}});
        n = d.size();
      }
      json side = base;
      side["blocks"] = blocks_json(blocks);
      side["draws"] = n;
      side["mh"] = acc;
      write_text_file(pre + ".json", side.dump(2) + "\n");
      lines[k] = "chain " + std::to_string(k + 1) + ": " + std::to_string(blocks.size()) + " blocks to " + pre + ".*";
    });
  }
  for (std::size_t k = 0; k < chains; ++k) outputs.push_back(chain_prefix(prefix, k, chains) + ".json");
  write_text_file(prefix + ".manifest.json", manifest_json("fit", cfg, outputs));
  for (const auto& l : lines) out << l << '\n';
}

void run_predict(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const DatasetRead dr = load_data(cfg, log);
  const PolyCylDataset& data = dr.data;
  const std::string& prefix = require(cfg, "io.draws");
  const std::string& path = require(cfg, "io.out");
  const json side = read_sidecar(prefix);
  const std::string model = side.at("model").get<std::string>();
  if (side.at("p").get<std::size_t>() != data.p() || side.at("q").get<std::size_t>() != data.q())
    throw DomainError("dataset shape does not match the fitted model");
  Rng rng(cfg.get_uint("chain.seed"), 0);
  const auto entries = missing_entries(data);
  std::vector<std::vector<double>> values;
  if (model == "jpsn") {
    const JpsnDrawSet ds = read_jpsn_draws(prefix + ".raw.csv", data.p(), data.q());
    values = predict_missing(data, ds.params, cfg.get_uint("predict.sweeps"), rng);
  } else {
    const auto blocks = blocks_from_json(side.at("blocks"));
    validate_partition(blocks, data.p(), data.q());
    std::vector<std::vector<std::vector<double>>> per_block;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const PolyCylDataset sub = data.subset(blocks[b].circular, blocks[b].linear);
      if (model == "cyl-jpsn") {
        const JpsnDrawSet ds = read_jpsn_draws(block_prefix(prefix, b) + ".raw.csv", sub.p(), sub.q());
        per_block.push_back(predict_missing(sub, ds.params, cfg.get_uint("predict.sweeps"), rng));
      } else {
        per_block.push_back(predict_abeley(sub, abeley_from_sidecar_block(prefix, b), rng));
      }
    }
    values = cylindrical_predictions(data, blocks, per_block);
  }
  write_text_file(path, predictions_csv(data, entries, values));
  write_text_file(path + ".manifest.json", manifest_json("predict", cfg, {path}));
  out << "predicted " << entries.size() << " masked entries with " << values.size() << " draws each to " << path
      << '\n';
}

void run_score(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const DatasetRead dr = load_data(cfg, log);
  const std::string& prefix = require(cfg, "io.out");
  const std::uint64_t seed = cfg.get_uint("chain.seed");
  Rng rng(seed, kHoldoutStream);
  const HoldoutSplit hold = holdout_split(dr.data, cfg.get_double("scoring.holdout_fraction"), rng);
  if (hold.plan.warning) log << "warning: " << *hold.plan.warning << '\n';

  const std::size_t p = dr.data.p(), q = dr.data.q();
  std::vector<ModelFitter> fitters;
  for (const auto& name : split(cfg.get("scoring.models"), ',')) {
    if (name == "jpsn") {
      fitters.push_back(make_jpsn_fitter(chain_from_config(cfg), prior_from_config(cfg, p, q)));
    } else if (name == "cyl-jpsn") {
      fitters.push_back(make_cyl_jpsn_fitter(chain_from_config(cfg), parse_partition(cfg.get("model.partition"), p, q),
                                             prior_from_config(cfg, p, q)));
    } else if (name == "abeley") {
      fitters.push_back(make_abeley_fitter(
          mh_from_config(cfg), seed,
          AbeLeyPrior{cfg.get_double("prior.abeley_shape"), cfg.get_double("prior.abeley_scale")},
          parse_partition(cfg.get("model.partition"), p, q)));
    } else {
      throw DomainError("scoring.models: unknown model '" + name + "'");
    }
  }
  const ScoreTable table = compare_models(hold, fitters, cfg.get_bool("scoring.concurrent"));

  std::ostringstream csv, entries;
  csv << "model,crps_circular,crps_linear,n_circular,n_linear\n";
  entries << "model,t,variable,truth,crps\n";
  json j = json::array();
  out << "model          CRPS_circular  CRPS_linear\n";
  for (const auto& row : table.rows) {
    auto num = [](double x) { return std::isnan(x) ? std::string("NA") : format_double(x); };
    csv << row.model << ',' << num(row.crps_circular) << ',' << num(row.crps_linear) << ',' << row.n_circular << ','
        << row.n_linear << '\n';
    for (const auto& e : row.entries) {
      const auto& label = dr.data.labels()[e.entry.circular ? e.entry.index : p + e.entry.index];
      entries << row.model << ',' << e.entry.t + 1 << ',' << label << ',' << format_double(e.entry.truth) << ','
              << format_double(e.crps) << '\n';
    }
    json r;
    r["model"] = row.model;
    r["crps_circular"] = std::isnan(row.crps_circular) ? json(nullptr) : json(row.crps_circular);
    r["crps_linear"] = std::isnan(row.crps_linear) ? json(nullptr) : json(row.crps_linear);
    r["n_circular"] = row.n_circular;
    r["n_linear"] = row.n_linear;
    j.push_back(r);
    char name[32];
    std::snprintf(name, sizeof(name), "%-12s", row.model.c_str());
    out << name << fixed(row.crps_circular, 15) << fixed(row.crps_linear, 13) << '\n';
  }
  write_text_file(prefix + ".scores.csv", csv.str());
  write_text_file(prefix + ".scores.json", j.dump(2) + "\n");
  write_text_file(prefix + ".entries.csv", entries.str());
  write_text_file(prefix + ".manifest.json",
                  manifest_json("score", cfg, {prefix + ".scores.csv", prefix + ".scores.json", prefix + ".entries.csv"}));
}

void run_summarize(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::string& prefix = require(cfg, "io.draws");
  const json side = read_sidecar(prefix);
  const std::string model = side.at("model").get<std::string>();
  const std::size_t p = side.at("p").get<std::size_t>();
  const std::size_t q = side.at("q").get<std::size_t>();
  const std::string& out_prefix = cfg.get("io.out");
  std::ostringstream summary_csv, dep_csv;
  summary_csv << "block,parameter,mean,lower,upper,ess\n";
  dep_csv << "block,row,col,mean,lower,upper,flagged\n";
  const std::size_t mc_n = cfg.get_uint("summarize.mc_n");
  const std::size_t dep_draws = cfg.get_uint("summarize.dependence_draws");

  auto jpsn_block = [&](const std::string& file_prefix, const std::string& block, std::size_t bp, std::size_t bq,
                        const std::vector<std::string>& labels) {
    const std::string path = file_prefix + ".identified.csv";
    const auto rows = summarize_table(read_numeric_csv(path));
    out << "== " << block << " (posterior mean, 95% CI, ESS)\n";
    print_summary(out, rows);
    summary_csv << summary_csv_rows(block, rows);
    if (mc_n == 0) return;
    const JpsnDrawSet ds = read_jpsn_draws(path, bp, bq);
    std::vector<JpsnParams> used;
    const std::size_t n = ds.params.size();
    const std::size_t take = dep_draws == 0 ? n : std::min(dep_draws, n);
    for (std::size_t k = 0; k < take; ++k) used.push_back(ds.params[k * n / take]);
    Rng rng(cfg.get_uint("chain.seed"), 0);
    const DependenceMatrix dm = dependence_matrix(used, mc_n, rng);
    out << "dependence matrix (mean [2.5%, 97.5%], * = flagged)\n";
    for (std::size_t a = 0; a < dm.size(); ++a) {
      char name[32];
      std::snprintf(name, sizeof(name), "%-12s", labels[a].c_str());
      out << name;
      for (std::size_t b = 0; b < dm.size(); ++b) {
        const auto& c = dm(a, b);
        char cell[96];
        std::snprintf(cell, sizeof(cell), " %7.3f [%6.3f,%6.3f]%s", c.mean, c.lower, c.upper, c.flagged ? "*" : " ");
        out << cell;
        dep_csv << block << ',' << labels[a] << ',' << labels[b] << ',' << format_double(c.mean) << ','
                << format_double(c.lower) << ',' << format_double(c.upper) << ',' << (c.flagged ? 1 : 0) << '\n';
      }
      out << '\n';
    }
  };

  const auto labels = side.at("labels").get<std::vector<std::string>>();
  if (model == "jpsn") {
    jpsn_block(prefix, "all", p, q, labels);
  } else {
    const auto blocks = blocks_from_json(side.at("blocks"));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      std::vector<std::string> bl;
      for (std::size_t i : blocks[b].circular) bl.push_back(labels[i]);
      for (std::size_t j : blocks[b].linear) bl.push_back(labels[p + j]);
      const std::string name = "block" + std::to_string(b + 1);
      if (model == "cyl-jpsn") {
        jpsn_block(block_prefix(prefix, b), name, blocks[b].circular.size(), blocks[b].linear.size(), bl);
      } else {
        const auto rows = summarize_table(read_numeric_csv(block_prefix(prefix, b) + ".draws.csv"));
        out << "== " << name << " Abe-Ley (posterior mean, 95% CI, ESS)\n";
        print_summary(out, rows);
        summary_csv << summary_csv_rows(name, rows);
      }
    }
  }
  if (!out_prefix.empty()) {
    write_text_file(out_prefix + ".summary.csv", summary_csv.str());
    std::vector<std::string> outputs{out_prefix + ".summary.csv"};
    if (model != "abeley" && mc_n > 0) {
      write_text_file(out_prefix + ".dependence.csv", dep_csv.str());
      outputs.push_back(out_prefix + ".dependence.csv");
    }
    write_text_file(out_prefix + ".manifest.json", manifest_json("summarize", cfg, outputs));
  }
  (void)log;
}

void run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (name == "simulate") return run_simulate(cfg, out, log);
  if (name == "fit") return run_fit(cfg, out, log);
  if (name == "predict") return run_predict(cfg, out, log);
  if (name == "score") return run_score(cfg, out, log);
  if (name == "summarize") return run_summarize(cfg, out, log);
  throw DomainError("unknown subcommand '" + name + "'");
}

}  // namespace jpsn
