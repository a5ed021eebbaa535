#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "jpsn/baselines.hpp"
#include "jpsn/config.hpp"
#include "jpsn/mcmc.hpp"

namespace jpsn {

const char* version_hash();

PriorSpec prior_from_config(const RunConfig& cfg, std::size_t p, std::size_t q);
ChainConfig chain_from_config(const RunConfig& cfg);
MhConfig mh_from_config(const RunConfig& cfg);

/// `units`, or blocks separated by ';', each `circ|lin` with comma-separated
/// 0-based indices, e.g. `0|0;1,2|1`.
std::vector<CylBlock> parse_partition(const std::string& text, std::size_t p, std::size_t q);

/// Resolved configuration, seed and version as JSON text. No timestamps.
std::string manifest_json(const std::string& subcommand, const RunConfig& cfg,
                          const std::vector<std::string>& outputs);

/// Subcommands. Results go to `out`, notices to `log`. io.out names a file
/// for simulate and predict and a path prefix for fit, score and summarize.
void run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void run_fit(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void run_predict(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void run_score(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void run_summarize(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Throws DomainError for an unknown name.
void run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace jpsn
