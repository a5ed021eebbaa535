#include "jpsn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jpsn/errors.hpp"
#include "jpsn/io.hpp"

namespace jpsn {

namespace {

enum class Kind { Text, Count, Seed, Real, Flag, Choice };

struct KeySpec {
  const char* key;
  Kind kind;
  const char* fallback;
  std::vector<std::string> choices = {};
};

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> table = {
      {"model.type", Kind::Choice, "jpsn", {"jpsn", "cyl-jpsn", "abeley"}},
      {"model.partition", Kind::Text, "units"},
      {"prior.mu0", Kind::Real, "0"},
      {"prior.kappa0", Kind::Real, "0.001"},
      {"prior.nu0", Kind::Text, "auto"},
      {"prior.psi_scale", Kind::Real, "1"},
      {"prior.lambda_mean", Kind::Real, "0"},
      {"prior.lambda_var", Kind::Real, "100"},
      {"prior.abeley_shape", Kind::Real, "1"},
      {"prior.abeley_scale", Kind::Real, "1"},
      {"chain.iterations", Kind::Count, "12000"},
      {"chain.burnin", Kind::Count, "8000"},
      {"chain.thin", Kind::Count, "2"},
      {"chain.seed", Kind::Seed, "1"},
      {"chain.chains", Kind::Count, "1"},
      {"chain.slice_steps", Kind::Count, "1"},
      {"chain.store_latents", Kind::Flag, "false"},
      {"mh.target_acceptance", Kind::Real, "0.3"},
      {"mh.window", Kind::Count, "50"},
      {"mh.initial_scale", Kind::Real, "0.1"},
      {"scoring.holdout_fraction", Kind::Real, "0.1"},
      {"scoring.models", Kind::Text, "jpsn,cyl-jpsn,abeley"},
      {"scoring.concurrent", Kind::Flag, "false"},
      {"simulate.T", Kind::Count, "1000"},
      {"simulate.example", Kind::Count, "1"},
      {"simulate.abeley_params", Kind::Text, "2,1,3.141592653589793,1,0.3"},
      {"predict.sweeps", Kind::Count, "5"},
      {"summarize.mc_n", Kind::Count, "4096"},
      {"summarize.dependence_draws", Kind::Count, "0"},
      {"io.data", Kind::Text, ""},
      {"io.out", Kind::Text, ""},
      {"io.params", Kind::Text, ""},
      {"io.draws", Kind::Text, ""},
      {"io.latents", Kind::Text, ""},
  };
  return table;
}

const KeySpec& spec_for(const std::string& key) {
  for (const auto& s : specs())
    if (key == s.key) return s;
  throw DomainError("unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_whole(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string normalize(const KeySpec& spec, const std::string& raw) {
  const std::string v = trim(raw);
  const std::string key = spec.key;
  switch (spec.kind) {
    case Kind::Text:
      return v;
    case Kind::Count:
    case Kind::Seed: {
      std::uint64_t n = 0;
      if (!parse_whole(v, n)) throw DomainError(key + ": expected a non-negative integer, got '" + v + "'");
      return std::to_string(n);
    }
    case Kind::Real: {
      double x = 0.0;
      if (!parse_whole(v, x) || !std::isfinite(x)) throw DomainError(key + ": expected a number, got '" + v + "'");
      return format_double(x);
    }
    case Kind::Flag:
      if (v == "true" || v == "1" || v == "yes") return "true";
      if (v == "false" || v == "0" || v == "no") return "false";
      throw DomainError(key + ": expected true or false, got '" + v + "'");
    case Kind::Choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end())
        throw DomainError(key + ": unsupported value '" + v + "'");
      return v;
  }
  return v;
}

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw DomainError("configuration key '" + key + "' must hold a scalar");
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& s : specs()) values_[s.key] = s.fallback;
}

std::vector<std::string> RunConfig::known_keys() {
  std::vector<std::string> out;
  for (const auto& s : specs()) out.emplace_back(s.key);
  std::sort(out.begin(), out.end());
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  values_[key] = normalize(spec_for(key), value);
}

const std::string& RunConfig::get(const std::string& key) const {
  spec_for(key);
  return values_.at(key);
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  return static_cast<std::int64_t>(get_uint(key));
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  std::uint64_t n = 0;
  if (!parse_whole(get(key), n)) throw DomainError(key + " is not an integer");
  return n;
}

double RunConfig::get_double(const std::string& key) const {
  double x = 0.0;
  if (!parse_whole(get(key), x)) throw DomainError(key + " is not a number");
  return x;
}

bool RunConfig::get_bool(const std::string& key) const { return get(key) == "true"; }

void RunConfig::load_text(const std::string& text) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("configuration JSON: ") + e.what());
    }
    const nlohmann::json& obj = doc.contains("config") ? doc.at("config") : doc;
    if (!obj.is_object()) throw DomainError("configuration JSON must be an object");
    for (const auto& [k, v] : obj.items()) set(k, scalar_text(v, k));
    return;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const DomainError& e) {
      throw DomainError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  load_text(ss.str());
}

}  // namespace jpsn
