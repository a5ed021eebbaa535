#include "jpsn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jpsn/errors.hpp"

namespace jpsn {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf, ptr);
}

DatasetRead parse_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("missing header row", lineno);

  std::vector<std::size_t> circ_cols, lin_cols;
  std::vector<std::string> circ_names, lin_names;
  for (std::size_t k = 0; k < header.size(); ++k) {
    const std::string h = trim(header[k]);
    if (h.rfind("theta:", 0) == 0 && h.size() > 6) {
      circ_cols.push_back(k);
      circ_names.push_back(h.substr(6));
    } else if (h.rfind("y:", 0) == 0 && h.size() > 2) {
      lin_cols.push_back(k);
      lin_names.push_back(h.substr(2));
    } else {
      throw ParseError("header cell '" + h + "' is neither theta:<name> nor y:<name>", lineno);
    }
  }
  std::vector<std::string> labels = circ_names;
  labels.insert(labels.end(), lin_names.begin(), lin_names.end());
  DatasetRead out{PolyCylDataset(circ_cols.size(), lin_cols.size(), labels), 0};

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()),
                       lineno);
    PolyCylObservation obs;
    auto read_cell = [&](std::size_t col, double& value) {
      const std::string c = trim(cells[col]);
      if (c == "NA") return false;
      if (!parse_number(c, value)) throw ParseError("non-numeric cell '" + c + "'", lineno);
      return true;
    };
    for (std::size_t col : circ_cols) {
      double v = 0.0;
      const bool present = read_cell(col, v);
      if (present && !(v >= 0.0 && v < kTwoPi)) ++out.normalized;
      obs.angles.push_back(Angle(present ? v : 0.0));
      obs.angle_missing.push_back(!present);
    }
    for (std::size_t col : lin_cols) {
      double v = 0.0;
      const bool present = read_cell(col, v);
      obs.linears.push_back(present ? v : 0.0);
      obs.linear_missing.push_back(!present);
    }
    out.data.add(std::move(obs));
  }
  return out;
}

DatasetRead read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  return parse_dataset_csv(in);
}

std::string dataset_csv_text(const PolyCylDataset& data) {
  std::ostringstream out;
  const auto& labels = data.labels();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k) out << ',';
    out << (k < data.p() ? "theta:" : "y:") << labels[k];
  }
  out << '\n';
  for (const auto& obs : data.observations()) {
    bool first = true;
    auto sep = [&] {
      if (!first) out << ',';
      first = false;
    };
    for (std::size_t i = 0; i < data.p(); ++i) {
      sep();
      out << (obs.angle_missing[i] ? "NA" : format_double(obs.angles[i].value()));
    }
    for (std::size_t j = 0; j < data.q(); ++j) {
      sep();
      out << (obs.linear_missing[j] ? "NA" : format_double(obs.linears[j]));
    }
    out << '\n';
  }
  return out.str();
}

void write_dataset_csv(const std::string& path, const PolyCylDataset& data) {
  write_text_file(path, dataset_csv_text(data));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> jpsn_draw_columns(std::size_t p, std::size_t q, bool with_c) {
  const std::size_t d = 2 * p + q;
  std::vector<std::string> out;
  for (std::size_t k = 0; k < d; ++k) out.push_back("mu[" + std::to_string(k + 1) + "]");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      out.push_back("sigma[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
  for (std::size_t j = 0; j < q; ++j) out.push_back("lambda[" + std::to_string(j + 1) + "]");
  if (with_c)
    for (std::size_t i = 0; i < p; ++i) out.push_back("c[" + std::to_string(i + 1) + "]");
  return out;
}

namespace {

void append_params(std::ostringstream& out, const JpsnParams& prm) {
  const auto d = prm.dim();
  for (Eigen::Index k = 0; k < d; ++k) out << ',' << format_double(prm.mu(k));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) out << ',' << format_double(prm.sigma(i, j));
  for (Eigen::Index j = 0; j < prm.lambda.size(); ++j) out << ',' << format_double(prm.lambda(j));
}

std::string header_line(const std::vector<std::string>& cols) {
  // Column names contain commas inside brackets, so quote them.
  std::string quoted = "iter";
  for (const auto& c : cols) quoted += ",\"" + c + "\"";
  return quoted + "\n";
}

/// Splits a line on commas that are not inside double quotes.
std::vector<std::string> split_quoted(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  out.push_back(cell);
  return out;
}

}  // namespace

std::string raw_draws_csv(const PosteriorDraws& draws) {
  std::ostringstream out;
  out << header_line(jpsn_draw_columns(draws.p, draws.q, false));
  for (const auto& d : draws.raw) {
    out << d.iteration;
    append_params(out, d.params);
    out << '\n';
  }
  return out.str();
}

std::string identified_draws_csv(const PosteriorDraws& draws) {
  std::ostringstream out;
  out << header_line(jpsn_draw_columns(draws.p, draws.q, true));
  for (const auto& d : draws.identified) {
    out << d.iteration;
    append_params(out, d.params);
    for (Eigen::Index i = 0; i < d.c.c.size(); ++i) out << ',' << format_double(d.c.c(i));
    out << '\n';
  }
  return out.str();
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
  throw ParseError("missing column '" + name + "'", 1);
}

CsvTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_quoted(line);
    if (table.header.empty()) {
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size())
      throw ParseError("expected " + std::to_string(table.header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       lineno);
    std::vector<double> row(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (!parse_number(cells[k], row[k])) throw ParseError("non-numeric cell '" + cells[k] + "'", lineno);
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError("missing header row", lineno);
  return table;
}

JpsnDrawSet read_jpsn_draws(const std::string& path, std::size_t p, std::size_t q) {
  const CsvTable table = read_numeric_csv(path);
  const bool with_c = table.header.size() == 1 + jpsn_draw_columns(p, q, true).size();
  const auto cols = jpsn_draw_columns(p, q, with_c);
  if (table.header.size() != cols.size() + 1) throw ParseError("draw file does not match (p, q)", 1);
  for (std::size_t k = 0; k < cols.size(); ++k)
    if (table.header[k + 1] != cols[k]) throw ParseError("unexpected column '" + table.header[k + 1] + "'", 1);
  const auto d = static_cast<Eigen::Index>(2 * p + q);
  JpsnDrawSet out;
  for (const auto& row : table.rows) {
    std::size_t k = 0;
    out.iterations.push_back(static_cast<std::size_t>(row[k++]));
    Eigen::VectorXd mu(d);
    Eigen::MatrixXd sigma(d, d);
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(q));
    for (Eigen::Index i = 0; i < d; ++i) mu(i) = row[k++];
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i; j < d; ++j) sigma(i, j) = sigma(j, i) = row[k++];
    for (Eigen::Index j = 0; j < lambda.size(); ++j) lambda(j) = row[k++];
    CMatrix c{Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p))};
    if (with_c)
      for (Eigen::Index i = 0; i < c.c.size(); ++i) c.c(i) = row[k++];
    out.params.emplace_back(p, q, mu, sigma, lambda, with_c);
    out.c.push_back(c);
  }
  return out;
}

std::string latent_state_csv(const LatentState& latents) {
  std::ostringstream out;
  out << "t";
  for (Eigen::Index i = 0; i < latents.r.cols(); ++i) out << ",r" << i + 1;
  for (Eigen::Index j = 0; j < latents.d.cols(); ++j) out << ",d" << j + 1;
  out << '\n';
  const Eigen::Index T = std::max(latents.r.rows(), latents.d.rows());
  for (Eigen::Index t = 0; t < T; ++t) {
    out << t + 1;
    for (Eigen::Index i = 0; i < latents.r.cols(); ++i) out << ',' << format_double(latents.r(t, i));
    for (Eigen::Index j = 0; j < latents.d.cols(); ++j) out << ',' << format_double(latents.d(t, j));
    out << '\n';
  }
  return out.str();
}

std::string latents_csv(const PosteriorDraws& draws) {
  std::ostringstream out;
  out << "iter,t";
  for (std::size_t i = 0; i < draws.p; ++i) out << ",r" << i + 1;
  for (std::size_t j = 0; j < draws.q; ++j) out << ",d" << j + 1;
  out << '\n';
  for (const auto& d : draws.raw) {
    for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(draws.T); ++t) {
      if (d.latents.r.rows() == 0 && d.latents.d.rows() == 0) break;
      out << d.iteration << ',' << t + 1;
      for (Eigen::Index i = 0; i < d.latents.r.cols(); ++i) out << ',' << format_double(d.latents.r(t, i));
      for (Eigen::Index j = 0; j < d.latents.d.cols(); ++j) out << ',' << format_double(d.latents.d(t, j));
      out << '\n';
    }
  }
  return out.str();
}

std::string abeley_draws_csv(const AbeLeyDraws& draws) {
  std::ostringstream out;
  out << "iter,alpha,beta,mu,kappa,lambda\n";
  for (std::size_t k = 0; k < draws.draws.size(); ++k) {
    const auto& d = draws.draws[k];
    out << draws.iterations[k] << ',' << format_double(d.alpha()) << ',' << format_double(d.beta()) << ','
        << format_double(d.mu().value()) << ',' << format_double(d.kappa()) << ','
        << format_double(d.lambda_skew()) << '\n';
  }
  return out.str();
}

std::vector<AbeLeyParams> read_abeley_draws(const std::string& path) {
  const CsvTable t = read_numeric_csv(path);
  const auto a = t.column("alpha"), b = t.column("beta"), m = t.column("mu"), k = t.column("kappa"),
             l = t.column("lambda");
  std::vector<AbeLeyParams> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i], Angle(m[i]), k[i], l[i]);
  return out;
}

std::string params_json(const JpsnParams& params) {
  nlohmann::ordered_json j;
  j["p"] = params.p;
  j["q"] = params.q;
  j["constrained"] = params.constrained;
  j["mu"] = std::vector<double>(params.mu.data(), params.mu.data() + params.mu.size());
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < params.sigma.rows(); ++i) {
    std::vector<double> r;
    for (Eigen::Index k = 0; k < params.sigma.cols(); ++k) r.push_back(params.sigma(i, k));
    rows.push_back(r);
  }
  j["sigma"] = rows;
  j["lambda"] = std::vector<double>(params.lambda.data(), params.lambda.data() + params.lambda.size());
  return j.dump(2) + "\n";
}

JpsnParams parse_params_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto p = j.at("p").get<std::size_t>();
    const auto q = j.at("q").get<std::size_t>();
    const auto mu = j.at("mu").get<std::vector<double>>();
    const auto sigma = j.at("sigma").get<std::vector<std::vector<double>>>();
    const auto lambda = j.at("lambda").get<std::vector<double>>();
    const bool constrained = j.value("constrained", false);
    const auto d = static_cast<Eigen::Index>(mu.size());
    if (static_cast<Eigen::Index>(sigma.size()) != d) throw ParseError("sigma has the wrong number of rows", 0);
    Eigen::MatrixXd s(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(i)].size()) != d)
        throw ParseError("sigma row has the wrong length", 0);
      for (Eigen::Index k = 0; k < d; ++k) s(i, k) = sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return JpsnParams(p, q, Eigen::Map<const Eigen::VectorXd>(mu.data(), d), s,
                      Eigen::Map<const Eigen::VectorXd>(lambda.data(), static_cast<Eigen::Index>(lambda.size())),
                      constrained);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("parameter JSON: ") + e.what(), 0);
  }
}

std::string predictions_csv(const PolyCylDataset& data, const std::vector<MissingEntry>& entries,
                            const std::vector<std::vector<double>>& values) {
  std::ostringstream out;
  out << "t,variable,draw,value\n";
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& en = entries[e];
    const std::string& label = data.labels()[en.circular ? en.index : data.p() + en.index];
    for (std::size_t k = 0; k < values.size(); ++k)
      out << en.t + 1 << ',' << label << ',' << k + 1 << ',' << format_double(values[k][e]) << '\n';
  }
  return out.str();
}

}  // namespace jpsn
