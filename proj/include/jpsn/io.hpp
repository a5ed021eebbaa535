#pragma once

#include <istream>
#include <string>
#include <vector>

#include "jpsn/baselines.hpp"
#include "jpsn/core.hpp"
#include "jpsn/mcmc.hpp"
#include "jpsn/model.hpp"

namespace jpsn {

/// Shortest text that reads back to the same double.
std::string format_double(double x);

struct DatasetRead {
  PolyCylDataset data;
  /// Angles that were outside [0, 2π) and got reduced.
  std::size_t normalized = 0;
};

/// Header cells are `theta:<name>` or `y:<name>`; data cells are numbers or
/// `NA`. Throws ParseError with the offending line.
DatasetRead parse_dataset_csv(std::istream& in);
DatasetRead read_dataset_csv(const std::string& path);

/// Circular columns first; masked cells written as NA.
void write_dataset_csv(const std::string& path, const PolyCylDataset& data);
std::string dataset_csv_text(const PolyCylDataset& data);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Column names of a JPSN draw row: mu[k], sigma[i,j] (upper triangle),
/// lambda[j], then c[i] when with_c. Indices are 1-based.
std::vector<std::string> jpsn_draw_columns(std::size_t p, std::size_t q, bool with_c);

/// `iter` followed by jpsn_draw_columns. Identified draws carry c.
std::string raw_draws_csv(const PosteriorDraws& draws);
std::string identified_draws_csv(const PosteriorDraws& draws);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column by name; throws ParseError if absent.
  std::vector<double> column(const std::string& name) const;
};

CsvTable read_numeric_csv(const std::string& path);

struct JpsnDrawSet {
  std::vector<std::size_t> iterations;
  std::vector<JpsnParams> params;
  std::vector<CMatrix> c;
};

/// Reads a file written by raw_draws_csv or identified_draws_csv.
JpsnDrawSet read_jpsn_draws(const std::string& path, std::size_t p, std::size_t q);

std::string latents_csv(const PosteriorDraws& draws);
std::string latent_state_csv(const LatentState& latents);

std::string abeley_draws_csv(const AbeLeyDraws& draws);
std::vector<AbeLeyParams> read_abeley_draws(const std::string& path);

std::string params_json(const JpsnParams& params);
JpsnParams parse_params_json(const std::string& text);

/// Long format: t (1-based), variable label, draw (1-based), value.
std::string predictions_csv(const PolyCylDataset& data, const std::vector<MissingEntry>& entries,
                            const std::vector<std::vector<double>>& values);

}  // namespace jpsn
