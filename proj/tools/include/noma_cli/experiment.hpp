// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and figure reproduction for noma-bench.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noma/montecarlo.hpp"

namespace noma::cli {

enum class Figure { kFig4, kFig6, kFig7, kFig9, kFig10, kCustom };

Figure parse_figure(const std::string& name);
std::string figure_name(Figure fig);

/// Parsed from "A:STEP:B" (inclusive) or a single value "A".
std::vector<double> parse_snr_grid(const std::string& text);

struct ExperimentSpec {
  Figure figure = Figure::kCustom;

  std::vector<double> alloc;
  std::vector<double> thresholds;
  std::vector<double> gains;                       ///< fig4: fixed |h_l|²
  /// Fading shapes; SIMO runs every (m, N_r) pair, relay runs use
  /// m_SR = m_RU = m.
  std::vector<int> m_values;
  std::vector<int> nr_values;
  std::vector<double> d_sr;
  double kappa = 3.0;
  std::vector<double> snr_db;

  /// custom only: "simo" or "coop", and "outage" or "ergodic".
  std::string custom_scenario;
  std::string custom_metric = "outage";

  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t chunk_size = 16'384;
  unsigned workers = 0;
  bool quick = false;

  /// Target CSV file.
  std::filesystem::path out;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Defaults from the figure captions. Output goes to `<out_dir>/<figure>.csv`.
ExperimentSpec default_spec(Figure fig, const std::filesystem::path& out_dir);

/// Directory from NOMA_BENCH_OUT_DIR, else the working directory.
std::filesystem::path default_out_dir();

/// Overrides from an INI file; keys of the section named after the figure
/// (e.g. [fig6]) replace the preset values. Unknown keys are errors.
void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path);

struct CsvRow {
  double snr_db = 0.0;
  std::string scenario;
  int user_rank = 0;
  std::string metric;
  std::optional<double> closed_form;
  std::optional<McEstimate> mc;
  bool under_resolved = false;
};

struct CurveSummary {
  std::string scenario;
  int user_rank = 0;
  std::string metric;
  std::size_t points = 0;
  std::size_t compared = 0;
  std::size_t under_resolved = 0;
  /// Largest |closed_form - mc_mean| / σ over compared points, with
  /// σ = max(mc_stderr, sqrt(p(1-p)/n)) for outage curves.
  double max_z = 0.0;
};

struct ReproduceResult {
  std::vector<CsvRow> rows;
  std::vector<CurveSummary> curves;
};

/// Computes every row of the figure. All values come from the library.
ReproduceResult reproduce(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "snr_db,scenario,user_rank,metric,closed_form,mc_mean,mc_stderr,trials,seed";

/// %.9g decimal formatting; empty fields for absent values.
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

std::string format_summary(const CurveSummary& curve);

}  // namespace noma::cli
