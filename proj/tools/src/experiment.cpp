// SPDX-License-Identifier: Apache-2.0
#include "noma_cli/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "noma/errors.hpp"

namespace noma::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw, const std::string& what) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t used_den = 0;
      const double n = std::stod(num, &used);
      const double d = std::stod(den, &used_den);
      if (used != num.size() || used_den != den.size() || d == 0.0) throw std::invalid_argument(text);
      return n / d;
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a number");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_real(p, what));
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_reals(text, what)) {
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      throw ConfigError(what + ": values must be integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  const double v = parse_real(text, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError(what + ": expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string short_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool is_simo(const ExperimentSpec& s) {
  return s.figure == Figure::kFig6 || s.figure == Figure::kFig7 ||
         (s.figure == Figure::kCustom && s.custom_scenario == "simo");
}

bool is_coop(const ExperimentSpec& s) {
  return s.figure == Figure::kFig9 || s.figure == Figure::kFig10 ||
         (s.figure == Figure::kCustom && s.custom_scenario == "coop");
}

McConfig mc_config(const ExperimentSpec& spec) {
  McConfig cfg;
  cfg.trials = spec.trials;
  cfg.master_seed = spec.seed;
  cfg.chunk_size = spec.chunk_size;
  cfg.workers = spec.workers;
  return cfg;
}

void append_sweep(std::vector<CsvRow>& rows, const std::string& label,
                  const std::vector<SweepRow>& sweep) {
  for (const auto& r : sweep) {
    rows.push_back({r.snr_db, label, r.rank, r.metric, r.closed_form, r.mc, r.under_resolved});
  }
}

CoopTemplate coop_template(const ExperimentSpec& spec, int m, double snr_db) {
  return CoopTemplate{PowerAllocation(spec.alloc), SinrThresholds(spec.thresholds), double(m),
                      double(m), spec.kappa, SnrPoint::from_db(snr_db)};
}

std::vector<CurveSummary> summarize(const std::vector<CsvRow>& rows) {
  std::vector<CurveSummary> curves;
  std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
  for (const auto& row : rows) {
    const auto key = std::make_tuple(row.scenario, row.user_rank, row.metric);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, curves.size()).first;
      curves.push_back({row.scenario, row.user_rank, row.metric, 0, 0, 0, 0.0});
    }
    auto& c = curves[it->second];
    ++c.points;
    if (row.under_resolved) {
      ++c.under_resolved;
      continue;
    }
    if (!row.closed_form || !row.mc) continue;
    double sigma = row.mc->std_error;
    if (row.metric.find("outage") != std::string::npos) {
      const double p = *row.closed_form;
      sigma = std::max(sigma, std::sqrt(p * (1.0 - p) / static_cast<double>(row.mc->trials)));
    }
    const double diff = std::abs(*row.closed_form - row.mc->mean);
    const double z = sigma > 0.0 ? diff / sigma : (diff == 0.0 ? 0.0 : INFINITY);
    ++c.compared;
    c.max_z = std::max(c.max_z, z);
  }
  return curves;
}

}  // namespace

Figure parse_figure(const std::string& name) {
  static const std::map<std::string, Figure> names{
      {"fig4", Figure::kFig4}, {"fig6", Figure::kFig6},   {"fig7", Figure::kFig7},
      {"fig9", Figure::kFig9}, {"fig10", Figure::kFig10}, {"custom", Figure::kCustom}};
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown experiment '" + name + "'");
  return it->second;
}

std::string figure_name(Figure fig) {
  switch (fig) {
    case Figure::kFig4: return "fig4";
    case Figure::kFig6: return "fig6";
    case Figure::kFig7: return "fig7";
    case Figure::kFig9: return "fig9";
    case Figure::kFig10: return "fig10";
    case Figure::kCustom: return "custom";
  }
  return "custom";
}

std::vector<double> parse_snr_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_real(parts[0], "snr grid")};
  if (parts.size() != 3) throw ConfigError("snr grid: expected A:STEP:B or a single value");
  const double a = parse_real(parts[0], "snr grid");
  const double step = parse_real(parts[1], "snr grid");
  const double b = parse_real(parts[2], "snr grid");
  if (!(step > 0.0)) throw ConfigError("snr grid: STEP must be positive");
  if (!(b >= a)) throw ConfigError("snr grid: B must not be below A");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 100000) throw ConfigError("snr grid: too many points");
  std::vector<double> grid;
  for (long i = 0; i < n; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

std::filesystem::path default_out_dir() {
  if (const char* dir = std::getenv("NOMA_BENCH_OUT_DIR"); dir != nullptr && *dir != '\0') {
    return dir;
  }
  return std::filesystem::current_path();
}

ExperimentSpec default_spec(Figure fig, const std::filesystem::path& out_dir) {
  ExperimentSpec s;
  s.figure = fig;
  s.out = out_dir / (figure_name(fig) + ".csv");
  s.snr_db = parse_snr_grid("0:2:40");
  switch (fig) {
    case Figure::kFig4:
      s.alloc = {0.6, 0.4};
      s.thresholds = {1.0, 2.0};
      s.gains = {1.0, 100.0};
      break;
    case Figure::kFig6:
      s.alloc = {0.6, 0.4};
      s.thresholds = {1.0, 2.0};
      s.m_values = {1, 2};
      s.nr_values = {1, 2};
      break;
    case Figure::kFig7:
      s.alloc = {0.6, 0.4};
      s.thresholds = {1.0, 2.0};
      s.m_values = {2};
      s.nr_values = {2};
      break;
    case Figure::kFig9:
      s.alloc = {1.0 / 2.0, 1.0 / 3.0, 1.0 / 6.0};
      s.thresholds = {0.9, 1.5, 2.0};
      s.m_values = {1, 2, 3};
      s.d_sr = {0.5};
      break;
    case Figure::kFig10:
      s.alloc = {1.0 / 2.0, 1.0 / 3.0, 1.0 / 6.0};
      s.thresholds = {0.9, 1.5, 2.0};
      s.m_values = {1, 2, 3};
      for (int i = 1; i <= 19; ++i) s.d_sr.push_back(0.05 * i);
      s.snr_db = {20.0};
      break;
    case Figure::kCustom:
      s.alloc = {0.6, 0.4};
      s.thresholds = {1.0, 2.0};
      s.custom_scenario = "simo";
      s.m_values = {1};
      s.nr_values = {1};
      s.d_sr = {0.5};
      break;
  }
  return s;
}

void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config file: " + std::string(e.what()));
  }
  const auto section = tree.get_child_optional(figure_name(spec.figure));
  if (!section) return;
  for (const auto& [key, node] : *section) {
    const std::string value = node.get_value<std::string>();
    const std::string what = "config key '" + key + "'";
    if (key == "alloc") spec.alloc = parse_reals(value, what);
    else if (key == "thresholds") spec.thresholds = parse_reals(value, what);
    else if (key == "gains") spec.gains = parse_reals(value, what);
    else if (key == "m") spec.m_values = parse_ints(value, what);
    else if (key == "nr") spec.nr_values = parse_ints(value, what);
    else if (key == "dsr") spec.d_sr = parse_reals(value, what);
    else if (key == "kappa") spec.kappa = parse_real(value, what);
    else if (key == "snr_db") spec.snr_db = parse_snr_grid(value);
    else if (key == "trials") spec.trials = parse_count(value, what);
    else if (key == "seed") spec.seed = parse_count(value, what);
    else if (key == "chunk_size") spec.chunk_size = parse_count(value, what);
    else if (key == "workers") spec.workers = static_cast<unsigned>(parse_count(value, what));
    else if (key == "scenario") spec.custom_scenario = trim(value);
    else if (key == "metric") spec.custom_metric = trim(value);
    else throw ConfigError("config file: unknown key '" + key + "' in [" +
                           figure_name(spec.figure) + "]");
  }
}

void ExperimentSpec::validate() const {
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    if (!std::isfinite(snr_db[i])) throw ConfigError("SNR grid values must be finite");
    if (i > 0 && !(snr_db[i] > snr_db[i - 1])) {
      throw ConfigError("SNR grid must be strictly increasing");
    }
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (chunk_size < 1) throw ConfigError("chunk_size must be >= 1");
  if (figure == Figure::kCustom) {
    if (custom_scenario != "simo" && custom_scenario != "coop") {
      throw ConfigError("custom scenario must be 'simo' or 'coop'");
    }
    if (custom_metric != "outage" && custom_metric != "ergodic") {
      throw ConfigError("custom metric must be 'outage' or 'ergodic'");
    }
    if (custom_scenario == "coop" && custom_metric == "ergodic") {
      throw ConfigError("ergodic rate is not available for the relay scenario");
    }
  }
  try {
    const PowerAllocation a(alloc);
    const SinrThresholds th(thresholds);
    if (th.size() != a.size()) {
      throw ConfigError("thresholds must have one entry per user (" + std::to_string(a.size()) + ")");
    }
    if (figure == Figure::kFig4) {
      const GainProfile g(gains);
      if (g.size() != a.size()) throw ConfigError("gains must have one entry per user");
    }
    if (is_simo(*this) || is_coop(*this)) {
      if (m_values.empty()) throw ConfigError("at least one m value is required");
      for (int m : m_values) {
        if (m < 1) throw ConfigError("m must be a positive integer");
      }
    }
    if (is_simo(*this)) {
      if (nr_values.empty()) throw ConfigError("at least one N_r value is required");
      for (int nr : nr_values) {
        if (nr < 1) throw ConfigError("N_r must be >= 1");
      }
    }
    if (is_coop(*this)) {
      if (d_sr.empty()) throw ConfigError("at least one d_SR value is required");
      for (double d : d_sr) RelayGeometry(d, kappa);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

ReproduceResult reproduce(const ExperimentSpec& spec) {
  spec.validate();
  const McConfig cfg = mc_config(spec);
  const std::string tag = figure_name(spec.figure);
  ReproduceResult result;
  auto& rows = result.rows;

  if (spec.figure == Figure::kFig4) {
    const PowerAllocation a(spec.alloc);
    const GainProfile g(spec.gains);
    for (double db : spec.snr_db) {
      const auto snr = SnrPoint::from_db(db);
      rows.push_back({db, tag, 0, "noma_downlink_sum_rate", dl_sum_rate(a, g, snr), {}, false});
      rows.push_back({db, tag, 0, "noma_uplink_sum_rate", ul_sum_rate(a, g, snr), {}, false});
      rows.push_back({db, tag, 0, "oma_sum_rate", oma_sum_rate(g, snr), {}, false});
    }
  } else if (is_simo(spec)) {
    const bool ergodic = spec.figure == Figure::kFig7 ||
                         (spec.figure == Figure::kCustom && spec.custom_metric == "ergodic");
    for (int m : spec.m_values) {
      for (int nr : spec.nr_values) {
        SweepSpec sweep{SimoScenario(PowerAllocation(spec.alloc), NakagamiSpec(m, 1.0), nr,
                                     SinrThresholds(spec.thresholds)),
                        ergodic ? SweepMetric::kErgodicRate : SweepMetric::kOutage,
                        spec.snr_db, cfg, true, !ergodic};
        append_sweep(rows, tag + "/m=" + std::to_string(m) + ";nr=" + std::to_string(nr),
                     run_sweep(sweep));
      }
    }
  } else {
    for (int m : spec.m_values) {
      const double first_db = spec.snr_db.empty() ? 0.0 : spec.snr_db.front();
      for (double d : spec.d_sr) {
        SweepSpec sweep{coop_template(spec, m, first_db).at(d), SweepMetric::kOutage,
                        spec.snr_db, cfg, true, false};
        append_sweep(rows, tag + "/m=" + std::to_string(m) + ";dsr=" + short_g(d),
                     run_sweep(sweep));
      }
      if (spec.figure == Figure::kFig10) {
        for (double db : spec.snr_db) {
          const auto family = coop_template(spec, m, db);
          for (int l = 1; l <= static_cast<int>(spec.alloc.size()); ++l) {
            const auto best = optimal_relay_location(family, l, spec.d_sr);
            rows.push_back({db, tag + "/m=" + std::to_string(m), l, "argmin_dsr", best.d_sr, {},
                            false});
          }
        }
      }
    }
  }
  result.curves = summarize(rows);
  return result;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_g(r.snr_db) << ',' << r.scenario << ',' << r.user_rank << ',' << r.metric << ',';
    if (r.closed_form) os << format_g(*r.closed_form);
    os << ',';
    if (r.mc) {
      os << format_g(r.mc->mean) << ',' << format_g(r.mc->std_error) << ',' << r.mc->trials << ','
         << r.mc->seed;
    } else {
      os << ",,,";
    }
    os << '\n';
  }
}

std::string format_summary(const CurveSummary& c) {
  std::ostringstream os;
  os << c.scenario << ' ' << (c.user_rank == 0 ? std::string("sum") : "user " + std::to_string(c.user_rank))
     << ' ' << c.metric << ": " << c.points << " points";
  if (c.compared > 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", c.max_z);
    os << ", " << c.compared << " compared, max |closed-mc|/stderr = " << buf;
    if (c.metric.find("ergodic") != std::string::npos) os << " (closed form is the high-SNR asymptote)";
  }
  if (c.under_resolved > 0) os << ", " << c.under_resolved << " under-resolved (OP < 1e-4)";
  return os.str();
}

}  // namespace noma::cli
