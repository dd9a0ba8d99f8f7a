// SPDX-License-Identifier: Apache-2.0
#include "noma_cli/app.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "noma/errors.hpp"
#include "noma_cli/experiment.hpp"
#include "noma_cli/validate.hpp"

namespace noma::cli {
namespace {

constexpr std::uint64_t kQuickTrials = 10'000;

struct ReproduceArgs {
  std::string figure;
  std::string out;
  std::string config;
  std::string snr_db;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  int m = 0;
  int nr = 0;
  double dsr = 0.0;
  unsigned workers = 0;
  bool quick = false;
};

struct ValidateArgs {
  bool quick = false;
  std::string report;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

std::filesystem::path resolve_out(const std::string& given, Figure fig) {
  std::filesystem::path p = given.empty() ? default_out_dir() : std::filesystem::path(given);
  if (p.extension() == ".csv") return p;
  return p / (figure_name(fig) + ".csv");
}

ExperimentSpec build_spec(const ReproduceArgs& args, const CLI::App& cmd) {
  const Figure fig = parse_figure(args.figure);
  ExperimentSpec spec = default_spec(fig, default_out_dir());
  if (!args.config.empty()) apply_config_file(spec, args.config);

  const bool simo = fig == Figure::kFig6 || fig == Figure::kFig7 || fig == Figure::kCustom;
  const bool relay = fig == Figure::kFig9 || fig == Figure::kFig10 || fig == Figure::kCustom;
  auto given = [&](const char* name) { return cmd.count(name) > 0; };

  if (args.quick) {
    spec.quick = true;
    spec.trials = kQuickTrials;
  }
  if (given("--trials")) spec.trials = args.trials;
  if (given("--seed")) spec.seed = args.seed;
  if (given("--workers")) spec.workers = args.workers;
  if (given("--snr-db")) spec.snr_db = parse_snr_grid(args.snr_db);
  if (given("--m")) {
    if (fig == Figure::kFig4) throw ConfigError("--m does not apply to fig4");
    spec.m_values = {args.m};
  }
  if (given("--nr")) {
    if (!simo) throw ConfigError("--nr applies to fig6, fig7 and custom only");
    spec.nr_values = {args.nr};
  }
  if (given("--dsr")) {
    if (!relay) throw ConfigError("--dsr applies to fig9, fig10 and custom only");
    spec.d_sr = {args.dsr};
  }
  spec.out = resolve_out(args.out, fig);
  return spec;
}

int do_reproduce(const ReproduceArgs& args, const CLI::App& cmd, std::ostream& out) {
  const ExperimentSpec spec = build_spec(args, cmd);
  const ReproduceResult result = reproduce(spec);

  if (spec.out.has_parent_path()) std::filesystem::create_directories(spec.out.parent_path());
  std::ofstream file(spec.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file " + spec.out.string());
  write_csv(file, result.rows);
  file.close();
  if (!file) throw std::runtime_error("failed writing " + spec.out.string());

  for (const auto& curve : result.curves) out << format_summary(curve) << '\n';
  out << "wrote " << result.rows.size() << " rows to " << spec.out.string() << '\n';
  return kExitOk;
}

int do_validate(const ValidateArgs& args, std::ostream& out) {
  ValidationOptions opts;
  opts.quick = args.quick;
  opts.seed = args.seed;
  opts.workers = args.workers;
  const auto groups = run_validation(opts);

  bool all = true;
  for (const auto& g : groups) {
    all = all && g.passed();
    out << (g.passed() ? "PASS " : "FAIL ") << g.name << " (" << g.checks << " checks, "
        << g.failures.size() << " failed)\n";
  }
  const std::filesystem::path report =
      args.report.empty() ? default_out_dir() / "validate_report.json" : std::filesystem::path(args.report);
  if (report.has_parent_path()) std::filesystem::create_directories(report.parent_path());
  std::ofstream file(report, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open report file " + report.string());
  file << report_json(groups).dump(2) << '\n';
  out << "report: " << report.string() << '\n';
  return all ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"NOMA closed-form analysis and Monte Carlo cross-validation", "noma-bench"};
  app.require_subcommand(1);

  ReproduceArgs rargs;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Write the CSV data of one figure");
  reproduce_cmd->add_option("figure", rargs.figure, "fig4 | fig6 | fig7 | fig9 | fig10 | custom")
      ->required();
  reproduce_cmd->add_option("--out", rargs.out, "Output CSV file or directory");
  reproduce_cmd->add_option("--config", rargs.config, "INI file with per-figure sections");
  reproduce_cmd->add_option("--seed", rargs.seed, "Master seed");
  reproduce_cmd->add_option("--trials", rargs.trials, "Monte Carlo trials per point");
  reproduce_cmd->add_option("--snr-db", rargs.snr_db, "SNR grid A:STEP:B or a single value");
  reproduce_cmd->add_option("--m", rargs.m, "Nakagami shape m");
  reproduce_cmd->add_option("--nr", rargs.nr, "Receive antennas N_r");
  reproduce_cmd->add_option("--dsr", rargs.dsr, "Normalised BS-relay distance");
  reproduce_cmd->add_option("--workers", rargs.workers, "Worker threads (0 = all cores)");
  reproduce_cmd->add_flag("--quick", rargs.quick, "10^4 trials per point");

  ValidateArgs vargs;
  auto* validate_cmd = app.add_subcommand("validate", "Run the cross-validation groups");
  validate_cmd->add_flag("--quick", vargs.quick, "Smoke version with 10^4 trials");
  validate_cmd->add_option("--report", vargs.report, "JSON report path");
  validate_cmd->add_option("--seed", vargs.seed, "Master seed");
  validate_cmd->add_option("--workers", vargs.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "noma-bench: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (*reproduce_cmd) return do_reproduce(rargs, *reproduce_cmd, out);
    return do_validate(vargs, out);
  } catch (const NumericalError& e) {
    err << "noma-bench: numerical diagnostic: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const ConfigError& e) {
    err << "noma-bench: invalid configuration: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "noma-bench: invalid configuration: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    err << "noma-bench: invalid configuration: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "noma-bench: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace noma::cli
