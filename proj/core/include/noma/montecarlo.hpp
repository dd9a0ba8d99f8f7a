// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo estimation of outage probability and ergodic rate.
//
// Trial i of a stream draws from CounterRng(stream_key, i), so results depend
// only on (scenario, SNR, master_seed, trials). Per-trial outcomes are
// accumulated as integers (event counts, or rates quantized to 2^-40), and
// integer addition is order-independent: any chunk size and worker count
// gives the same bits.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "noma/coop.hpp"
#include "noma/random.hpp"
#include "noma/simo.hpp"

namespace noma {

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t master_seed = 0;
  std::uint64_t chunk_size = 16'384;
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;

  /// Throws ConfigError unless trials >= 1 and chunk_size >= 1.
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Key of the stream used for one estimation point.
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t tag) noexcept;

/// Fraction of trials on which `event` returns true; std_error is
/// sqrt(p(1-p)/n). `event` must be safe to call from several threads.
McEstimate estimate_event(const McConfig& cfg, std::uint64_t tag,
                          const std::function<bool(CounterRng&)>& event);

/// Outage of the rank-l user: some layer j <= l has SINR_{j->l} < γ_th,j.
/// Gains are L unordered MRC draws sorted per trial.
McEstimate estimate_outage(const SimoScenario& scen, int rank, SnrPoint snr, const McConfig& cfg);

/// Outage of the rank-l user behind the AF relay. The end-to-end SINR is
/// built from the relay gain G = sqrt(P / (P X + σ²)) rather than the
/// simplified ratio.
McEstimate estimate_outage(const CoopScenario& scen, int rank, const McConfig& cfg);

struct SimoOutageEstimates {
  std::vector<McEstimate> noma;  ///< index l-1
  std::vector<McEstimate> oma;   ///< rank-l gain below (Π(1+γ_th,i) - 1)/γ
};

/// All ranks from one set of trials.
SimoOutageEstimates estimate_outage_all(const SimoScenario& scen, SnrPoint snr,
                                        const McConfig& cfg);
std::vector<McEstimate> estimate_outage_all(const CoopScenario& scen, const McConfig& cfg);

struct ErgodicEstimate {
  McEstimate sum;                   ///< Σ_l (1/2) log2(1 + SINR_l)
  std::vector<McEstimate> per_user; ///< (1/2) log2(1 + SINR_l), index l-1
  McEstimate oma_sum;               ///< Σ_l (1/2)(1/L) log2(1 + γ g_l)
};

ErgodicEstimate estimate_ergodic_sum_rate(const SimoScenario& scen, SnrPoint snr,
                                          const McConfig& cfg);

enum class SweepMetric { kOutage, kErgodicRate };

struct SweepSpec {
  std::variant<SimoScenario, CoopScenario> scenario;
  SweepMetric metric = SweepMetric::kOutage;
  std::vector<double> snr_db;
  McConfig mc;
  bool run_mc = true;
  /// SIMO outage only: add OMA baseline rows.
  bool include_oma = false;
};

/// One output row. rank 0 denotes a sum over users.
struct SweepRow {
  double snr_db = 0.0;
  int rank = 0;
  std::string metric;
  std::optional<double> closed_form;
  std::optional<McEstimate> mc;
  /// Outage below 1e-4: too rare for the trial budget to resolve.
  bool under_resolved = false;
};

inline constexpr double kUnderResolvedOutage = 1e-4;

/// Closed form and Monte Carlo over the SNR grid; rows ordered by
/// (snr_db, rank). Throws ConfigError for a grid that is not strictly
/// increasing or a metric the scenario does not support.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace noma
