// SPDX-License-Identifier: Apache-2.0
#include "noma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <span>
#include <thread>

#include "noma/channel.hpp"
#include "noma/errors.hpp"

namespace noma {
namespace {

__extension__ typedef __int128 Wide;

constexpr long double kRateScale = 1099511627776.0L;  // 2^40

enum StreamKind : std::uint64_t { kSimoOutage = 1, kCoopOutage = 2, kSimoErgodic = 3 };

std::uint64_t point_tag(StreamKind kind, SnrPoint snr) noexcept {
  return CounterRng::mix(static_cast<std::uint64_t>(kind)) ^ std::bit_cast<std::uint64_t>(snr.linear());
}

unsigned resolve_workers(const McConfig& cfg, std::uint64_t chunks) {
  unsigned w = cfg.workers;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, chunks));
}

// Runs cfg.trials trials over `slots` integer accumulators. `fn(rng, acc)`
// adds the outcome of one trial to acc.
template <typename TrialFn>
std::vector<Wide> run_trials(const McConfig& cfg, std::uint64_t key, std::size_t slots,
                             const TrialFn& fn) {
  cfg.validate();
  const std::uint64_t chunks = (cfg.trials + cfg.chunk_size - 1) / cfg.chunk_size;
  const unsigned workers = resolve_workers(cfg, chunks);

  std::vector<Wide> total(slots, 0);
  std::mutex merge_mutex;
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&] {
    std::vector<Wide> local(slots, 0);
    for (;;) {
      const std::uint64_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (chunk >= chunks) break;
      const std::uint64_t begin = chunk * cfg.chunk_size;
      const std::uint64_t end = std::min(cfg.trials, begin + cfg.chunk_size);
      for (std::uint64_t i = begin; i < end; ++i) {
        CounterRng rng(key, i);
        fn(rng, std::span<Wide>(local));
      }
    }
    std::lock_guard lock(merge_mutex);
    for (std::size_t s = 0; s < slots; ++s) total[s] += local[s];
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return total;
}

McEstimate from_count(Wide count, const McConfig& cfg) {
  const double n = static_cast<double>(cfg.trials);
  const double p = static_cast<double>(count) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), cfg.trials, cfg.master_seed};
}

McEstimate from_moments(Wide sum, Wide sum_sq, const McConfig& cfg) {
  const long double n = static_cast<long double>(cfg.trials);
  const long double mean_q = static_cast<long double>(sum) / n;
  long double var_q = 0.0L;
  if (cfg.trials > 1) {
    var_q = (static_cast<long double>(sum_sq) / n - mean_q * mean_q) * n / (n - 1.0L);
    var_q = std::max(var_q, 0.0L);
  }
  return {static_cast<double>(mean_q / kRateScale),
          static_cast<double>(std::sqrt(var_q / n) / kRateScale), cfg.trials, cfg.master_seed};
}

Wide quantize(double rate) { return static_cast<Wide>(std::llround(rate * kRateScale)); }

void draw_sorted(const NakagamiSpec& link, int branches, CounterRng& rng,
                 std::span<double> gains) {
  for (double& g : gains) g = sample_squared_gain(link, branches, rng);
  std::sort(gains.begin(), gains.end());
}

void check_grid(const std::vector<double>& snr_db) {
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    if (!std::isfinite(snr_db[i])) throw ConfigError("SNR grid: values must be finite");
    if (i > 0 && !(snr_db[i] > snr_db[i - 1])) {
      throw ConfigError("SNR grid: values must be strictly increasing");
    }
  }
}

bool resolved(double p) { return p >= kUnderResolvedOutage; }

}  // namespace

void McConfig::validate() const {
  if (trials < 1) throw ConfigError("McConfig: trials must be >= 1");
  if (chunk_size < 1) throw ConfigError("McConfig: chunk_size must be >= 1");
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t tag) noexcept {
  return CounterRng::mix(master_seed ^ CounterRng::mix(tag ^ 0xa0761d6478bd642fULL));
}

McEstimate estimate_event(const McConfig& cfg, std::uint64_t tag,
                          const std::function<bool(CounterRng&)>& event) {
  const auto acc = run_trials(cfg, stream_key(cfg.master_seed, tag), 1,
                              [&](CounterRng& rng, std::span<Wide> out) {
                                if (event(rng)) out[0] += 1;
                              });
  return from_count(acc[0], cfg);
}

SimoOutageEstimates estimate_outage_all(const SimoScenario& scen, SnrPoint snr,
                                        const McConfig& cfg) {
  const int big_l = scen.users();
  OrderedEnsemble{big_l, 1, scen.link, scen.branches}.validate();
  const double oma_gain = oma_equivalent_threshold(scen.thresholds) / snr.linear();
  const std::size_t users = static_cast<std::size_t>(big_l);

  const auto acc = run_trials(
      cfg, stream_key(cfg.master_seed, point_tag(kSimoOutage, snr)), 2 * users,
      [&](CounterRng& rng, std::span<Wide> out) {
        double buf[64];
        std::vector<double> heap;
        std::span<double> gains;
        if (users <= 64) {
          gains = std::span<double>(buf, users);
        } else {
          heap.resize(users);
          gains = heap;
        }
        draw_sorted(scen.link, scen.branches, rng, gains);
        for (int l = 1; l <= big_l; ++l) {
          const double g = gains[static_cast<std::size_t>(l - 1)];
          for (int j = 1; j <= l; ++j) {
            if (simo_sinr(scen, l, j, g, snr) < scen.thresholds.at(j)) {
              out[static_cast<std::size_t>(l - 1)] += 1;
              break;
            }
          }
          if (g < oma_gain) out[users + static_cast<std::size_t>(l - 1)] += 1;
        }
      });

  SimoOutageEstimates est;
  for (std::size_t u = 0; u < users; ++u) {
    est.noma.push_back(from_count(acc[u], cfg));
    est.oma.push_back(from_count(acc[users + u], cfg));
  }
  return est;
}

McEstimate estimate_outage(const SimoScenario& scen, int rank, SnrPoint snr, const McConfig& cfg) {
  if (rank < 1 || rank > scen.users()) throw ContractError("estimate_outage: rank outside [1, L]");
  return estimate_outage_all(scen, snr, cfg).noma[static_cast<std::size_t>(rank - 1)];
}

std::vector<McEstimate> estimate_outage_all(const CoopScenario& scen, const McConfig& cfg) {
  const int big_l = scen.users();
  const std::size_t users = static_cast<std::size_t>(big_l);
  const double gamma = scen.snr().linear();

  const auto acc = run_trials(
      cfg, stream_key(cfg.master_seed, point_tag(kCoopOutage, scen.snr())), users,
      [&](CounterRng& rng, std::span<Wide> out) {
        double buf[64];
        std::vector<double> heap;
        std::span<double> gains;
        if (users <= 64) {
          gains = std::span<double>(buf, users);
        } else {
          heap.resize(users);
          gains = heap;
        }
        const double x = sample_squared_gain(scen.hop_sr(), 1, rng);
        draw_sorted(scen.hop_ru(), 1, rng, gains);
        // Unit noise at relay and user, P_s = P_R = γ.
        const double relay_gain_sq = gamma / (gamma * x + 1.0);
        for (int l = 1; l <= big_l; ++l) {
          const double y = gains[static_cast<std::size_t>(l - 1)];
          const double signal = relay_gain_sq * gamma * x * y;
          const double forwarded_noise = relay_gain_sq * y;
          for (int j = 1; j <= l; ++j) {
            const double sinr = scen.alloc().at(j) * signal /
                                (signal * scen.alloc().residual_after(j) + forwarded_noise + 1.0);
            if (sinr < scen.thresholds().at(j)) {
              out[static_cast<std::size_t>(l - 1)] += 1;
              break;
            }
          }
        }
      });

  std::vector<McEstimate> est;
  for (std::size_t u = 0; u < users; ++u) est.push_back(from_count(acc[u], cfg));
  return est;
}

McEstimate estimate_outage(const CoopScenario& scen, int rank, const McConfig& cfg) {
  if (rank < 1 || rank > scen.users()) throw ContractError("estimate_outage: rank outside [1, L]");
  return estimate_outage_all(scen, cfg)[static_cast<std::size_t>(rank - 1)];
}

ErgodicEstimate estimate_ergodic_sum_rate(const SimoScenario& scen, SnrPoint snr,
                                          const McConfig& cfg) {
  const int big_l = scen.users();
  OrderedEnsemble{big_l, 1, scen.link, scen.branches}.validate();
  const std::size_t users = static_cast<std::size_t>(big_l);
  const std::size_t sum_slot = 2 * users;
  const std::size_t oma_slot = 2 * users + 2;

  const auto acc = run_trials(
      cfg, stream_key(cfg.master_seed, point_tag(kSimoErgodic, snr)), 2 * users + 4,
      [&](CounterRng& rng, std::span<Wide> out) {
        double buf[64];
        std::vector<double> heap;
        std::span<double> gains;
        if (users <= 64) {
          gains = std::span<double>(buf, users);
        } else {
          heap.resize(users);
          gains = heap;
        }
        draw_sorted(scen.link, scen.branches, rng, gains);
        Wide total = 0;
        Wide oma = 0;
        for (int l = 1; l <= big_l; ++l) {
          const double g = gains[static_cast<std::size_t>(l - 1)];
          const Wide q = quantize(0.5 * log2_1p(simo_sinr(scen, l, l, g, snr)));
          const std::size_t u = static_cast<std::size_t>(l - 1);
          out[2 * u] += q;
          out[2 * u + 1] += q * q;
          total += q;
          oma += quantize(0.5 * log2_1p(snr.linear() * g) / big_l);
        }
        out[sum_slot] += total;
        out[sum_slot + 1] += total * total;
        out[oma_slot] += oma;
        out[oma_slot + 1] += oma * oma;
      });

  ErgodicEstimate est;
  for (std::size_t u = 0; u < users; ++u) {
    est.per_user.push_back(from_moments(acc[2 * u], acc[2 * u + 1], cfg));
  }
  est.sum = from_moments(acc[sum_slot], acc[sum_slot + 1], cfg);
  est.oma_sum = from_moments(acc[oma_slot], acc[oma_slot + 1], cfg);
  return est;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  check_grid(spec.snr_db);
  if (spec.run_mc) spec.mc.validate();
  std::vector<SweepRow> rows;

  if (const auto* coop = std::get_if<CoopScenario>(&spec.scenario)) {
    if (spec.metric != SweepMetric::kOutage) {
      throw ConfigError("sweep: ergodic rate is not available for the relay scenario");
    }
    if (spec.include_oma) throw ConfigError("sweep: no OMA baseline for the relay scenario");
    for (double db : spec.snr_db) {
      const auto scen = coop->with_snr(SnrPoint::from_db(db));
      std::vector<McEstimate> mc;
      if (spec.run_mc) mc = estimate_outage_all(scen, spec.mc);
      for (int l = 1; l <= scen.users(); ++l) {
        SweepRow row{db, l, "outage", coop_outage_closed_form(scen, l).probability, {}, false};
        if (spec.run_mc) row.mc = mc[static_cast<std::size_t>(l - 1)];
        row.under_resolved = !resolved(*row.closed_form);
        rows.push_back(std::move(row));
      }
    }
    return rows;
  }

  const auto& simo = std::get<SimoScenario>(spec.scenario);
  if (spec.metric == SweepMetric::kOutage) {
    for (double db : spec.snr_db) {
      const auto snr = SnrPoint::from_db(db);
      SimoOutageEstimates mc;
      if (spec.run_mc) mc = estimate_outage_all(simo, snr, spec.mc);
      for (int l = 1; l <= simo.users(); ++l) {
        const auto u = static_cast<std::size_t>(l - 1);
        SweepRow row{db, l, "outage", simo_outage_closed_form(simo, l, snr).probability, {}, false};
        if (spec.run_mc) row.mc = mc.noma[u];
        row.under_resolved = !resolved(*row.closed_form);
        rows.push_back(std::move(row));
        if (spec.include_oma) {
          SweepRow oma{db, l, "oma_outage", simo_oma_outage(simo, l, snr).probability, {}, false};
          if (spec.run_mc) oma.mc = mc.oma[u];
          oma.under_resolved = !resolved(*oma.closed_form);
          rows.push_back(std::move(oma));
        }
      }
    }
    return rows;
  }

  // The OMA ergodic benchmark is always reported with the ergodic rows.
  for (double db : spec.snr_db) {
    const auto snr = SnrPoint::from_db(db);
    const auto asym = simo_ergodic_sum_rate_asymptotic(simo, snr);
    ErgodicEstimate mc;
    if (spec.run_mc) mc = estimate_ergodic_sum_rate(simo, snr, spec.mc);
    SweepRow sum{db, 0, "ergodic_sum_rate", asym.sum, {}, false};
    SweepRow oma{db, 0, "oma_ergodic_sum_rate", std::nullopt, {}, false};
    if (spec.run_mc) {
      sum.mc = mc.sum;
      oma.mc = mc.oma_sum;
    }
    rows.push_back(std::move(sum));
    rows.push_back(std::move(oma));
    for (int l = 1; l <= simo.users(); ++l) {
      const auto u = static_cast<std::size_t>(l - 1);
      SweepRow row{db, l, "ergodic_rate", asym.per_user[u], {}, false};
      if (spec.run_mc) row.mc = mc.per_user[u];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace noma
