// SPDX-License-Identifier: Apache-2.0
#include "noma/simo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "noma/errors.hpp"
#include "noma/specfun.hpp"

namespace noma {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

OrderedEnsemble ensemble_for(const SimoScenario& scen, int rank) {
  OrderedEnsemble ens{scen.users(), rank, scen.link, scen.branches};
  ens.validate();
  return ens;
}

}  // namespace

SimoScenario::SimoScenario(PowerAllocation alloc_in, NakagamiSpec link_in, int branches_in,
                           SinrThresholds thresholds_in)
    : alloc(std::move(alloc_in)),
      link(link_in),
      branches(branches_in),
      thresholds(std::move(thresholds_in)) {
  if (branches < 1) throw ContractError("SimoScenario: branches must be >= 1");
  if (thresholds.size() != alloc.size()) {
    throw ContractError("SimoScenario: one threshold per user required");
  }
}

double simo_sinr(const SimoScenario& scen, int rank, int target, double gain, SnrPoint snr) {
  const int big_l = scen.users();
  if (rank < 1 || rank > big_l || target < 1 || target > rank) {
    throw ContractError("simo_sinr: requires 1 <= target <= rank <= L");
  }
  if (gain < 0.0) throw ContractError("simo_sinr: gain must be nonnegative");
  const double rx = snr.linear() * gain;
  if (target == big_l) return scen.alloc.at(big_l) * rx;
  return scen.alloc.at(target) * rx / (rx * scen.alloc.residual_after(target) + 1.0);
}

std::optional<double> simo_outage_threshold(const SimoScenario& scen, int rank, SnrPoint snr) {
  return outage_gain_threshold(scen.alloc, scen.thresholds, snr, rank);
}

OutageResult simo_outage_series(const SimoScenario& scen, int rank, SnrPoint snr) {
  const auto ens = ensemble_for(scen, rank);
  const int m = scen.link.integer_shape();
  const auto eta = simo_outage_threshold(scen, rank, snr);
  if (!eta) return {1.0, 0.0, OutageSource::kInfeasible};
  if (*eta == 0.0) return {0.0, 0.0, OutageSource::kZeroThreshold};

  const int big_l = ens.count;
  const int l = ens.rank;
  const int shape = m * scen.branches;
  const double rate = m / scen.link.omega();
  const auto base = specfun::SeriesCoefficients::truncated_exponential(rate, shape);

  std::vector<std::vector<double>> theta;
  theta.reserve(static_cast<std::size_t>(big_l) + 1);
  for (int r = 0; r <= big_l; ++r) theta.push_back(specfun::multinomial_coeffs(base, r));

  const double log_q = specfun::log_factorial(big_l) - specfun::log_factorial(big_l - l) -
                       specfun::log_factorial(l - 1);
  const double log_eta = std::log(*eta);

  specfun::CompensatedSum sum;
  double rounding = 0.0;
  for (int t = 0; t <= big_l - l; ++t) {
    const double log_outer =
        log_q - std::log(static_cast<double>(l + t)) + specfun::log_binomial(big_l - l, t);
    for (int r = 0; r <= l + t; ++r) {
      const double log_mid =
          log_outer + specfun::log_binomial(l + t, r) - r * rate * (*eta);
      const double sign = ((t + r) % 2 == 0) ? 1.0 : -1.0;
      const auto& th = theta[static_cast<std::size_t>(r)];
      for (int s = 0; s <= r * (shape - 1); ++s) {
        const double log_term = log_mid + std::log(th[static_cast<std::size_t>(s)]) + s * log_eta;
        const double magnitude = std::exp(log_term);
        sum.add(sign * magnitude);
        rounding += magnitude * (8.0 + std::abs(log_term)) * kEps;
      }
    }
  }
  return {std::clamp(sum.value(), 0.0, 1.0), rounding, OutageSource::kSimoSeries};
}

OutageResult simo_outage_ordered_cdf(const SimoScenario& scen, int rank, SnrPoint snr) {
  const auto ens = ensemble_for(scen, rank);
  static_cast<void>(scen.link.integer_shape());
  const auto eta = simo_outage_threshold(scen, rank, snr);
  if (!eta) return {1.0, 0.0, OutageSource::kInfeasible};
  if (*eta == 0.0) return {0.0, 0.0, OutageSource::kZeroThreshold};
  const double p = ordered_gain_cdf(ens, *eta);
  return {p, 4.0 * ens.count * kEps * p, OutageSource::kSimoOrderedCdf};
}

OutageResult simo_outage_closed_form(const SimoScenario& scen, int rank, SnrPoint snr) {
  const auto series = simo_outage_series(scen, rank, snr);
  if (series.source != OutageSource::kSimoSeries) return series;
  const auto composed = simo_outage_ordered_cdf(scen, rank, snr);
  const double tol = 1e-8 * std::abs(composed.probability) + series.error_bound +
                     composed.error_bound;
  if (std::abs(series.probability - composed.probability) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "SIMO outage series (" << series.probability << ") disagrees with ordered CDF ("
        << composed.probability << ") for rank " << rank << " at " << snr.db() << " dB";
    throw NumericalError(msg.str());
  }
  return series;
}

OutageResult simo_oma_outage(const SimoScenario& scen, int rank, SnrPoint snr) {
  const auto ens = ensemble_for(scen, rank);
  const double threshold = oma_equivalent_threshold(scen.thresholds);
  if (threshold == 0.0) return {0.0, 0.0, OutageSource::kZeroThreshold};
  const double p = ordered_gain_cdf(ens, threshold / snr.linear());
  return {p, 4.0 * ens.count * kEps * p, OutageSource::kSimoOmaOrderedCdf};
}

ErgodicAsymptote simo_ergodic_sum_rate_asymptotic(const SimoScenario& scen, SnrPoint snr,
                                                  AsymptoteForm form) {
  const int big_l = scen.users();
  const int m = scen.link.integer_shape();
  const int shape = m * scen.branches;
  const double omega = scen.link.omega();
  const double strong_power = scen.alloc.at(big_l) * snr.linear();

  ErgodicAsymptote out;
  out.per_user.reserve(static_cast<std::size_t>(big_l));
  for (int l = 1; l < big_l; ++l) {
    out.per_user.push_back(0.5 * log2_1p(scen.alloc.at(l) / scen.alloc.residual_after(l)));
  }

  const auto base = specfun::SeriesCoefficients::truncated_exponential(m / omega, shape);
  // a_L γ ξ summed against the CDF expansion of the strongest gain.
  specfun::CompensatedSum strong;
  for (int k = 1; k <= big_l; ++k) {
    const auto theta = specfun::multinomial_coeffs(base, k);
    const double scale = omega / (m * k);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const double choose = specfun::binomial(big_l, k);
    for (std::size_t n = 0; n < theta.size(); ++n) {
      double scaled_xi;
      if (n == 0) {
        scaled_xi = std::log(strong_power * scale);
        if (form == AsymptoteForm::kEulerCorrected) scaled_xi -= std::numbers::egamma;
      } else {
        scaled_xi = std::tgamma(static_cast<double>(n)) * std::pow(scale, static_cast<double>(n));
      }
      strong.add(sign * choose * theta[n] * scaled_xi);
    }
  }
  out.per_user.push_back(strong.value() / (2.0 * std::numbers::ln2));

  for (double r : out.per_user) out.sum += r;
  return out;
}

}  // namespace noma
