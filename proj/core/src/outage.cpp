// SPDX-License-Identifier: Apache-2.0
#include "noma/outage.hpp"

#include <algorithm>
#include <string>

#include "noma/errors.hpp"

namespace noma {

std::string_view to_string(OutageSource source) noexcept {
  switch (source) {
    case OutageSource::kSimoSeries: return "simo-order-statistic-series";
    case OutageSource::kSimoOrderedCdf: return "simo-ordered-cdf";
    case OutageSource::kSimoOmaOrderedCdf: return "simo-oma-ordered-cdf";
    case OutageSource::kCoopSeries: return "coop-bessel-series";
    case OutageSource::kCoopQuadrature: return "coop-quadrature";
    case OutageSource::kInfeasible: return "infeasible";
    case OutageSource::kZeroThreshold: return "zero-threshold";
  }
  return "unknown";
}

std::optional<double> outage_gain_threshold(const PowerAllocation& alloc,
                                            const SinrThresholds& thresholds, SnrPoint snr,
                                            int rank) {
  if (thresholds.size() != alloc.size()) {
    throw ContractError("thresholds and power allocation have different user counts");
  }
  if (rank < 1 || rank > static_cast<int>(alloc.size())) {
    throw ContractError("rank " + std::to_string(rank) + " outside [1, L]");
  }
  double eta = 0.0;
  for (int j = 1; j <= rank; ++j) {
    const double th = thresholds.at(j);
    if (th == 0.0) continue;
    const double margin = alloc.at(j) - th * alloc.residual_after(j);
    if (margin <= 0.0) return std::nullopt;
    eta = std::max(eta, th / (snr.linear() * margin));
  }
  return eta;
}

}  // namespace noma
