// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "noma/rates.hpp"

namespace noma {

/// Which evaluation route produced an outage probability.
enum class OutageSource {
  kSimoSeries,        ///< order-statistic triple sum with multinomial coefficients
  kSimoOrderedCdf,    ///< ordered-gain CDF evaluated at the gain threshold
  kSimoOmaOrderedCdf, ///< OMA baseline at the rate-equivalent threshold
  kCoopSeries,        ///< six-fold Bessel-K series for the AF relay link
  kCoopQuadrature,    ///< direct quadrature of the AF relay outage integral
  kInfeasible,        ///< some SIC stage can never reach its threshold
  kZeroThreshold,     ///< all required thresholds are zero
};

std::string_view to_string(OutageSource source) noexcept;

/// Outage probability with the route that produced it.
///
/// `error_bound` is an absolute bound on rounding error for series routes
/// (Σ|term| times the per-term relative error) and the quadrature error
/// estimate for integral routes. Zero for exact special cases.
struct OutageResult {
  double probability = 1.0;
  double error_bound = 0.0;
  OutageSource source = OutageSource::kInfeasible;
};

/// Effective gain threshold η_l* = max_{j<=l} γ_th,j / (γ (a_j - γ_th,j Σ_{i>j} a_i)).
///
/// The rank-l user decodes every layer j <= l exactly when its gain exceeds
/// η_l*. Returns nullopt when some stage has a_j <= γ_th,j Σ_{i>j} a_i, in
/// which case no gain is large enough.
std::optional<double> outage_gain_threshold(const PowerAllocation& alloc,
                                            const SinrThresholds& thresholds, SnrPoint snr,
                                            int rank);

}  // namespace noma
