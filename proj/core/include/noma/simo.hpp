// SPDX-License-Identifier: Apache-2.0
//
// Downlink SIMO-NOMA: single-antenna base station, N_r-antenna users with
// maximal ratio combining, i.i.d. Nakagami-m branches.
//
// Ω is the per-branch mean power, so the combined gain is Gamma(m N_r, Ω/m).
#pragma once

#include <vector>

#include "noma/channel.hpp"
#include "noma/outage.hpp"
#include "noma/rates.hpp"

namespace noma {

struct SimoScenario {
  PowerAllocation alloc;
  NakagamiSpec link;
  int branches;
  SinrThresholds thresholds;

  SimoScenario(PowerAllocation alloc, NakagamiSpec link, int branches,
               SinrThresholds thresholds);

  [[nodiscard]] int users() const noexcept { return static_cast<int>(alloc.size()); }
};

/// SINR at the rank-l user when decoding layer j (j <= l, j != L unless
/// j = l = L), given its combined gain ‖h_l‖².
double simo_sinr(const SimoScenario& scen, int rank, int target, double gain, SnrPoint snr);

/// η_l* for the scenario, or nullopt when infeasible.
std::optional<double> simo_outage_threshold(const SimoScenario& scen, int rank, SnrPoint snr);

/// Outage probability of the rank-l user from the explicit order-statistic
/// series
///   Q Σ_t Σ_r Σ_s (-1)^{t+r}/(l+t) C(L-l,t) C(l+t,r) ϑ_s(r, mN_r) η^s e^{-r m η/Ω}
/// with ϑ built on the coefficients (m/Ω)^ρ/ρ!, ρ < mN_r.
///
/// The result is cross-checked against simo_outage_ordered_cdf; disagreement
/// beyond 1e-8 relative plus the series rounding bound throws NumericalError.
/// Infeasible thresholds give exactly 1. Integer m only.
OutageResult simo_outage_closed_form(const SimoScenario& scen, int rank, SnrPoint snr);

/// The explicit series alone, without the cross-check.
OutageResult simo_outage_series(const SimoScenario& scen, int rank, SnrPoint snr);

/// Outage probability as the ordered-gain CDF evaluated at η_l*.
OutageResult simo_outage_ordered_cdf(const SimoScenario& scen, int rank, SnrPoint snr);

/// OMA baseline: the rank-l user alone on its resource must clear the
/// rate-equivalent threshold Π(1 + γ_th,i) - 1, i.e. P(‖h_l‖² < γ_th / γ).
OutageResult simo_oma_outage(const SimoScenario& scen, int rank, SnrPoint snr);

enum class AsymptoteForm {
  /// ξ = ln(a_L γ Ω / (m k)) / (a_L γ) for the n = 0 terms.
  kReference,
  /// Adds the -γ_E (Euler–Mascheroni) term of e^c E_1(c) = -γ_E - ln c + o(1)
  /// that the reference n = 0 approximation drops.
  kEulerCorrected,
};

struct ErgodicAsymptote {
  std::vector<double> per_user;  ///< high-SNR ergodic rate of each rank, bits/s/Hz
  double sum = 0.0;
};

/// High-SNR ergodic sum rate with the 1/2 pre-log:
///   weak users:  (1/2) log2(1 + a_l / Σ_{i>l} a_i)
///   user L:      a_L γ/(2 ln 2) Σ_k Σ_n C(L,k) (-1)^{k+1} ϑ_n(k, mN_r) ξ_{n,k}
/// with ξ_{n,k} = Γ(n)(Ω/(m k))^n / (a_L γ) for n > 0. Integer m only.
ErgodicAsymptote simo_ergodic_sum_rate_asymptotic(const SimoScenario& scen, SnrPoint snr,
                                                  AsymptoteForm form = AsymptoteForm::kReference);

}  // namespace noma
