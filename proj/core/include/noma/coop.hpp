// SPDX-License-Identifier: Apache-2.0
//
// Dual-hop amplify-and-forward relaying for downlink NOMA with no direct
// link: BS -> relay (gain X = |h_SR|²), relay -> user l (gain Y = |h_RU_l|²),
// variable relay gain G = sqrt(P_R / (P_s X + σ²)), P_s = P_R, equal noise
// variances. The L relay-to-user gains are ranked ascending.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "noma/channel.hpp"
#include "noma/outage.hpp"
#include "noma/rates.hpp"

namespace noma {

/// Normalized BS-relay distance d in (0, 1) and path-loss exponent κ.
/// Mean powers follow Ω_SR = d^{-κ}, Ω_RU = (1 - d)^{-κ}.
class RelayGeometry {
 public:
  RelayGeometry(double d_sr, double kappa);

  [[nodiscard]] double d_sr() const noexcept { return d_sr_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] double omega_sr() const noexcept;
  [[nodiscard]] double omega_ru() const noexcept;

 private:
  double d_sr_;
  double kappa_;
};

class CoopScenario {
 public:
  CoopScenario(PowerAllocation alloc, NakagamiSpec hop_sr, NakagamiSpec hop_ru,
               SinrThresholds thresholds, SnrPoint snr);

  /// Hops from geometry, with shapes m_SR and m_RU.
  static CoopScenario from_geometry(PowerAllocation alloc, SinrThresholds thresholds,
                                    const RelayGeometry& geometry, double m_sr, double m_ru,
                                    SnrPoint snr);

  [[nodiscard]] const PowerAllocation& alloc() const noexcept { return alloc_; }
  [[nodiscard]] const NakagamiSpec& hop_sr() const noexcept { return hop_sr_; }
  [[nodiscard]] const NakagamiSpec& hop_ru() const noexcept { return hop_ru_; }
  [[nodiscard]] const SinrThresholds& thresholds() const noexcept { return thresholds_; }
  [[nodiscard]] SnrPoint snr() const noexcept { return snr_; }
  [[nodiscard]] int users() const noexcept { return static_cast<int>(alloc_.size()); }

  /// a_j - γ_th,j Σ_{i>j} a_i per stage, computed at construction.
  [[nodiscard]] std::span<const double> feasibility_margins() const noexcept { return margins_; }
  /// True when every stage j <= rank has a positive margin (or zero threshold).
  [[nodiscard]] bool feasible(int rank) const;

  [[nodiscard]] CoopScenario with_snr(SnrPoint snr) const;

 private:
  PowerAllocation alloc_;
  NakagamiSpec hop_sr_;
  NakagamiSpec hop_ru_;
  SinrThresholds thresholds_;
  SnrPoint snr_;
  std::vector<double> margins_;
};

/// End-to-end SINR at the rank-l user for layer j <= l:
///   a_j γ²XY / (γ²XY Σ_{i>j} a_i + γ(X + Y) + 1).
double coop_sinr_cross(const CoopScenario& scen, int rank, int target, double gain_sr,
                       double gain_ru);

/// Own-layer SINR of the rank-l user (target = rank).
double coop_sinr(const CoopScenario& scen, int rank, double gain_sr, double gain_ru);

std::optional<double> coop_outage_threshold(const CoopScenario& scen, int rank);

/// Closed-form outage of the rank-l user,
///   1 - Q Σ_{k,n,t,p,i,q} (-1)^{t+k} C(L-l,k) C(l+k-1,t) C(n,i) C(p+m_RU-1,q)
///       ϑ_p(t, m_RU) / (n! Γ(m_RU)) (m_RU/Ω_RU)^{(2m_RU-q+i-1)/2}
///       ρ^{(i+q+1)/2} (t+1)^{-(q-i+1)/2} (m_SR/Ω_SR)^{n-i} η^{n-i+p+m_RU-1-q}
///       e^{-η m_RU (t+1)/Ω_RU} e^{-η m_SR/Ω_SR} 2 K_{q-i+1}(2 sqrt(ρ m_RU (t+1)/Ω_RU)),
/// ρ = η m_SR (1 + γη) / (γ Ω_SR). Terms are formed in log space and summed
/// with compensation. Throws NumericalError when the rounding bound exceeds
/// 1e-6. Integer shapes only.
OutageResult coop_outage_closed_form(const CoopScenario& scen, int rank);

/// Direct quadrature of
///   P = ∫_0^η f_Y(x) dx + ∫_η^∞ f_Y(x) F_X(η(1+γx)/(γ(x-η))) dx,
/// f_Y the rank-l relay-to-user density and F_X the BS-relay CDF. The second
/// integral is taken in u = ln(x - η). Throws NumericalError if the error
/// estimate exceeds 1e-9.
OutageResult coop_outage_numeric(const CoopScenario& scen, int rank);

namespace detail {
/// Test hook: called with the running term index and the term value; the
/// return value is what gets summed. Used to inject faults into the series.
using CoopTermHook = std::function<double(std::size_t, double)>;
OutageResult coop_outage_series(const CoopScenario& scen, int rank, const CoopTermHook& hook);
}  // namespace detail

/// Scenario family over d_SR; everything but the geometry is fixed.
struct CoopTemplate {
  PowerAllocation alloc;
  SinrThresholds thresholds;
  double m_sr = 1.0;
  double m_ru = 1.0;
  double kappa = 3.0;
  SnrPoint snr = SnrPoint::from_db(20.0);

  [[nodiscard]] CoopScenario at(double d_sr) const;
};

struct RelayOptimum {
  double d_sr = 0.0;
  double outage = 1.0;
};

/// Grid point minimising the closed-form outage of `rank`; ties go to the
/// smaller d_SR.
RelayOptimum optimal_relay_location(const CoopTemplate& family, int rank,
                                    std::span<const double> d_grid);

}  // namespace noma
