// SPDX-License-Identifier: Apache-2.0
//
// Instantaneous SINR and achievable rates for power-domain NOMA and the
// orthogonal baseline. Users are indexed 1..L in ascending channel gain;
// all public index arguments are 1-based.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace noma {

/// Transmit SNR γ = P/σ², stored linear. dB conversion is 10 log10 throughout.
class SnrPoint {
 public:
  static SnrPoint from_linear(double gamma);
  static SnrPoint from_db(double gamma_db);

  [[nodiscard]] double linear() const noexcept { return gamma_; }
  [[nodiscard]] double db() const noexcept;

 private:
  explicit SnrPoint(double gamma) : gamma_(gamma) {}
  double gamma_;
};

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Power coefficients a_1 >= a_2 >= ... >= a_L > 0 with Σ a = 1 (1e-12).
class PowerAllocation {
 public:
  explicit PowerAllocation(std::vector<double> coeffs);

  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  /// a_j, 1-based.
  [[nodiscard]] double at(int j) const;
  /// Σ_{i=j+1}^{L} a_i: power still undecoded after stage j. Zero for j = L.
  [[nodiscard]] double residual_after(int j) const;

 private:
  std::vector<double> coeffs_;
  std::vector<double> tail_;  // tail_[j] = Σ_{i>j} a_i, j = 0..L
};

/// Linear power gains |h_1|² <= ... <= |h_L|².
class GainProfile {
 public:
  explicit GainProfile(std::vector<double> gains);

  [[nodiscard]] std::size_t size() const noexcept { return gains_.size(); }
  [[nodiscard]] std::span<const double> gains() const noexcept { return gains_; }
  [[nodiscard]] double at(int l) const;

 private:
  std::vector<double> gains_;
};

/// Per-user SIC decoding thresholds γ_th,1..γ_th,L (linear, >= 0).
class SinrThresholds {
 public:
  explicit SinrThresholds(std::vector<double> gamma_th);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double at(int j) const;

 private:
  std::vector<double> values_;
};

/// log2(1 + x) without losing digits for small x.
double log2_1p(double x) noexcept;

/// Downlink SINR of user l decoding user j's layer (1 <= j <= l, j != L):
///   a_j γ|h_l|² / (γ|h_l|² Σ_{i>j} a_i + 1).
double dl_sinr_cross(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr,
                     int decoder, int target);

/// Downlink SINR of user l for its own layer; user L sees no interference.
double dl_sinr_own(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr,
                   int user);

/// Downlink NOMA sum rate Σ_l log2(1 + SINR_l), bits/s/Hz.
double dl_sum_rate(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr);

/// High-SNR form of the downlink sum rate:
///   Σ_{l<L} log2(1 + a_l / Σ_{i>l} a_i) + log2(γ|h_L|²).
double dl_sum_rate_high_snr(const PowerAllocation& alloc, const GainProfile& gains,
                            SnrPoint snr);

/// Uplink SINR of user l: a_l γ|h_l|² / (γ Σ_{i<l} a_i|h_i|² + 1); user 1 is
/// interference free.
double ul_sinr(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr, int user);

/// Uplink sum rate as the sum of per-user rates.
double ul_sum_rate(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr);

/// Uplink sum rate in telescoped form log2(1 + γ Σ a_l|h_l|²).
double ul_sum_rate_closed(const PowerAllocation& alloc, const GainProfile& gains,
                          SnrPoint snr);

/// OMA sum rate Σ α_l log2(1 + β_l γ|h_l|² / α_l). Both share vectors must
/// sum to one (1e-12) and be positive.
double oma_sum_rate(const GainProfile& gains, SnrPoint snr, std::span<const double> bandwidth,
                    std::span<const double> power);

/// Equal-share FDMA: Σ (1/L) log2(1 + γ|h_l|²).
double oma_sum_rate(const GainProfile& gains, SnrPoint snr);

/// OMA threshold carrying the same total target rate: Π (1 + γ_th,i) - 1.
double oma_equivalent_threshold(const SinrThresholds& thresholds);

}  // namespace noma
