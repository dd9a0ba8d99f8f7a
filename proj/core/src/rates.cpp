// SPDX-License-Identifier: Apache-2.0
#include "noma/rates.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "noma/errors.hpp"

namespace noma {
namespace {

constexpr double kShareTolerance = 1e-12;

void check_index(int index, std::size_t size, const char* what) {
  if (index < 1 || static_cast<std::size_t>(index) > size) {
    throw ContractError(std::string(what) + ": index " + std::to_string(index) +
                        " outside [1, " + std::to_string(size) + "]");
  }
}

void check_same_size(const PowerAllocation& alloc, const GainProfile& gains) {
  if (alloc.size() != gains.size()) {
    throw ContractError("power allocation and gain profile have different user counts");
  }
}

}  // namespace

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

SnrPoint SnrPoint::from_linear(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0) throw ContractError("SNR must be positive");
  return SnrPoint(gamma);
}

SnrPoint SnrPoint::from_db(double gamma_db) {
  if (!std::isfinite(gamma_db)) throw ContractError("SNR in dB must be finite");
  return from_linear(db_to_linear(gamma_db));
}

double SnrPoint::db() const noexcept { return linear_to_db(gamma_); }

PowerAllocation::PowerAllocation(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ContractError("PowerAllocation: no users");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i]) || coeffs_[i] <= 0.0) {
      throw ContractError("PowerAllocation: coefficients must be positive");
    }
    if (i > 0 && coeffs_[i] > coeffs_[i - 1]) {
      throw ContractError("PowerAllocation: coefficients must be non-increasing (a_1 >= a_2 >= ...)");
    }
  }
  const double total = std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0);
  if (std::abs(total - 1.0) > kShareTolerance) {
    throw ContractError("PowerAllocation: coefficients must sum to 1");
  }
  tail_.assign(coeffs_.size() + 1, 0.0);
  for (std::size_t j = coeffs_.size(); j-- > 0;) tail_[j] = tail_[j + 1] + coeffs_[j];
}

double PowerAllocation::at(int j) const {
  check_index(j, coeffs_.size(), "PowerAllocation");
  return coeffs_[static_cast<std::size_t>(j - 1)];
}

double PowerAllocation::residual_after(int j) const {
  check_index(j, coeffs_.size(), "PowerAllocation");
  return tail_[static_cast<std::size_t>(j)];
}

GainProfile::GainProfile(std::vector<double> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) throw ContractError("GainProfile: no users");
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    if (!std::isfinite(gains_[i]) || gains_[i] < 0.0) {
      throw ContractError("GainProfile: gains must be nonnegative");
    }
    if (i > 0 && gains_[i] < gains_[i - 1]) {
      throw ContractError("GainProfile: gains must be sorted ascending");
    }
  }
}

double GainProfile::at(int l) const {
  check_index(l, gains_.size(), "GainProfile");
  return gains_[static_cast<std::size_t>(l - 1)];
}

SinrThresholds::SinrThresholds(std::vector<double> gamma_th) : values_(std::move(gamma_th)) {
  if (values_.empty()) throw ContractError("SinrThresholds: no users");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ContractError("SinrThresholds: thresholds must be finite and nonnegative");
    }
  }
}

double SinrThresholds::at(int j) const {
  check_index(j, values_.size(), "SinrThresholds");
  return values_[static_cast<std::size_t>(j - 1)];
}

double log2_1p(double x) noexcept { return std::log1p(x) / std::numbers::ln2; }

double dl_sinr_cross(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr,
                     int decoder, int target) {
  check_same_size(alloc, gains);
  const int big_l = static_cast<int>(alloc.size());
  check_index(decoder, alloc.size(), "dl_sinr_cross decoder");
  check_index(target, alloc.size(), "dl_sinr_cross target");
  if (target > decoder) throw ContractError("dl_sinr_cross: target must not exceed decoder");
  if (target == big_l) throw ContractError("dl_sinr_cross: use dl_sinr_own for user L");
  const double rx = snr.linear() * gains.at(decoder);
  return alloc.at(target) * rx / (rx * alloc.residual_after(target) + 1.0);
}

double dl_sinr_own(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr,
                   int user) {
  check_same_size(alloc, gains);
  check_index(user, alloc.size(), "dl_sinr_own");
  if (user == static_cast<int>(alloc.size())) {
    return alloc.at(user) * snr.linear() * gains.at(user);
  }
  return dl_sinr_cross(alloc, gains, snr, user, user);
}

double dl_sum_rate(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr) {
  check_same_size(alloc, gains);
  double total = 0.0;
  for (int l = 1; l <= static_cast<int>(alloc.size()); ++l) {
    total += log2_1p(dl_sinr_own(alloc, gains, snr, l));
  }
  return total;
}

double dl_sum_rate_high_snr(const PowerAllocation& alloc, const GainProfile& gains,
                            SnrPoint snr) {
  check_same_size(alloc, gains);
  const int big_l = static_cast<int>(alloc.size());
  double total = 0.0;
  for (int l = 1; l < big_l; ++l) total += log2_1p(alloc.at(l) / alloc.residual_after(l));
  return total + std::log2(snr.linear() * gains.at(big_l));
}

double ul_sinr(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr, int user) {
  check_same_size(alloc, gains);
  check_index(user, alloc.size(), "ul_sinr");
  double interference = 0.0;
  for (int i = 1; i < user; ++i) interference += alloc.at(i) * gains.at(i);
  const double gamma = snr.linear();
  return alloc.at(user) * gamma * gains.at(user) / (gamma * interference + 1.0);
}

double ul_sum_rate(const PowerAllocation& alloc, const GainProfile& gains, SnrPoint snr) {
  check_same_size(alloc, gains);
  double total = 0.0;
  for (int l = 1; l <= static_cast<int>(alloc.size()); ++l) {
    total += log2_1p(ul_sinr(alloc, gains, snr, l));
  }
  return total;
}

double ul_sum_rate_closed(const PowerAllocation& alloc, const GainProfile& gains,
                          SnrPoint snr) {
  check_same_size(alloc, gains);
  double received = 0.0;
  for (int l = 1; l <= static_cast<int>(alloc.size()); ++l) {
    received += alloc.at(l) * gains.at(l);
  }
  return log2_1p(snr.linear() * received);
}

double oma_sum_rate(const GainProfile& gains, SnrPoint snr, std::span<const double> bandwidth,
                    std::span<const double> power) {
  if (bandwidth.size() != gains.size() || power.size() != gains.size()) {
    throw ContractError("oma_sum_rate: share vectors must have one entry per user");
  }
  auto check_shares = [](std::span<const double> shares, const char* what) {
    double total = 0.0;
    for (double s : shares) {
      if (!std::isfinite(s) || s <= 0.0) {
        throw ContractError(std::string("oma_sum_rate: ") + what + " shares must be positive");
      }
      total += s;
    }
    if (std::abs(total - 1.0) > kShareTolerance) {
      throw ContractError(std::string("oma_sum_rate: ") + what + " shares must sum to 1");
    }
  };
  check_shares(bandwidth, "bandwidth");
  check_shares(power, "power");
  double total = 0.0;
  for (std::size_t l = 0; l < gains.size(); ++l) {
    total += bandwidth[l] * log2_1p(power[l] * snr.linear() * gains.gains()[l] / bandwidth[l]);
  }
  return total;
}

double oma_sum_rate(const GainProfile& gains, SnrPoint snr) {
  double total = 0.0;
  for (double g : gains.gains()) total += log2_1p(snr.linear() * g);
  return total / static_cast<double>(gains.size());
}

double oma_equivalent_threshold(const SinrThresholds& thresholds) {
  double product = 1.0;
  for (double t : thresholds.values()) product *= 1.0 + t;
  return product - 1.0;
}

}  // namespace noma
