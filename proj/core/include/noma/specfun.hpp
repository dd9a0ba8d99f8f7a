// SPDX-License-Identifier: Apache-2.0
//
// Special functions used by the closed-form outage and rate expressions.
//
// Everything in this header is a pure function of its arguments and may be
// called from any number of threads.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace noma::specfun {

/// Γ(x) for x > 0. Throws DomainError otherwise.
double gamma_fn(double x);

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
///
/// Integer shapes go through the finite Poisson sum
/// 1 - e^{-x} Σ_{k<s} x^k / k!, switching to the convergent power series
/// below x < s so that small probabilities keep full relative precision.
/// Real shapes are delegated to Boost.Math.
double lower_incomplete_gamma_regularized(double s, double x);

/// Complement Q(s, x) = 1 - P(s, x), evaluated without forming 1 - P.
double upper_incomplete_gamma_regularized(double s, double x);

/// Truncated power series c_0 + c_1 x + ... + c_{g-1} x^{g-1}; coefficients
/// past the cutoff are exactly zero.
class SeriesCoefficients {
 public:
  explicit SeriesCoefficients(std::vector<double> base);

  /// Coefficients (rate x)^k / k! for k < cutoff, i.e. the truncated
  /// exponential series that appears in the Gamma CDF.
  static SeriesCoefficients truncated_exponential(double rate, int cutoff);

  [[nodiscard]] int cutoff() const noexcept { return static_cast<int>(base_.size()); }
  [[nodiscard]] std::span<const double> values() const noexcept { return base_; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept {
    return i < base_.size() ? base_[i] : 0.0;
  }

 private:
  std::vector<double> base_;
};

/// Coefficients ϑ_0..ϑ_{max_degree} of (Σ c_ρ x^ρ)^power / c_0^power, from the
/// J.C.P. Miller recurrence
///   ϑ_a = 1/(a c_0) Σ_{ρ=1}^{a} (ρ(power+1) - a) c_ρ ϑ_{a-ρ},  ϑ_0 = 1.
/// Requires max_degree <= power * (cutoff - 1).
std::vector<double> multinomial_coeffs(const SeriesCoefficients& base, int power,
                                       int max_degree);

/// Same as above with max_degree = power * (cutoff - 1), i.e. the full expansion.
std::vector<double> multinomial_coeffs(const SeriesCoefficients& base, int power);

/// Modified Bessel function of the second kind K_ν(x), integer ν >= 0, x > 0.
double bessel_k(int order, double x);

/// e^x K_ν(x). Does not underflow for large x.
double bessel_k_scaled(int order, double x);

/// e^x K_0(x) .. e^x K_{max_order}(x) in one pass (upward recurrence).
std::vector<double> bessel_k_scaled_sequence(int max_order, double x);

/// ln C(n, k). Exact to rounding for n <= 66 (computed from the exact integer).
double log_binomial(int n, int k);

/// C(n, k) as a double; exact for n <= 66.
double binomial(int n, int k);

/// ln n!
double log_factorial(int n);

/// Neumaier-compensated accumulator that also tracks Σ|term|, which is what
/// rounding error in an alternating sum scales with.
class CompensatedSum {
 public:
  void add(double term) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }
  [[nodiscard]] double abs_sum() const noexcept { return abs_sum_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double abs_sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace noma::specfun
