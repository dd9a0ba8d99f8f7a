// SPDX-License-Identifier: Apache-2.0
#include "noma/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "noma/errors.hpp"

namespace noma::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_integer(double s) { return s == std::floor(s) && s < 1e9; }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

// e^{-x} x^s / Γ(s+1) Σ_k x^k / ((s+1)...(s+k)); converges fast for x < s + 1.
double lower_series(double s, double x) {
  const double log_prefix = s * std::log(x) - x - std::lgamma(s + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (term < kEps * sum) break;
  }
  return std::exp(log_prefix) * sum;
}

// e^{-x} Σ_{k<n} x^k / k!, each term formed in log space so that x > 745
// does not zero the prefactor before the polynomial can compensate.
double poisson_head(int n, double x) {
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    sum += std::exp(k * log_x - x - std::lgamma(k + 1.0));
  }
  return sum;
}

void validate_gamma_args(double s, double x) {
  require_finite(s, "incomplete gamma");
  require_finite(x, "incomplete gamma");
  if (s <= 0.0) throw DomainError("incomplete gamma: shape must be positive");
  if (x < 0.0) throw DomainError("incomplete gamma: argument must be nonnegative");
}

// Miller recurrence without any debug cross-check. The sum mixes signs once
// a > ρ(power+1), so it runs in 113-bit precision.
std::vector<double> miller_recurrence(const SeriesCoefficients& base, int power,
                                      int max_degree) {
  using Wide = boost::multiprecision::cpp_bin_float_quad;
  std::vector<Wide> theta(static_cast<std::size_t>(max_degree) + 1, Wide(0));
  theta[0] = 1;
  const Wide c0 = base[0];
  const int top = base.cutoff() - 1;
  for (int a = 1; a <= max_degree; ++a) {
    Wide acc = 0;
    for (int rho = 1; rho <= std::min(a, top); ++rho) {
      acc += Wide(rho * (power + 1) - a) * base[static_cast<std::size_t>(rho)] *
             theta[static_cast<std::size_t>(a - rho)];
    }
    theta[static_cast<std::size_t>(a)] = acc / (a * c0);
  }
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = static_cast<double>(theta[i]);
  return out;
}

}  // namespace

double gamma_fn(double x) {
  require_finite(x, "gamma_fn");
  if (x <= 0.0) throw DomainError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

double lower_incomplete_gamma_regularized(double s, double x) {
  validate_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (!is_integer(s)) return boost::math::gamma_p(s, x);
  if (x < s + 1.0) return std::min(1.0, lower_series(s, x));
  return 1.0 - poisson_head(static_cast<int>(s), x);
}

double upper_incomplete_gamma_regularized(double s, double x) {
  validate_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (!is_integer(s)) return boost::math::gamma_q(s, x);
  if (x < s + 1.0) return 1.0 - std::min(1.0, lower_series(s, x));
  return poisson_head(static_cast<int>(s), x);
}

SeriesCoefficients::SeriesCoefficients(std::vector<double> base) : base_(std::move(base)) {
  if (base_.empty()) throw DomainError("SeriesCoefficients: cutoff must be positive");
  if (base_.front() == 0.0) throw DomainError("SeriesCoefficients: leading coefficient is zero");
  for (double c : base_) require_finite(c, "SeriesCoefficients");
}

SeriesCoefficients SeriesCoefficients::truncated_exponential(double rate, int cutoff) {
  if (cutoff < 1) throw DomainError("truncated_exponential: cutoff must be positive");
  std::vector<double> c(static_cast<std::size_t>(cutoff));
  c[0] = 1.0;
  for (int k = 1; k < cutoff; ++k) {
    c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * rate / k;
  }
  return SeriesCoefficients(std::move(c));
}

std::vector<double> multinomial_coeffs(const SeriesCoefficients& base, int power,
                                       int max_degree) {
  if (power < 0) throw ContractError("multinomial_coeffs: power must be nonnegative");
  if (max_degree < 0 || max_degree > power * (base.cutoff() - 1)) {
    throw ContractError("multinomial_coeffs: max_degree exceeds power * (cutoff - 1)");
  }
  auto theta = miller_recurrence(base, power, max_degree);

#ifndef NDEBUG
  // The recurrence indexing is easy to get wrong; compare with plain
  // convolution in debug builds.
  std::vector<double> direct{1.0};
  for (int b = 0; b < power; ++b) {
    std::vector<double> next(direct.size() + base.values().size() - 1, 0.0);
    for (std::size_t i = 0; i < direct.size(); ++i) {
      for (std::size_t j = 0; j < base.values().size(); ++j) {
        next[i + j] += direct[i] * base[j] / base[0];
      }
    }
    direct = std::move(next);
  }
  for (std::size_t a = 0; a < theta.size(); ++a) {
    const double scale = std::max(std::abs(direct[a]), 1e-300);
    if (std::abs(theta[a] - direct[a]) > 1e-9 * scale) {
      throw std::logic_error("multinomial_coeffs: recurrence disagrees with convolution");
    }
  }
#endif
  return theta;
}

std::vector<double> multinomial_coeffs(const SeriesCoefficients& base, int power) {
  if (power < 0) throw ContractError("multinomial_coeffs: power must be nonnegative");
  return multinomial_coeffs(base, power, power * (base.cutoff() - 1));
}

double bessel_k_scaled(int order, double x) {
  return bessel_k_scaled_sequence(order, x).back();
}

std::vector<double> bessel_k_scaled_sequence(int max_order, double x) {
  require_finite(x, "bessel_k");
  if (x <= 0.0) throw DomainError("bessel_k: argument must be positive");
  if (max_order < 0) throw DomainError("bessel_k: order must be nonnegative");

  // e^x K_ν(x) = ∫_0^∞ exp(-x (cosh t - 1)) cosh(ν t) dt, with
  // cosh t - 1 = 2 sinh²(t/2) to keep the exponent accurate near t = 0.
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  auto excess = [x](double t) {
    const double sh = std::sinh(0.5 * t);
    return x * 2.0 * sh * sh;
  };
  auto k0 = [&](double t) { return std::exp(-excess(t)); };
  auto k1 = [&](double t) {
    const double e = excess(t);
    return 0.5 * (std::exp(t - e) + std::exp(-t - e));
  };
  constexpr double tol = 1e-14;
  std::vector<double> k(static_cast<std::size_t>(std::max(max_order, 1)) + 1);
  k[0] = integrator.integrate(k0, tol, nullptr, nullptr, nullptr);
  k[1] = integrator.integrate(k1, tol, nullptr, nullptr, nullptr);
  for (int nu = 1; nu < max_order; ++nu) {
    k[static_cast<std::size_t>(nu + 1)] =
        k[static_cast<std::size_t>(nu - 1)] + (2.0 * nu / x) * k[static_cast<std::size_t>(nu)];
  }
  k.resize(static_cast<std::size_t>(max_order) + 1);
  return k;
}

double bessel_k(int order, double x) { return bessel_k_scaled(order, x) * std::exp(-x); }

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("binomial: requires 0 <= k <= n");
  if (n <= 66) {
    k = std::min(k, n - k);
    __extension__ unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
      c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    }
    return static_cast<double>(static_cast<std::uint64_t>(c));
  }
  return std::exp(log_binomial(n, k));
}

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("log_binomial: requires 0 <= k <= n");
  if (n <= 66) {
    // Exact integer first; the logarithm then carries a single rounding.
    k = std::min(k, n - k);
    __extension__ unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
      c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    }
    return std::log(static_cast<double>(static_cast<std::uint64_t>(c)));
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: n must be nonnegative");
  return std::lgamma(n + 1.0);
}

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
  abs_sum_ += std::abs(term);
  ++count_;
}

}  // namespace noma::specfun
