// SPDX-License-Identifier: Apache-2.0
#include "noma/channel.hpp"

#include <cmath>
#include <string>

#include "noma/errors.hpp"
#include "noma/specfun.hpp"

namespace noma {

NakagamiSpec::NakagamiSpec(double m, double omega) : m_(m), omega_(omega) {
  if (!std::isfinite(m) || m < 0.5) {
    throw ContractError("NakagamiSpec: shape m must be >= 0.5, got " + std::to_string(m));
  }
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw ContractError("NakagamiSpec: mean power must be positive");
  }
}

bool NakagamiSpec::has_integer_shape() const noexcept { return m_ == std::floor(m_); }

int NakagamiSpec::integer_shape() const {
  if (!has_integer_shape()) {
    throw UnsupportedError("closed-form path requires integer Nakagami m, got " +
                           std::to_string(m_));
  }
  return static_cast<int>(m_);
}

void OrderedEnsemble::validate() const {
  if (count < 1) throw ContractError("OrderedEnsemble: count must be >= 1");
  if (rank < 1 || rank > count) throw ContractError("OrderedEnsemble: rank outside [1, count]");
  if (branches < 1) throw ContractError("OrderedEnsemble: branches must be >= 1");
}

namespace {

void check_branches(int branches) {
  if (branches < 1) throw ContractError("branch count must be >= 1");
}

void check_x(double x) {
  if (!(x >= 0.0)) throw DomainError("gain argument must be nonnegative");
}

}  // namespace

double gamma_gain_cdf(const NakagamiSpec& link, int branches, double x) {
  check_branches(branches);
  check_x(x);
  const int m = link.integer_shape();
  return specfun::lower_incomplete_gamma_regularized(m * branches, m * x / link.omega());
}

double gamma_gain_survival(const NakagamiSpec& link, int branches, double x) {
  check_branches(branches);
  check_x(x);
  const int m = link.integer_shape();
  return specfun::upper_incomplete_gamma_regularized(m * branches, m * x / link.omega());
}

double gamma_gain_pdf(const NakagamiSpec& link, int branches, double x) {
  check_branches(branches);
  check_x(x);
  const int m = link.integer_shape();
  const double shape = static_cast<double>(m) * branches;
  const double rate = m / link.omega();
  if (x == 0.0) return shape == 1.0 ? rate : 0.0;
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

double ordered_gain_cdf(const OrderedEnsemble& ens, double x) {
  ens.validate();
  const double f = gamma_gain_cdf(ens.link, ens.branches, x);
  const double s = gamma_gain_survival(ens.link, ens.branches, x);
  if (f == 0.0) return 0.0;
  const int big_l = ens.count;
  double total = 0.0;
  for (int j = ens.rank; j <= big_l; ++j) {
    total += specfun::binomial(big_l, j) * std::pow(f, j) * std::pow(s, big_l - j);
  }
  return std::min(total, 1.0);
}

double ordered_gain_pdf(const OrderedEnsemble& ens, double x) {
  ens.validate();
  const double density = gamma_gain_pdf(ens.link, ens.branches, x);
  if (density == 0.0) return 0.0;
  const int big_l = ens.count;
  const int l = ens.rank;
  const double f = gamma_gain_cdf(ens.link, ens.branches, x);
  const double s = gamma_gain_survival(ens.link, ens.branches, x);
  const double log_q = specfun::log_factorial(big_l) - specfun::log_factorial(big_l - l) -
                       specfun::log_factorial(l - 1);
  return std::exp(log_q) * density * std::pow(f, l - 1) * std::pow(s, big_l - l);
}

}  // namespace noma
