// SPDX-License-Identifier: Apache-2.0
//
// Nakagami-m fading: the squared envelope of one branch is Gamma(m, Ω/m);
// the MRC aggregate of N_r i.i.d. branches is Gamma(m N_r, Ω/m). Users are
// ranked by gain, so the rank-l gain among L users is an order statistic.
#pragma once

#include <random>

#include "noma/random.hpp"

namespace noma {

/// Shape m >= 0.5 and per-branch mean power Ω = E[|h|²] > 0.
class NakagamiSpec {
 public:
  NakagamiSpec(double m, double omega);

  [[nodiscard]] double m() const noexcept { return m_; }
  [[nodiscard]] double omega() const noexcept { return omega_; }
  [[nodiscard]] bool has_integer_shape() const noexcept;

  /// m as an integer; throws UnsupportedError for non-integer shapes.
  [[nodiscard]] int integer_shape() const;

 private:
  double m_;
  double omega_;
};

/// Rank `rank` (1 = weakest) of `count` i.i.d. MRC gains over `branches`
/// antennas of `link`. Ranks ascend with gain.
struct OrderedEnsemble {
  int count = 1;
  int rank = 1;
  NakagamiSpec link{1.0, 1.0};
  int branches = 1;

  /// Throws ContractError unless 1 <= rank <= count and branches >= 1.
  void validate() const;
};

/// CDF of the unordered MRC gain: P(m N_r, m x / Ω). Integer m only.
double gamma_gain_cdf(const NakagamiSpec& link, int branches, double x);

/// 1 - gamma_gain_cdf, computed directly.
double gamma_gain_survival(const NakagamiSpec& link, int branches, double x);

/// Density of the unordered MRC gain.
double gamma_gain_pdf(const NakagamiSpec& link, int branches, double x);

/// CDF of the rank-l order statistic,
///   (L!/((L-l)!(l-1)!)) Σ_t (-1)^t/(l+t) C(L-l,t) F(x)^{l+t}.
/// Evaluated through the equivalent binomial tail Σ_{j>=l} C(L,j) F^j (1-F)^{L-j},
/// which has no cancellation.
double ordered_gain_cdf(const OrderedEnsemble& ens, double x);

/// Density of the rank-l order statistic, Q f(x) F(x)^{l-1} (1-F(x))^{L-l}.
double ordered_gain_pdf(const OrderedEnsemble& ens, double x);

/// One draw of the MRC gain, Gamma(m N_r, Ω/m). Real m is accepted here.
template <typename Rng>
double sample_squared_gain(const NakagamiSpec& link, int branches, Rng& rng) {
  std::gamma_distribution<double> dist(link.m() * branches, link.omega() / link.m());
  return dist(rng);
}

}  // namespace noma
