// SPDX-License-Identifier: Apache-2.0
#include "noma/coop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "noma/errors.hpp"
#include "noma/specfun.hpp"

namespace noma {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesLimit = 1e-6;
constexpr double kQuadratureLimit = 1e-9;
// Relative accuracy of the quadrature-based Bessel values, per term.
constexpr double kBesselRelError = 1e-13;
// exp(-80) is far below double resolution of a probability near one.
constexpr double kTailExponent = 80.0;

// Adaptive Gauss-Kronrod over equal panels no wider than `width`; the
// error estimates are added to `error`.
template <typename F>
double integrate_panels(const F& f, double a, double b, double width, double& error) {
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (!(b > a)) return 0.0;
  const auto panels = static_cast<int>(std::min(4096.0, std::ceil((b - a) / width)));
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == panels) ? b : lo + h;
    double err = 0.0;
    total += Integrator::integrate(f, lo, hi, 10, 1e-12, &err);
    error += err;
  }
  return total;
}

std::vector<double> stage_margins(const PowerAllocation& alloc, const SinrThresholds& th) {
  std::vector<double> margins(alloc.size());
  for (int j = 1; j <= static_cast<int>(alloc.size()); ++j) {
    margins[static_cast<std::size_t>(j - 1)] = alloc.at(j) - th.at(j) * alloc.residual_after(j);
  }
  return margins;
}

}  // namespace

RelayGeometry::RelayGeometry(double d_sr, double kappa) : d_sr_(d_sr), kappa_(kappa) {
  if (!(d_sr > 0.0 && d_sr < 1.0)) throw ContractError("RelayGeometry: d_SR must lie in (0, 1)");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ContractError("RelayGeometry: path-loss exponent must be positive");
  }
}

double RelayGeometry::omega_sr() const noexcept { return std::pow(d_sr_, -kappa_); }
double RelayGeometry::omega_ru() const noexcept { return std::pow(1.0 - d_sr_, -kappa_); }

CoopScenario::CoopScenario(PowerAllocation alloc, NakagamiSpec hop_sr, NakagamiSpec hop_ru,
                           SinrThresholds thresholds, SnrPoint snr)
    : alloc_(std::move(alloc)),
      hop_sr_(hop_sr),
      hop_ru_(hop_ru),
      thresholds_(std::move(thresholds)),
      snr_(snr) {
  if (thresholds_.size() != alloc_.size()) {
    throw ContractError("CoopScenario: one threshold per user required");
  }
  margins_ = stage_margins(alloc_, thresholds_);
}

CoopScenario CoopScenario::from_geometry(PowerAllocation alloc, SinrThresholds thresholds,
                                         const RelayGeometry& geometry, double m_sr,
                                         double m_ru, SnrPoint snr) {
  return CoopScenario(std::move(alloc), NakagamiSpec(m_sr, geometry.omega_sr()),
                      NakagamiSpec(m_ru, geometry.omega_ru()), std::move(thresholds), snr);
}

bool CoopScenario::feasible(int rank) const {
  if (rank < 1 || rank > users()) throw ContractError("CoopScenario: rank outside [1, L]");
  for (int j = 1; j <= rank; ++j) {
    if (thresholds_.at(j) > 0.0 && margins_[static_cast<std::size_t>(j - 1)] <= 0.0) return false;
  }
  return true;
}

CoopScenario CoopScenario::with_snr(SnrPoint snr) const {
  CoopScenario copy = *this;
  copy.snr_ = snr;
  return copy;
}

double coop_sinr_cross(const CoopScenario& scen, int rank, int target, double gain_sr,
                       double gain_ru) {
  const int big_l = scen.users();
  if (rank < 1 || rank > big_l || target < 1 || target > rank) {
    throw ContractError("coop_sinr_cross: requires 1 <= target <= rank <= L");
  }
  if (gain_sr < 0.0 || gain_ru < 0.0) throw ContractError("coop_sinr: gains must be nonnegative");
  const double g = scen.snr().linear();
  const double product = g * g * gain_sr * gain_ru;
  return scen.alloc().at(target) * product /
         (product * scen.alloc().residual_after(target) + g * (gain_sr + gain_ru) + 1.0);
}

double coop_sinr(const CoopScenario& scen, int rank, double gain_sr, double gain_ru) {
  return coop_sinr_cross(scen, rank, rank, gain_sr, gain_ru);
}

std::optional<double> coop_outage_threshold(const CoopScenario& scen, int rank) {
  return outage_gain_threshold(scen.alloc(), scen.thresholds(), scen.snr(), rank);
}

namespace detail {

OutageResult coop_outage_series(const CoopScenario& scen, int rank, const CoopTermHook& hook) {
  const int big_l = scen.users();
  if (rank < 1 || rank > big_l) throw ContractError("coop outage: rank outside [1, L]");
  const int m_sr = scen.hop_sr().integer_shape();
  const int m_ru = scen.hop_ru().integer_shape();
  const auto eta_opt = coop_outage_threshold(scen, rank);
  if (!eta_opt) return {1.0, 0.0, OutageSource::kInfeasible};
  if (*eta_opt == 0.0) return {0.0, 0.0, OutageSource::kZeroThreshold};

  const int l = rank;
  const double eta = *eta_opt;
  const double gamma = scen.snr().linear();
  const double beta_sr = m_sr / scen.hop_sr().omega();
  const double beta_ru = m_ru / scen.hop_ru().omega();
  const double rho = eta * beta_sr * (1.0 + gamma * eta) / gamma;

  const double log_eta = std::log(eta);
  const double log_rho = std::log(rho);
  const double log_beta_sr = std::log(beta_sr);
  const double log_beta_ru = std::log(beta_ru);
  const double log_q = specfun::log_factorial(big_l) - specfun::log_factorial(big_l - l) -
                       specfun::log_factorial(l - 1);
  const double log_gamma_mru = std::lgamma(static_cast<double>(m_ru));

  const auto base_ru = specfun::SeriesCoefficients::truncated_exponential(beta_ru, m_ru);
  const int t_max = big_l - 1;

  // Per t: multinomial coefficients and ln K_ν(z_t) for every order needed.
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> log_k;
  for (int t = 0; t <= t_max; ++t) {
    theta.push_back(specfun::multinomial_coeffs(base_ru, t));
    const double z = 2.0 * std::sqrt(rho * beta_ru * (t + 1.0));
    const int nu_max = std::max(t * (m_ru - 1) + m_ru, m_sr);
    auto scaled = specfun::bessel_k_scaled_sequence(nu_max, z);
    std::vector<double> logs(scaled.size());
    for (std::size_t nu = 0; nu < scaled.size(); ++nu) logs[nu] = std::log(scaled[nu]) - z;
    log_k.push_back(std::move(logs));
  }

  specfun::CompensatedSum sum;
  double rounding = 0.0;
  std::size_t index = 0;
  for (int k = 0; k <= big_l - l; ++k) {
    const double log_k_part = log_q + specfun::log_binomial(big_l - l, k);
    for (int n = 0; n < m_sr; ++n) {
      const double log_n_part = log_k_part - specfun::log_factorial(n) - log_gamma_mru;
      for (int t = 0; t <= l + k - 1; ++t) {
        const double sign = ((t + k) % 2 == 0) ? 1.0 : -1.0;
        const double log_t_part = log_n_part + specfun::log_binomial(l + k - 1, t) -
                                  eta * beta_ru * (t + 1.0) - eta * beta_sr +
                                  std::numbers::ln2;
        const double log_t1 = std::log(t + 1.0);
        const auto& th = theta[static_cast<std::size_t>(t)];
        const auto& lk = log_k[static_cast<std::size_t>(t)];
        for (int p = 0; p <= t * (m_ru - 1); ++p) {
          const double log_p_part = log_t_part + std::log(th[static_cast<std::size_t>(p)]);
          for (int i = 0; i <= n; ++i) {
            const double log_i_part = log_p_part + specfun::log_binomial(n, i) +
                                      (n - i) * log_beta_sr;
            for (int q = 0; q <= p + m_ru - 1; ++q) {
              const int nu = std::abs(q - i + 1);
              const double log_term =
                  log_i_part + specfun::log_binomial(p + m_ru - 1, q) +
                  0.5 * (2.0 * m_ru - q + i - 1) * log_beta_ru +
                  0.5 * (i + q + 1) * log_rho - 0.5 * (q - i + 1) * log_t1 +
                  (n - i + p + m_ru - 1 - q) * log_eta + lk[static_cast<std::size_t>(nu)];
              const double magnitude = std::exp(log_term);
              double term = sign * magnitude;
              if (hook) term = hook(index, term);
              ++index;
              sum.add(term);
              rounding += magnitude * (kBesselRelError + (16.0 + std::abs(log_term)) * kEps);
            }
          }
        }
      }
    }
  }

  if (rounding > kSeriesLimit) {
    std::ostringstream msg;
    msg << "AF relay outage series for rank " << rank << " at " << scen.snr().db()
        << " dB: rounding bound " << rounding << " exceeds " << kSeriesLimit
        << " (catastrophic cancellation)";
    throw NumericalError(msg.str());
  }
  return {std::clamp(1.0 - sum.value(), 0.0, 1.0), rounding, OutageSource::kCoopSeries};
}

}  // namespace detail

OutageResult coop_outage_closed_form(const CoopScenario& scen, int rank) {
  return detail::coop_outage_series(scen, rank, {});
}

OutageResult coop_outage_numeric(const CoopScenario& scen, int rank) {
  const int big_l = scen.users();
  if (rank < 1 || rank > big_l) throw ContractError("coop outage: rank outside [1, L]");
  const int m_sr = scen.hop_sr().integer_shape();
  const int m_ru = scen.hop_ru().integer_shape();
  const auto eta_opt = coop_outage_threshold(scen, rank);
  if (!eta_opt) return {1.0, 0.0, OutageSource::kInfeasible};
  if (*eta_opt == 0.0) return {0.0, 0.0, OutageSource::kZeroThreshold};

  const double eta = *eta_opt;
  const double gamma = scen.snr().linear();
  const OrderedEnsemble relay_users{big_l, rank, scen.hop_ru(), 1};
  const double beta_sr = m_sr / scen.hop_sr().omega();
  const double beta_ru = m_ru / scen.hop_ru().omega();
  // BS-relay gain needed when the relay-user excess gain is y: η + c / y.
  const double c = eta * (1.0 + gamma * eta) / gamma;

  double total_error = 0.0;
  auto pdf_y = [&](double x) { return ordered_gain_pdf(relay_users, x); };
  const double scale = 1.0 / beta_ru;

  // Below y_lo the BS-relay CDF is 1 to double precision; above y_hi the
  // relay-user density is negligible. Everything below η + y_lo is the
  // plain relay-user CDF, integrated from the density.
  const double y_lo = beta_sr * c / kTailExponent;
  const double y_hi = std::max(y_lo, kTailExponent * scale);
  const double head_upper = std::min(eta + y_lo, (kTailExponent + 20.0) * scale + eta);
  const double head = integrate_panels(pdf_y, 0.0, head_upper, 0.5 * scale, total_error);

  double middle = 0.0;
  if (y_hi > y_lo) {
    auto integrand = [&](double u) {
      const double y = std::exp(u);
      return pdf_y(eta + y) * gamma_gain_cdf(scen.hop_sr(), 1, eta + c / y) * y;
    };
    middle = integrate_panels(integrand, std::log(y_lo), std::log(y_hi), 0.25, total_error);
  }
  const double value = head + middle;

  if (!(total_error <= kQuadratureLimit) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "AF relay outage quadrature for rank " << rank << " at " << scen.snr().db()
        << " dB did not converge (error estimate " << total_error << ")";
    throw NumericalError(msg.str());
  }
  return {std::clamp(value, 0.0, 1.0), total_error, OutageSource::kCoopQuadrature};
}

CoopScenario CoopTemplate::at(double d_sr) const {
  return CoopScenario::from_geometry(alloc, thresholds, RelayGeometry(d_sr, kappa), m_sr, m_ru,
                                     snr);
}

RelayOptimum optimal_relay_location(const CoopTemplate& family, int rank,
                                    std::span<const double> d_grid) {
  if (d_grid.empty()) throw ContractError("optimal_relay_location: empty d_SR grid");
  RelayOptimum best{std::numeric_limits<double>::infinity(), 2.0};
  for (double d : d_grid) {
    const double p = coop_outage_closed_form(family.at(d), rank).probability;
    if (p < best.outage || (p == best.outage && d < best.d_sr)) best = {d, p};
  }
  return best;
}

}  // namespace noma
