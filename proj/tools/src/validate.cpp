// SPDX-License-Identifier: Apache-2.0
#include "noma_cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "noma/channel.hpp"
#include "noma/errors.hpp"
#include "noma/montecarlo.hpp"
#include "noma/specfun.hpp"

namespace noma::cli {
namespace {

using nlohmann::json;

constexpr double kBesselRelTol = 1e-12;
constexpr double kGammaAbsTol = 1e-12;
constexpr double kMultinomialRelTol = 1e-12;
constexpr double kKsCritical = 1.95;  // sqrt(n) D at about the 0.1% level
constexpr double kSimoRelTol = 1e-8;
constexpr double kCoopAbsTol = 1e-6;
constexpr double kUplinkAbsTol = 1e-12;
constexpr double kMcSigmas = 3.0;

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

std::vector<double> grid(double a, double step, double b) {
  std::vector<double> g;
  for (int i = 0; a + i * step <= b + 1e-9; ++i) g.push_back(a + i * step);
  return g;
}

PowerAllocation two_user_alloc() { return PowerAllocation({0.6, 0.4}); }
SinrThresholds two_user_thresholds() { return SinrThresholds({1.0, 2.0}); }
PowerAllocation three_user_alloc() { return PowerAllocation({1.0 / 2.0, 1.0 / 3.0, 1.0 / 6.0}); }
SinrThresholds three_user_thresholds() { return SinrThresholds({0.9, 1.5, 2.0}); }

}  // namespace

GroupReport validate_specfun() {
  GroupReport rep{"specfun", 0, {}};

  for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0}) {
    for (int nu = 0; nu <= 8; ++nu) {
      ++rep.checks;
      const double got = specfun::bessel_k(nu, x);
      const double want = std::cyl_bessel_k(static_cast<double>(nu), x);
      if (rel_err(got, want) > kBesselRelTol) {
        rep.failures.push_back({{"check", "bessel_k"}, {"order", nu}, {"x", x}, {"value", got},
                                {"oracle", want}});
      }
    }
  }

  using boost::math::quadrature::gauss_kronrod;
  for (double s : {0.5, 1.0, 2.0, 2.5, 3.0, 4.0, 6.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      ++rep.checks;
      const double log_norm = std::lgamma(s);
      auto density = [&](double t) {
        return t <= 0.0 ? (s == 1.0 ? 1.0 : 0.0) : std::exp((s - 1.0) * std::log(t) - t - log_norm);
      };
      // Substituting t = x u^2 keeps the s = 1/2 endpoint integrable.
      auto integrand = [&](double u) { return density(x * u * u) * 2.0 * x * u; };
      const double want = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-15);
      const double got = specfun::lower_incomplete_gamma_regularized(s, x);
      if (std::abs(got - want) > kGammaAbsTol) {
        rep.failures.push_back({{"check", "lower_incomplete_gamma"}, {"s", s}, {"x", x},
                                {"value", got}, {"oracle", want}});
      }
    }
  }

  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    const auto base = specfun::SeriesCoefficients::truncated_exponential(0.7, cutoff);
    std::vector<double> conv{1.0};
    for (int power = 0; power <= 4; ++power) {
      const auto got = specfun::multinomial_coeffs(base, power);
      ++rep.checks;
      bool ok = got.size() == conv.size();
      for (std::size_t i = 0; ok && i < got.size(); ++i) {
        ok = rel_err(got[i], conv[i]) <= kMultinomialRelTol;
      }
      if (!ok) {
        rep.failures.push_back({{"check", "multinomial_coeffs"}, {"cutoff", cutoff}, {"power", power}});
      }
      std::vector<double> next(conv.size() + static_cast<std::size_t>(cutoff) - 1, 0.0);
      for (std::size_t i = 0; i < conv.size(); ++i) {
        for (int r = 0; r < cutoff; ++r) next[i + static_cast<std::size_t>(r)] += conv[i] * base[r];
      }
      conv = std::move(next);
    }
  }

  for (int n = 0; n <= 60; ++n) {
    boost::multiprecision::cpp_int c = 1;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) c = c * (n - k + 1) / k;
      ++rep.checks;
      const double want = c.convert_to<double>();
      if (specfun::binomial(n, k) != want) {
        rep.failures.push_back({{"check", "binomial"}, {"n", n}, {"k", k}});
      }
    }
  }
  return rep;
}

GroupReport validate_order_statistics(const ValidationOptions& opts) {
  GroupReport rep{"order-statistics-ks", 0, {}};
  const std::uint64_t n = opts.quick ? 10'000 : 100'000;
  std::uint64_t tag = 0;
  for (int m : {1, 2}) {
    for (int nr : {1, 2}) {
      const NakagamiSpec link(m, 1.0);
      const int big_l = 3;
      ++tag;
      const auto key = stream_key(opts.seed, 0x6b73000000000000ULL + tag);
      std::vector<std::vector<double>> samples(big_l);
      for (std::uint64_t i = 0; i < n; ++i) {
        CounterRng rng(key, i);
        double g[big_l];
        for (double& v : g) v = sample_squared_gain(link, nr, rng);
        std::sort(g, g + big_l);
        for (int l = 0; l < big_l; ++l) samples[static_cast<std::size_t>(l)].push_back(g[l]);
      }
      for (int l = 1; l <= big_l; ++l) {
        auto& xs = samples[static_cast<std::size_t>(l - 1)];
        std::sort(xs.begin(), xs.end());
        const OrderedEnsemble ens{big_l, l, link, nr};
        double d = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double f = ordered_gain_cdf(ens, xs[i]);
          d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                        std::abs(f - static_cast<double>(i + 1) / n)});
        }
        ++rep.checks;
        const double stat = std::sqrt(static_cast<double>(n)) * d;
        if (stat > kKsCritical) {
          rep.failures.push_back({{"check", "ks"}, {"m", m}, {"nr", nr}, {"rank", l},
                                  {"sqrt_n_d", stat}});
        }
      }
    }
  }
  return rep;
}

GroupReport validate_simo_consistency() {
  GroupReport rep{"simo-series-vs-ordered-cdf", 0, {}};
  const std::vector<std::pair<PowerAllocation, SinrThresholds>> cases{
      {two_user_alloc(), two_user_thresholds()}, {three_user_alloc(), three_user_thresholds()}};
  for (const auto& [alloc, th] : cases) {
    for (int m = 1; m <= 3; ++m) {
      for (int nr = 1; nr <= 3; ++nr) {
        const SimoScenario scen(alloc, NakagamiSpec(m, 1.0), nr, th);
        for (double db : grid(0.0, 2.0, 40.0)) {
          const auto snr = SnrPoint::from_db(db);
          for (int l = 1; l <= scen.users(); ++l) {
            ++rep.checks;
            const auto series = simo_outage_series(scen, l, snr);
            const auto cdf = simo_outage_ordered_cdf(scen, l, snr);
            const double tol = kSimoRelTol * std::abs(cdf.probability) + series.error_bound +
                               cdf.error_bound;
            if (std::abs(series.probability - cdf.probability) > tol) {
              rep.failures.push_back({{"users", scen.users()}, {"m", m}, {"nr", nr},
                                      {"snr_db", db}, {"rank", l}, {"series", series.probability},
                                      {"ordered_cdf", cdf.probability}, {"tolerance", tol}});
            }
          }
        }
      }
    }
  }
  return rep;
}

GroupReport validate_coop_consistency(const ValidationOptions& opts) {
  GroupReport rep{"relay-series-vs-quadrature", 0, {}};
  const auto snr_grid = opts.quick ? grid(0.0, 10.0, 40.0) : grid(0.0, 5.0, 40.0);
  for (int m = 1; m <= 3; ++m) {
    for (double d : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      for (double db : snr_grid) {
        const auto scen = CoopScenario::from_geometry(three_user_alloc(), three_user_thresholds(),
                                                      RelayGeometry(d, 3.0), m, m,
                                                      SnrPoint::from_db(db));
        for (int l = 1; l <= scen.users(); ++l) {
          ++rep.checks;
          json where{{"m", m}, {"dsr", d}, {"snr_db", db}, {"rank", l}};
          try {
            const double series = opts.coop_closed_form(scen, l).probability;
            const double quad = coop_outage_numeric(scen, l).probability;
            if (!(std::abs(series - quad) <= kCoopAbsTol)) {
              where["series"] = series;
              where["quadrature"] = quad;
              rep.failures.push_back(std::move(where));
            }
          } catch (const NumericalError& e) {
            where["error"] = e.what();
            rep.failures.push_back(std::move(where));
          }
        }
      }
    }
  }
  return rep;
}

GroupReport validate_uplink_identity() {
  GroupReport rep{"uplink-telescoping", 0, {}};
  CounterRng rng(0x75706c696e6bULL, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int big_l = 2 + trial % 5;
    std::vector<double> a(static_cast<std::size_t>(big_l));
    std::vector<double> h(static_cast<std::size_t>(big_l));
    double total = 0.0;
    for (auto& v : a) total += (v = 0.05 + unit(rng));
    for (auto& v : a) v /= total;
    std::sort(a.begin(), a.end(), std::greater<>());
    for (auto& v : h) v = std::pow(10.0, 3.0 * unit(rng) - 1.0);
    std::sort(h.begin(), h.end());
    const double db = -10.0 + 60.0 * unit(rng);
    const PowerAllocation alloc(a);
    const GainProfile gains(h);
    const auto snr = SnrPoint::from_db(db);
    ++rep.checks;
    const double lhs = ul_sum_rate(alloc, gains, snr);
    const double rhs = ul_sum_rate_closed(alloc, gains, snr);
    if (std::abs(lhs - rhs) > kUplinkAbsTol) {
      rep.failures.push_back({{"users", big_l}, {"snr_db", db}, {"sum", lhs}, {"closed", rhs}});
    }
  }
  return rep;
}

GroupReport validate_mc_agreement(const ValidationOptions& opts) {
  GroupReport rep{"monte-carlo-agreement", 0, {}};
  McConfig cfg;
  cfg.trials = opts.quick ? 10'000 : 1'000'000;
  cfg.master_seed = opts.seed;
  cfg.workers = opts.workers;

  auto compare = [&](json where, double cf, const McEstimate& mc) {
    if (cf < kUnderResolvedOutage) return;
    ++rep.checks;
    const double sigma =
        std::max(mc.std_error, std::sqrt(cf * (1.0 - cf) / static_cast<double>(mc.trials)));
    if (std::abs(cf - mc.mean) > kMcSigmas * sigma) {
      where["closed_form"] = cf;
      where["mc_mean"] = mc.mean;
      where["sigma"] = sigma;
      rep.failures.push_back(std::move(where));
    }
  };

  const auto snr_grid = grid(0.0, 10.0, 40.0);
  for (int m : {1, 2}) {
    for (int nr : {1, 2}) {
      const SimoScenario scen(two_user_alloc(), NakagamiSpec(m, 1.0), nr, two_user_thresholds());
      for (double db : snr_grid) {
        const auto snr = SnrPoint::from_db(db);
        const auto mc = estimate_outage_all(scen, snr, cfg);
        for (int l = 1; l <= scen.users(); ++l) {
          compare({{"scenario", "simo"}, {"m", m}, {"nr", nr}, {"snr_db", db}, {"rank", l}},
                  simo_outage_closed_form(scen, l, snr).probability,
                  mc.noma[static_cast<std::size_t>(l - 1)]);
        }
      }
    }
  }
  for (int m = 1; m <= 3; ++m) {
    for (double db : snr_grid) {
      const auto scen = CoopScenario::from_geometry(three_user_alloc(), three_user_thresholds(),
                                                    RelayGeometry(0.5, 3.0), m, m,
                                                    SnrPoint::from_db(db));
      const auto mc = estimate_outage_all(scen, cfg);
      for (int l = 1; l <= scen.users(); ++l) {
        compare({{"scenario", "relay"}, {"m", m}, {"snr_db", db}, {"rank", l}},
                coop_outage_closed_form(scen, l).probability,
                mc[static_cast<std::size_t>(l - 1)]);
      }
    }
  }
  return rep;
}

std::vector<GroupReport> run_validation(const ValidationOptions& opts) {
  std::vector<GroupReport> groups;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      groups.push_back(fn());
    } catch (const std::exception& e) {
      GroupReport rep{name, 1, {}};
      rep.failures.push_back({{"error", e.what()}});
      groups.push_back(std::move(rep));
    }
  };
  guarded("specfun", [] { return validate_specfun(); });
  guarded("order-statistics-ks", [&] { return validate_order_statistics(opts); });
  guarded("simo-series-vs-ordered-cdf", [] { return validate_simo_consistency(); });
  guarded("relay-series-vs-quadrature", [&] { return validate_coop_consistency(opts); });
  guarded("uplink-telescoping", [] { return validate_uplink_identity(); });
  guarded("monte-carlo-agreement", [&] { return validate_mc_agreement(opts); });
  return groups;
}

nlohmann::json report_json(const std::vector<GroupReport>& groups) {
  json out;
  bool all = true;
  out["groups"] = json::array();
  for (const auto& g : groups) {
    all = all && g.passed();
    out["groups"].push_back({{"name", g.name}, {"passed", g.passed()}, {"checks", g.checks},
                             {"failures", g.failures}});
  }
  out["passed"] = all;
  return out;
}

}  // namespace noma::cli
