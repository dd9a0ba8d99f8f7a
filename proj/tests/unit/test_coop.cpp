// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "noma/coop.hpp"
#include "noma/errors.hpp"
#include "noma/montecarlo.hpp"

using namespace noma;

namespace {

const PowerAllocation kAlloc({0.5, 1.0 / 3, 1.0 / 6});
const SinrThresholds kThresholds({0.9, 1.5, 2.0});

CoopScenario three_user(double m, double d, double db) {
  return CoopScenario::from_geometry(kAlloc, kThresholds, RelayGeometry(d, 3.0), m, m, SnrPoint::from_db(db));
}

std::vector<double> d_grid(double step) {
  std::vector<double> g;
  for (int i = 1; i * step < 1.0 - 1e-9; ++i) g.push_back(i * step);
  return g;
}

}  // namespace

TEST(RelayGeometry, MeanPowers) {
  const RelayGeometry g(0.5, 3.0);
  EXPECT_DOUBLE_EQ(g.omega_sr(), 8.0);
  EXPECT_DOUBLE_EQ(g.omega_ru(), 8.0);
  EXPECT_NEAR(RelayGeometry(0.25, 2.0).omega_ru(), 1.0 / 0.5625, 1e-14);
  EXPECT_THROW(RelayGeometry(0.0, 3.0), ContractError);
  EXPECT_THROW(RelayGeometry(1.0, 3.0), ContractError);
  EXPECT_THROW(RelayGeometry(0.5, 0.0), ContractError);
}

TEST(CoopScenario, FeasibilityMargins) {
  const auto s = three_user(1.0, 0.5, 20.0);
  ASSERT_EQ(s.feasibility_margins().size(), 3U);
  EXPECT_NEAR(s.feasibility_margins()[0], 0.05, 1e-15);
  EXPECT_TRUE(s.feasible(1));
  EXPECT_TRUE(s.feasible(3));
  const CoopScenario bad(PowerAllocation({0.5, 0.5}), NakagamiSpec(1.0, 1.0), NakagamiSpec(1.0, 1.0),
                         SinrThresholds({1.0, 1.0}), SnrPoint::from_db(20.0));
  EXPECT_FALSE(bad.feasible(1));
  EXPECT_EQ(coop_outage_closed_form(bad, 2).probability, 1.0);
  EXPECT_EQ(coop_outage_numeric(bad, 2).probability, 1.0);
}

TEST(CoopSinr, Values) {
  const auto s = three_user(1.0, 0.5, 20.0);
  EXPECT_NEAR(coop_sinr(s, 1, 1.0, 1.0), 5000.0 / 5201.0, 1e-15);
  EXPECT_NEAR(coop_sinr(s, 1, 1.0, 1.0), 0.9613, 1e-4);
  EXPECT_EQ(coop_sinr(s, 2, 0.0, 4.0), 0.0);
  EXPECT_EQ(coop_sinr(s, 2, 4.0, 0.0), 0.0);
  const auto loud = three_user(1.0, 0.5, 160.0);
  EXPECT_NEAR(coop_sinr(loud, 1, 1.0, 1.0), 1.0, 1e-9);
  EXPECT_NEAR(coop_sinr_cross(s, 3, 3, 1.0, 1.0), (1.0 / 6) * 1e4 / 201.0, 1e-14);
  EXPECT_THROW(coop_sinr_cross(s, 1, 2, 1.0, 1.0), ContractError);
  EXPECT_THROW(coop_sinr(s, 1, -1.0, 1.0), ContractError);
}

TEST(CoopOutage, SeriesMatchesQuadrature) {
  for (int m = 1; m <= 3; ++m) {
    for (double d = 0.1; d < 0.95; d += 0.1) {
      for (double db = 0.0; db <= 40.0; db += 5.0) {
        const auto s = three_user(m, d, db);
        for (int l = 1; l <= 3; ++l) {
          const double cf = coop_outage_closed_form(s, l).probability;
          const double num = coop_outage_numeric(s, l).probability;
          EXPECT_LT(std::abs(cf - num), 1e-6) << "m=" << m << " d=" << d << " db=" << db << " l=" << l;
        }
      }
    }
  }
}

TEST(CoopOutage, SeriesMatchesQuadratureMixedShapes) {
  for (int big_l = 1; big_l <= 3; ++big_l) {
    std::vector<double> a;
    const double total = big_l * (big_l + 1) / 2.0;
    for (int l = 1; l <= big_l; ++l) a.push_back((big_l - l + 1) / total);
    const std::vector<double> th(static_cast<std::size_t>(big_l), 0.2);
    for (auto [m_sr, m_ru] : {std::pair{1, 3}, std::pair{3, 1}, std::pair{2, 1}}) {
      for (double db : {5.0, 15.0, 30.0}) {
        const auto s = CoopScenario::from_geometry(PowerAllocation(a), SinrThresholds(th), RelayGeometry(0.3, 3.0),
                                                   m_sr, m_ru, SnrPoint::from_db(db));
        for (int l = 1; l <= big_l; ++l) {
          EXPECT_LT(std::abs(coop_outage_closed_form(s, l).probability - coop_outage_numeric(s, l).probability),
                    1e-6);
        }
      }
    }
  }
}

TEST(CoopOutage, SignFlipIsDetected) {
  const auto s = three_user(2.0, 0.5, 20.0);
  const double num = coop_outage_numeric(s, 2).probability;
  const auto flipped =
      detail::coop_outage_series(s, 2, [](std::size_t i, double t) { return i == 1 ? -t : t; });
  EXPECT_GT(std::abs(flipped.probability - num), 1e-6);
  const auto untouched = detail::coop_outage_series(s, 2, [](std::size_t, double t) { return t; });
  EXPECT_EQ(untouched.probability, coop_outage_closed_form(s, 2).probability);
}

TEST(CoopOutage, LimitsAndBounds) {
  EXPECT_NEAR(coop_outage_closed_form(three_user(1.0, 0.5, -30.0), 1).probability, 1.0, 1e-9);
  const CoopScenario zero(kAlloc, NakagamiSpec(1.0, 8.0), NakagamiSpec(1.0, 8.0), SinrThresholds({0.0, 0.0, 0.0}),
                          SnrPoint::from_db(10.0));
  EXPECT_EQ(coop_outage_closed_form(zero, 3).probability, 0.0);
  EXPECT_EQ(coop_outage_numeric(zero, 3).probability, 0.0);
  const CoopScenario tiny(kAlloc, NakagamiSpec(1.0, 8.0), NakagamiSpec(1.0, 8.0),
                          SinrThresholds({1e-9, 1e-9, 1e-9}), SnrPoint::from_db(10.0));
  EXPECT_LT(coop_outage_closed_form(tiny, 3).probability, 1e-8);
}

TEST(CoopOutage, MonotoneInSnr) {
  for (int l = 1; l <= 3; ++l) {
    double prev = 1.0;
    for (double db = 0.0; db <= 40.0; db += 2.0) {
      const double p = coop_outage_closed_form(three_user(2.0, 0.4, db), l).probability;
      EXPECT_LE(p, prev + 1e-12);
      prev = p;
    }
  }
}

TEST(CoopOutage, MonotoneInThreshold) {
  double prev = 0.0;
  for (double t = 0.1; t < 0.95; t += 0.1) {
    const auto s = CoopScenario::from_geometry(kAlloc, SinrThresholds({t, 1.5, 2.0}), RelayGeometry(0.5, 3.0), 1, 1,
                                               SnrPoint::from_db(15.0));
    const double p = coop_outage_closed_form(s, 1).probability;
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(CoopOutage, WeakUserIsWorst) {
  for (double db = 10.0; db <= 40.0; db += 2.0) {
    const auto s = three_user(1.0, 0.5, db);
    const double p1 = coop_outage_closed_form(s, 1).probability;
    EXPECT_LT(coop_outage_closed_form(s, 2).probability, p1) << db;
    EXPECT_LT(coop_outage_closed_form(s, 3).probability, p1) << db;
  }
}

TEST(CoopOutage, FarRelayDegrades) {
  for (int l = 1; l <= 3; ++l) {
    double prev = 0.0;
    for (double d : {0.8, 0.85, 0.9, 0.95}) {
      const double p = coop_outage_closed_form(three_user(1.0, d, 20.0), l).probability;
      EXPECT_GT(p, prev) << "l=" << l << " d=" << d;
      prev = p;
    }
  }
}

TEST(CoopOutage, MatchesMonteCarlo) {
  McConfig cfg;
  cfg.trials = 1'000'000;
  cfg.master_seed = 21;
  for (int m = 1; m <= 2; ++m) {
    const auto s = three_user(m, 0.5, 20.0);
    const auto mc = estimate_outage_all(s, cfg);
    for (int l = 1; l <= 3; ++l) {
      const double cf = coop_outage_closed_form(s, l).probability;
      const auto& e = mc[static_cast<std::size_t>(l - 1)];
      EXPECT_LT(std::abs(cf - e.mean), 3.0 * e.std_error) << "m=" << m << " l=" << l;
    }
  }
}

TEST(RelayLocation, StrongUserPrefersNearRelay) {
  const auto grid = d_grid(0.05);
  for (int m = 1; m <= 3; ++m) {
    const CoopTemplate family{kAlloc, kThresholds, double(m), double(m), 3.0, SnrPoint::from_db(20.0)};
    const auto weak = optimal_relay_location(family, 1, grid);
    const auto strong = optimal_relay_location(family, 3, grid);
    EXPECT_LT(strong.d_sr, weak.d_sr) << m;
    EXPECT_NEAR(weak.outage, coop_outage_closed_form(family.at(weak.d_sr), 1).probability, 0.0);
  }
}

TEST(RelayLocation, SingleUserInteriorMinimum) {
  const CoopTemplate family{PowerAllocation({1.0}), SinrThresholds({0.1}), 1.0, 1.0, 3.0, SnrPoint::from_db(10.0)};
  const auto grid = d_grid(0.05);
  const auto best = optimal_relay_location(family, 1, grid);
  EXPECT_GT(best.d_sr, grid.front());
  EXPECT_LT(best.d_sr, grid.back());
  for (double d : grid) EXPECT_GE(coop_outage_closed_form(family.at(d), 1).probability, best.outage);
}

TEST(RelayLocation, StableUnderRefinement) {
  const auto coarse = d_grid(0.05);
  const auto fine = d_grid(0.025);
  for (int m = 1; m <= 3; ++m) {
    const CoopTemplate family{kAlloc, kThresholds, double(m), double(m), 3.0, SnrPoint::from_db(20.0)};
    for (int l = 1; l <= 3; ++l) {
      const double a = optimal_relay_location(family, l, coarse).d_sr;
      const double b = optimal_relay_location(family, l, fine).d_sr;
      EXPECT_LE(std::abs(a - b), 0.05 + 1e-12) << "m=" << m << " l=" << l;
    }
  }
}

TEST(RelayLocation, TiesGoToSmallerDistance) {
  // Zero thresholds: every location gives outage 0.
  const CoopTemplate family{kAlloc, SinrThresholds({0.0, 0.0, 0.0}), 1.0, 1.0, 3.0, SnrPoint::from_db(20.0)};
  const std::vector<double> grid{0.7, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(optimal_relay_location(family, 2, grid).d_sr, 0.3);
  EXPECT_THROW(optimal_relay_location(family, 2, std::vector<double>{}), ContractError);
}
