// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "noma/errors.hpp"
#include "noma/rates.hpp"

using noma::GainProfile;
using noma::PowerAllocation;
using noma::SinrThresholds;
using noma::SnrPoint;

namespace {

const PowerAllocation kAlloc({0.6, 0.4});
const GainProfile kGains({1.0, 100.0});

}  // namespace

TEST(SnrPoint, Conversions) {
  EXPECT_DOUBLE_EQ(SnrPoint::from_db(30.0).linear(), 1000.0);
  EXPECT_DOUBLE_EQ(SnrPoint::from_db(0.0).linear(), 1.0);
  EXPECT_NEAR(SnrPoint::from_linear(100.0).db(), 20.0, 1e-14);
  EXPECT_THROW(SnrPoint::from_linear(0.0), noma::ContractError);
  EXPECT_THROW(SnrPoint::from_linear(-1.0), noma::ContractError);
}

TEST(PowerAllocation, Invariants) {
  EXPECT_THROW(PowerAllocation({0.4, 0.6}), noma::ContractError);
  EXPECT_THROW(PowerAllocation({0.6, 0.3}), noma::ContractError);
  EXPECT_THROW(PowerAllocation({1.0, 0.0}), noma::ContractError);
  EXPECT_THROW(PowerAllocation(std::vector<double>{}), noma::ContractError);
  EXPECT_NO_THROW(PowerAllocation({0.5, 0.5}));
  const PowerAllocation a({0.5, 1.0 / 3, 1.0 / 6});
  EXPECT_NEAR(a.residual_after(1), 0.5, 1e-15);
  EXPECT_NEAR(a.residual_after(2), 1.0 / 6, 1e-15);
  EXPECT_EQ(a.residual_after(3), 0.0);
  EXPECT_THROW(static_cast<void>(a.at(0)), noma::ContractError);
  EXPECT_THROW(static_cast<void>(a.at(4)), noma::ContractError);
}

TEST(GainProfile, Invariants) {
  EXPECT_THROW(GainProfile({2.0, 1.0}), noma::ContractError);
  EXPECT_THROW(GainProfile({-1.0, 1.0}), noma::ContractError);
  EXPECT_NO_THROW(GainProfile({0.0, 0.0}));
}

TEST(DownlinkSinr, CrossTerm) {
  EXPECT_NEAR(noma::dl_sinr_cross(kAlloc, kGains, SnrPoint::from_linear(1000.0), 1, 1), 600.0 / 401.0, 1e-15);
  EXPECT_NEAR(noma::dl_sinr_cross(kAlloc, kGains, SnrPoint::from_linear(1e-12), 1, 1), 0.0, 1e-11);
  EXPECT_THROW(noma::dl_sinr_cross(kAlloc, kGains, SnrPoint::from_linear(10.0), 1, 2), noma::ContractError);
  EXPECT_THROW(noma::dl_sinr_cross(kAlloc, kGains, SnrPoint::from_linear(10.0), 2, 2), noma::ContractError);
  EXPECT_THROW(noma::dl_sinr_cross(kAlloc, kGains, SnrPoint::from_linear(10.0), 3, 1), noma::ContractError);
}

TEST(DownlinkSinr, StrongestUserInterferenceFree) {
  EXPECT_DOUBLE_EQ(noma::dl_sinr_own(kAlloc, kGains, SnrPoint::from_linear(1000.0), 2), 0.4 * 1000.0 * 100.0);
}

TEST(DownlinkSumRate, HandValue) {
  const double want = std::log2(1.0 + 600.0 / 401.0) + std::log2(40001.0);
  const double got = noma::dl_sum_rate(kAlloc, kGains, SnrPoint::from_db(30.0));
  EXPECT_NEAR(got, want, 1e-12);
  EXPECT_NEAR(got, 16.607, 1e-3);
  EXPECT_NEAR(std::log2(1000.0 * 100.0), 16.610, 1e-3);
}

TEST(DownlinkSumRate, SingleUser) {
  const PowerAllocation one({1.0});
  const GainProfile g({3.0});
  EXPECT_NEAR(noma::dl_sum_rate(one, g, SnrPoint::from_linear(7.0)), std::log2(22.0), 1e-14);
}

TEST(UplinkSumRate, HandValue) {
  const double got = noma::ul_sum_rate(kAlloc, kGains, SnrPoint::from_db(30.0));
  EXPECT_NEAR(got, std::log2(1.0 + 1000.0 * (0.6 + 40.0)), 1e-12);
  EXPECT_NEAR(got, 15.309, 1e-3);
  EXPECT_NEAR(noma::ul_sum_rate(PowerAllocation({1.0}), GainProfile({3.0}), SnrPoint::from_linear(7.0)),
              std::log2(22.0), 1e-14);
}

TEST(UplinkSumRate, Telescoping) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> users(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = users(gen);
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> g(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& v : a) total += (v = 0.05 + unit(gen));
    for (auto& v : a) v /= total;
    std::sort(a.rbegin(), a.rend());
    for (auto& v : g) v = std::pow(10.0, 4.0 * unit(gen) - 2.0);
    std::sort(g.begin(), g.end());
    const PowerAllocation alloc(a);
    const GainProfile gains(g);
    const SnrPoint snr = SnrPoint::from_db(60.0 * unit(gen) - 10.0);
    double direct = 0.0;
    for (int i = 0; i < n; ++i) direct += a[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
    const double closed = std::log2(1.0 + snr.linear() * direct);
    EXPECT_NEAR(noma::ul_sum_rate(alloc, gains, snr), closed, 1e-12 * std::max(1.0, closed));
    EXPECT_NEAR(noma::ul_sum_rate_closed(alloc, gains, snr), closed, 1e-12 * std::max(1.0, closed));
  }
}

TEST(OmaSumRate, EqualShares) {
  const double got = noma::oma_sum_rate(kGains, SnrPoint::from_linear(1000.0));
  EXPECT_NEAR(got, 0.5 * std::log2(1001.0) + 0.5 * std::log2(100001.0), 1e-12);
  EXPECT_NEAR(got, 13.288, 1e-3);
  EXPECT_NEAR(noma::oma_sum_rate(GainProfile({3.0}), SnrPoint::from_linear(7.0)), std::log2(22.0), 1e-14);
}

TEST(OmaSumRate, GeneralShares) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(noma::oma_sum_rate(kGains, SnrPoint::from_linear(1000.0), half, half),
              noma::oma_sum_rate(kGains, SnrPoint::from_linear(1000.0)), 1e-14);
  const std::vector<double> bw{0.3, 0.7};
  const std::vector<double> pw{0.2, 0.8};
  EXPECT_NEAR(noma::oma_sum_rate(kGains, SnrPoint::from_linear(10.0), bw, pw),
              0.3 * std::log2(1.0 + 0.2 * 10.0 / 0.3) + 0.7 * std::log2(1.0 + 0.8 * 1000.0 / 0.7), 1e-13);
  const std::vector<double> bad{0.3, 0.6};
  EXPECT_THROW(noma::oma_sum_rate(kGains, SnrPoint::from_linear(10.0), bad, pw), noma::ContractError);
  EXPECT_THROW(noma::oma_sum_rate(kGains, SnrPoint::from_linear(10.0), bw, bad), noma::ContractError);
}

TEST(SumRates, DominanceAboveTwentyDb) {
  for (double db = 20.0; db <= 40.0; db += 2.0) {
    const SnrPoint snr = SnrPoint::from_db(db);
    const double oma = noma::oma_sum_rate(kGains, snr);
    EXPECT_GE(noma::dl_sum_rate(kAlloc, kGains, snr), oma) << db;
    EXPECT_GE(noma::ul_sum_rate(kAlloc, kGains, snr), oma) << db;
  }
}

TEST(SumRates, MonotoneInSnr) {
  double dl = 0.0;
  double ul = 0.0;
  for (double db = -20.0; db <= 60.0; db += 0.5) {
    const SnrPoint snr = SnrPoint::from_db(db);
    const double d = noma::dl_sum_rate(kAlloc, kGains, snr);
    const double u = noma::ul_sum_rate(kAlloc, kGains, snr);
    EXPECT_GE(d, dl);
    EXPECT_GE(u, ul);
    dl = d;
    ul = u;
  }
}

TEST(SumRates, HighSnrSingleTermGap) {
  const SnrPoint snr = SnrPoint::from_linear(1e6);
  EXPECT_LT(std::abs(noma::dl_sum_rate(kAlloc, kGains, snr) - std::log2(1e6 * 100.0)), 0.01);
}

TEST(SumRates, HighSnrTwoTermGap) {
  const SnrPoint snr = SnrPoint::from_linear(1e6);
  const double two_term = std::log2(1.0 + 0.6 / 0.4) + std::log2(1e6 * 100.0);
  EXPECT_NEAR(noma::dl_sum_rate_high_snr(kAlloc, kGains, snr), two_term, 1e-12);
  EXPECT_LT(std::abs(noma::dl_sum_rate(kAlloc, kGains, snr) - two_term), 0.01);
}

TEST(Log2OnePlus, SmallArguments) {
  EXPECT_EQ(noma::log2_1p(0.0), 0.0);
  EXPECT_NEAR(noma::log2_1p(1e-17) / (1e-17 / std::log(2.0)), 1.0, 1e-14);
  EXPECT_NEAR(noma::log2_1p(3.0), 2.0, 1e-15);
}

TEST(OmaEquivalentThreshold, ProductForm) {
  EXPECT_NEAR(noma::oma_equivalent_threshold(SinrThresholds({1.0, 2.0})), 5.0, 1e-15);
  EXPECT_NEAR(noma::oma_equivalent_threshold(SinrThresholds({0.9, 1.5, 2.0})), 13.25, 1e-13);
  EXPECT_NEAR(noma::oma_equivalent_threshold(SinrThresholds({0.7})), 0.7, 1e-15);
}

TEST(SinrThresholds, RejectNegative) {
  EXPECT_THROW(SinrThresholds({-0.1, 1.0}), noma::ContractError);
  EXPECT_THROW(SinrThresholds(std::vector<double>{}), noma::ContractError);
}
