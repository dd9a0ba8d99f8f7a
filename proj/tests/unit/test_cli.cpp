// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "noma/coop.hpp"
#include "noma/errors.hpp"
#include "noma/rates.hpp"
#include "noma_cli/app.hpp"
#include "noma_cli/experiment.hpp"
#include "noma_cli/validate.hpp"

namespace fs = std::filesystem;
using namespace noma;
using namespace noma::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "noma-bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("noma_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, Fig4ValuesComeFromLibrary) {
  const auto r = invoke({"reproduce", "fig4", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(slurp(dir_ / "fig4.csv"));
  ASSERT_EQ(rows.size(), 1U + 21 * 3);
  EXPECT_EQ(rows[0].size(), 9U);
  const PowerAllocation a({0.6, 0.4});
  const GainProfile g({1.0, 100.0});
  int checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] != "30") continue;
    const auto snr = SnrPoint::from_db(30.0);
    if (rows[i][3] == "noma_downlink_sum_rate") {
      EXPECT_EQ(rows[i][4], g9(dl_sum_rate(a, g, snr)));
    }
    if (rows[i][3] == "noma_uplink_sum_rate") {
      EXPECT_EQ(rows[i][4], g9(ul_sum_rate(a, g, snr)));
    }
    if (rows[i][3] == "oma_sum_rate") {
      EXPECT_EQ(rows[i][4], g9(oma_sum_rate(g, snr)));
    }
    EXPECT_EQ(rows[i][5], "");
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST_F(CliTest, HeaderAndScenarioLabels) {
  const fs::path file = dir_ / "six.csv";
  const auto r = invoke({"reproduce", "fig6", "--quick", "--snr-db", "10", "--out", file.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = slurp(file);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  const auto rows = parse_csv(text);
  ASSERT_EQ(rows.size(), 1U + 4 * 4);
  EXPECT_EQ(rows[1][1], "fig6/m=1;nr=1");
  EXPECT_EQ(rows[1][7], "10000");
  EXPECT_EQ(rows[1][8], "1");
  for (const auto& row : rows) EXPECT_EQ(row.size(), 9U);
}

TEST_F(CliTest, ByteStableForFixedSeed) {
  const fs::path a = dir_ / "a.csv";
  const fs::path b = dir_ / "b.csv";
  ASSERT_EQ(invoke({"reproduce", "fig6", "--seed", "7", "--quick", "--snr-db", "0:10:40", "--out", a.string()}).code,
            kExitOk);
  ASSERT_EQ(invoke({"reproduce", "fig6", "--seed", "7", "--quick", "--snr-db", "0:10:40", "--workers", "4", "--out",
                 b.string()})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST_F(CliTest, Fig9SinglePointAgreesWithMonteCarlo) {
  const fs::path file = dir_ / "fig9.csv";
  const auto r = invoke({"reproduce", "fig9", "--snr-db", "20", "--m", "1", "--out", file.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_csv(slurp(file));
  ASSERT_EQ(rows.size(), 4U);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][2], std::to_string(i));
    const double cf = std::stod(rows[i][4]);
    const double mean = std::stod(rows[i][5]);
    const double se = std::stod(rows[i][6]);
    EXPECT_LT(std::abs(cf - mean), 3.0 * se) << "user " << i;
    EXPECT_EQ(rows[i][7], "1000000");
  }
}

TEST_F(CliTest, Fig10ReportsArgmin) {
  const fs::path file = dir_ / "fig10.csv";
  ASSERT_EQ(invoke({"reproduce", "fig10", "--m", "1", "--trials", "1000", "--out", file.string()}).code, kExitOk);
  int found = 0;
  for (const auto& row : parse_csv(slurp(file))) {
    if (row[3] != "argmin_dsr") continue;
    EXPECT_EQ(row[1], "fig10/m=1");
    ++found;
  }
  EXPECT_EQ(found, 3);
}

TEST_F(CliTest, ConfigFileOverrides) {
  const fs::path ini = dir_ / "exp.ini";
  std::ofstream(ini) << "[fig9]\nm = 2\nsnr_db = 10:10:20\ntrials = 500\n\n[fig6]\nm = 3\n";
  const fs::path file = dir_ / "out.csv";
  ASSERT_EQ(invoke({"reproduce", "fig9", "--config", ini.string(), "--out", file.string()}).code, kExitOk);
  const auto rows = parse_csv(slurp(file));
  ASSERT_EQ(rows.size(), 1U + 2 * 3);
  EXPECT_EQ(rows[1][1], "fig9/m=2;dsr=0.5");
  EXPECT_EQ(rows[4][0], "20");
  EXPECT_EQ(rows[1][7], "500");
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv("NOMA_BENCH_OUT_DIR", dir_.string().c_str(), 1);
  const auto r = invoke({"reproduce", "fig4", "--snr-db", "0:20:40"});
  ::unsetenv("NOMA_BENCH_OUT_DIR");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "fig4.csv"));
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  const std::string out = (dir_ / "x.csv").string();
  EXPECT_EQ(invoke({"reproduce", "fig5", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig4", "--m", "2", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig9", "--nr", "2", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig6", "--dsr", "0.3", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig6", "--snr-db", "10:-2:0", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig9", "--dsr", "1.5", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig6", "--trials", "0", "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce"}).code, kExitConfigError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitConfigError);
  EXPECT_EQ(invoke({}).code, kExitConfigError);
  const auto r = invoke({"reproduce", "fig9", "--dsr", "1.5", "--out", out});
  EXPECT_NE(r.err.find("d_SR"), std::string::npos) << r.err;

  const fs::path ini = dir_ / "bad.ini";
  std::ofstream(ini) << "[fig9]\ncolour = blue\n";
  EXPECT_EQ(invoke({"reproduce", "fig9", "--config", ini.string(), "--out", out}).code, kExitConfigError);
  std::ofstream(ini, std::ios::trunc) << "[fig9]\nalloc = 0.5, 0.3\n";
  EXPECT_EQ(invoke({"reproduce", "fig9", "--config", ini.string(), "--out", out}).code, kExitConfigError);
  EXPECT_EQ(invoke({"reproduce", "fig9", "--config", (dir_ / "missing.ini").string(), "--out", out}).code,
            kExitConfigError);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("reproduce"), std::string::npos);
}

TEST_F(CliTest, QuickValidatePasses) {
  const fs::path report = dir_ / "report.json";
  const auto r = invoke({"validate", "--quick", "--report", report.string()});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  const auto json = nlohmann::json::parse(slurp(report));
  EXPECT_EQ(json["groups"].size(), 6U);
}

TEST(Validation, SignFlipFailsRelayGroup) {
  ValidationOptions opts;
  opts.quick = true;
  EXPECT_TRUE(validate_coop_consistency(opts).passed());
  opts.coop_closed_form = [](const CoopScenario& s, int rank) {
    return detail::coop_outage_series(s, rank, [](std::size_t i, double t) { return i == 1 ? -t : t; });
  };
  const auto report = validate_coop_consistency(opts);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.name, "relay-series-vs-quadrature");
  EXPECT_TRUE(validate_simo_consistency().passed());
}

TEST(Experiment, SnrGridParsing) {
  EXPECT_EQ(parse_snr_grid("0:10:40"), (std::vector<double>{0, 10, 20, 30, 40}));
  EXPECT_EQ(parse_snr_grid("7.5"), (std::vector<double>{7.5}));
  EXPECT_EQ(parse_snr_grid("0:2:40").size(), 21U);
  EXPECT_THROW(parse_snr_grid("0:0:10"), ConfigError);
  EXPECT_THROW(parse_snr_grid("abc"), ConfigError);
}
