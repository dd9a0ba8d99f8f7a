// SPDX-License-Identifier: Apache-2.0
//
// Cross-validation groups run by `noma-bench validate`.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "noma/coop.hpp"

namespace noma::cli {

using CoopEvaluator = std::function<OutageResult(const CoopScenario&, int)>;

struct ValidationOptions {
  bool quick = false;
  unsigned workers = 0;
  std::uint64_t seed = 1;
  /// Series under test in the relay consistency group.
  CoopEvaluator coop_closed_form = coop_outage_closed_form;
};

struct GroupReport {
  std::string name;
  std::size_t checks = 0;
  /// One entry per failed check, with the inputs and values involved.
  std::vector<nlohmann::json> failures;

  [[nodiscard]] bool passed() const noexcept { return failures.empty(); }
};

GroupReport validate_specfun();
GroupReport validate_order_statistics(const ValidationOptions& opts);
GroupReport validate_simo_consistency();
GroupReport validate_coop_consistency(const ValidationOptions& opts);
GroupReport validate_uplink_identity();
GroupReport validate_mc_agreement(const ValidationOptions& opts);

std::vector<GroupReport> run_validation(const ValidationOptions& opts);

nlohmann::json report_json(const std::vector<GroupReport>& groups);

}  // namespace noma::cli
