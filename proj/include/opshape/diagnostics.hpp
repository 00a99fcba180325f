#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opshape/direction_sample.hpp"
#include "opshape/directional_stats.hpp"

namespace opshape {

/// Statistics of the sample with one row deleted.
struct LooRow {
  Eigen::Index index = 0;
  std::string scene_id;
  bool focal = false;  // the deletion left a focal mean; numbers below are left at zero
  double ts = 0.0;
  double se = 0.0;
  std::optional<double> z;
  double ci_lower = 0.0;
  double ci_upper = 0.0;

  bool operator==(const LooRow&) const = default;
};

std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df = {});

enum class StopReason { lower_endpoint_nonpositive, max_removals_reached, no_improvement };

/// Which candidate deletion a greedy step takes. max_lower deletes the scene
/// whose removal gives the largest post-deletion lower endpoint; min_lower
/// deletes the one giving the smallest, i.e. the scene whose presence most
/// supports rejection.
enum class ReductionRule { max_lower, min_lower };

const char* to_string(StopReason reason) noexcept;
StopReason stop_reason_from_string(std::string_view name);
const char* to_string(ReductionRule rule) noexcept;
ReductionRule reduction_rule_from_string(std::string_view name);

struct ReductionStep {
  Eigen::Index removed_index = 0;  // row in the original sample
  std::string removed_scene_id;
  OpsSummary summary;              // after the removal
  double ci_lower = 0.0;

  bool operator==(const ReductionStep&) const = default;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  double alpha_ref = 0.05;
  ReductionRule rule = ReductionRule::max_lower;
  double initial_ci_lower = 0.0;
  std::vector<Eigen::Index> final_indices;
  std::vector<std::string> final_sample_ids;
  StopReason stopped_reason = StopReason::lower_endpoint_nonpositive;

  bool operator==(const ReductionTrace&) const = default;
};

/// Ordering used to break ties between candidate deletions: ids that are both
/// plain integers compare numerically, anything else lexicographically.
bool scene_id_less(std::string_view a, std::string_view b);

/// Repeatedly deletes the scene chosen by `rule` (by default the one whose
/// removal maximizes the CI lower endpoint at alpha_ref). Stops before
/// removing when the current lower endpoint is <= 0, when no deletion moves
/// it in the rule's direction, or after max_removals deletions (default n / 4).
ReductionTrace greedy_reduce(const DirectionSample& sample, double alpha_ref,
                             std::optional<int> max_removals = {},
                             std::optional<int> df = {},
                             ReductionRule rule = ReductionRule::max_lower);

}  // namespace opshape
