#include "opshape/diagnostics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>

#include "opshape/error.hpp"
#include "opshape/kernels.hpp"

namespace opshape {
namespace {

std::optional<std::uint64_t> as_integer(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::nullopt;
  std::uint64_t value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

}  // namespace

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::lower_endpoint_nonpositive: return "lower_endpoint_nonpositive";
    case StopReason::max_removals_reached: return "max_removals_reached";
    case StopReason::no_improvement: return "no_improvement";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view name) {
  for (auto r : {StopReason::lower_endpoint_nonpositive, StopReason::max_removals_reached,
                 StopReason::no_improvement}) {
    if (name == to_string(r)) return r;
  }
  throw Error(ErrorKind::SchemaError, "unknown stop reason '" + std::string(name) + "'");
}

const char* to_string(ReductionRule rule) noexcept {
  return rule == ReductionRule::max_lower ? "max_lower" : "min_lower";
}

ReductionRule reduction_rule_from_string(std::string_view name) {
  for (auto r : {ReductionRule::max_lower, ReductionRule::min_lower}) {
    if (name == to_string(r)) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown reduction rule '" + std::string(name) + "'");
}

bool scene_id_less(std::string_view a, std::string_view b) {
  const auto ia = as_integer(a);
  const auto ib = as_integer(b);
  if (ia && ib && *ia != *ib) return *ia < *ib;
  return a < b;
}

std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df) {
  if (sample.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "leave-one-out needs n >= 3");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  return kernels::omp::leave_one_out(sample, alpha, df);
}

ReductionTrace greedy_reduce(const DirectionSample& sample, double alpha_ref,
                             std::optional<int> max_removals, std::optional<int> df,
                             ReductionRule rule) {
  if (sample.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "greedy reduction needs n >= 3");
  }
  if (!(alpha_ref > 0.0 && alpha_ref < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha_ref must lie in (0, 1)");
  }
  const int cap = max_removals.value_or(static_cast<int>(sample.size() / 4));
  if (cap < 0) throw Error(ErrorKind::InvalidArgument, "max_removals must be >= 0");

  ReductionTrace trace;
  trace.alpha_ref = alpha_ref;
  trace.rule = rule;
  const double sign = rule == ReductionRule::max_lower ? 1.0 : -1.0;

  std::vector<Eigen::Index> current(static_cast<std::size_t>(sample.size()));
  for (Eigen::Index i = 0; i < sample.size(); ++i) current[static_cast<std::size_t>(i)] = i;

  double lower = summarize(sample, alpha_ref, df).ci.lower;
  trace.initial_ci_lower = lower;

  for (;;) {
    if (lower <= 0.0) {
      trace.stopped_reason = StopReason::lower_endpoint_nonpositive;
      break;
    }
    // A deletion must leave at least two scenes for the interval to exist.
    if (static_cast<int>(trace.steps.size()) >= cap || current.size() < 3) {
      trace.stopped_reason = StopReason::max_removals_reached;
      break;
    }
    const DirectionSample sub = sample.subset(current);
    const std::vector<LooRow> rows = kernels::omp::leave_one_out(sub, alpha_ref, df);

    const LooRow* best = nullptr;
    for (const auto& row : rows) {
      if (row.focal) continue;
      if (best == nullptr || sign * row.ci_lower > sign * best->ci_lower ||
          (row.ci_lower == best->ci_lower && scene_id_less(row.scene_id, best->scene_id))) {
        best = &row;
      }
    }
    if (best == nullptr || !(sign * best->ci_lower > sign * lower)) {
      trace.stopped_reason = StopReason::no_improvement;
      break;
    }

    ReductionStep step;
    step.removed_index = current[static_cast<std::size_t>(best->index)];
    step.removed_scene_id = best->scene_id;
    current.erase(current.begin() + best->index);
    step.summary = summarize(sample.subset(current), alpha_ref, df);
    step.ci_lower = step.summary.ci.lower;
    lower = step.ci_lower;
    trace.steps.push_back(std::move(step));
  }

  trace.final_indices = current;
  for (Eigen::Index i : current)
    trace.final_sample_ids.push_back(sample.scene_ids()[static_cast<std::size_t>(i)]);
  return trace;
}

}  // namespace opshape
