#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opshape/diagnostics.hpp"
#include "opshape/directional_stats.hpp"
#include "opshape/geometry.hpp"
#include "opshape/vw_comparison.hpp"

namespace opshape {

inline constexpr const char* kSoftwareVersion = "0.1.0";

struct StudyConfig {
  std::vector<int> frame_labels{1, 2, 4, 3};
  std::vector<int> remaining_labels{5};
  double alpha = 0.05;
  double alpha_ref = 0.05;
  std::optional<int> df;
  std::optional<int> max_removals;
  ReductionRule reduction_rule = ReductionRule::max_lower;
  bool skip_degenerate = false;
  std::uint64_t seed = 7;
  std::string input_path;
  std::string output_dir;

  /// Throws InvalidFrame / InvalidLevel.
  void validate() const;
  FrameSpec frame_spec() const { return FrameSpec(frame_labels, remaining_labels); }

  bool operator==(const StudyConfig&) const = default;
};

struct SceneRecord {
  std::string scene_id;
  std::vector<Eigen::VectorXd> units;
  bool det_sign_flipped = false;

  bool operator==(const SceneRecord&) const = default;
};

struct SkippedScene {
  std::string scene_id;
  std::string reason;

  bool operator==(const SkippedScene&) const = default;
};

struct Provenance {
  std::string input_sha256;
  std::string software_version = kSoftwareVersion;
  std::vector<SkippedScene> skipped_scenes;

  bool operator==(const Provenance&) const = default;
};

struct AnalysisReport {
  StudyConfig config;
  Provenance provenance;
  std::vector<SceneRecord> scenes;
  bool mixed_orientation = false;  // some but not all charts needed the det > 0 flip
  std::vector<std::string> warnings;

  OpsSummary full;
  std::vector<VwSummary> vw_full;
  std::vector<LooRow> loo;                 // empty when n < 3
  std::optional<ReductionTrace> reduction; // absent when n < 3
  OpsSummary reduced;                      // equals full when nothing was removed
  std::vector<VwSummary> vw_reduced;

  bool operator==(const AnalysisReport&) const = default;
};

/// Geometry -> OPS summary -> VW comparator -> leave-one-out and greedy
/// reduction. A degenerate scene aborts (error prefixed with its id) unless
/// config.skip_degenerate is set.
AnalysisReport analyze_scenes(std::span<const LandmarkScene> scenes, const StudyConfig& config,
                              std::string input_sha256);

/// Reads config.input_path and runs analyze_scenes.
AnalysisReport run_analysis(const StudyConfig& config);

/// Writes report.json, sphere_points.csv, mean_direction.csv, angles_full.csv,
/// angles_reduced.csv and loo_table.csv into outdir (created if missing).
void emit_outputs(const AnalysisReport& report, const std::filesystem::path& outdir);

/// Reduced-sample row indices of report.scenes (all rows when no reduction).
std::vector<Eigen::Index> reduced_rows(const AnalysisReport& report);

DirectionSample sample_of(const AnalysisReport& report);

}  // namespace opshape
