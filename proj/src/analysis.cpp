#include "opshape/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "opshape/error.hpp"
#include "opshape/kernels.hpp"
#include "opshape/landmarks_csv.hpp"
#include "opshape/report_json.hpp"

namespace opshape {
namespace {

bool skippable(ErrorKind kind) {
  return kind == ErrorKind::DegenerateFrame || kind == ErrorKind::DegeneratePoint ||
         kind == ErrorKind::InvalidLandmark;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<std::string> component_names(int dimension) {
  if (dimension == 3) return {"x", "y", "z"};
  std::vector<std::string> names;
  for (int c = 1; c <= dimension; ++c) names.push_back("x" + std::to_string(c));
  return names;
}

void write_angles(const std::filesystem::path& path, const DirectionSample& sample,
                  const Eigen::VectorXd& extrinsic_mean) {
  const Eigen::MatrixXd theta = angular_distances(sample, extrinsic_mean);
  const bool multi = sample.blocks() > 1;
  auto out = open_output(path);
  out << (multi ? "scene,block,theta_radians\n" : "scene,theta_radians\n");
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (int f = 0; f < sample.blocks(); ++f) {
      out << sample.scene_ids()[static_cast<std::size_t>(i)] << ',';
      if (multi) out << f + 1 << ',';
      out << format_double(theta(i, f)) << '\n';
    }
  }
  finish(out, path);
}

}  // namespace

void StudyConfig::validate() const {
  (void)frame_spec();
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  if (!(alpha_ref > 0.0 && alpha_ref < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha_ref must lie in (0, 1)");
  }
  if (df && *df < 1) throw Error(ErrorKind::InvalidArgument, "df must be >= 1");
  if (max_removals && *max_removals < 0) {
    throw Error(ErrorKind::InvalidArgument, "max_removals must be >= 0");
  }
}

AnalysisReport analyze_scenes(std::span<const LandmarkScene> scenes, const StudyConfig& config,
                              std::string input_sha256) {
  config.validate();
  const FrameSpec spec = config.frame_spec();

  AnalysisReport report;
  report.config = config;
  report.config.output_dir.clear();  // where results go is not part of the analysis
  report.provenance.input_sha256 = std::move(input_sha256);

  const auto results = kernels::omp::scene_directions(scenes, spec);
  std::vector<std::vector<Eigen::VectorXd>> rows;
  std::vector<std::string> ids;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].error) {
      try {
        std::rethrow_exception(results[i].error);
      } catch (const Error& e) {
        if (!config.skip_degenerate || !skippable(e.kind())) throw;
        report.provenance.skipped_scenes.push_back({scenes[i].scene_id, e.what()});
        continue;
      }
    }
    const auto& d = results[i].directions;
    if (d.orientation_reversing) {
      report.warnings.push_back("scene " + scenes[i].scene_id +
                                ": orientation-reversing frame chart (det < 0)");
    }
    if (d.det_sign_flipped) ++flipped;
    report.scenes.push_back({scenes[i].scene_id, d.units, d.det_sign_flipped});
    rows.push_back(d.units);
    ids.push_back(scenes[i].scene_id);
  }
  if (rows.empty()) throw Error(ErrorKind::EmptySample, "no usable scenes");

  report.mixed_orientation = flipped > 0 && flipped < rows.size();
  if (report.mixed_orientation) {
    report.warnings.push_back("mixed orientation: " + std::to_string(flipped) + " of " +
                              std::to_string(rows.size()) +
                              " frame charts needed the det > 0 sign flip");
  }

  const DirectionSample sample = DirectionSample::from_rows(rows, std::move(ids));
  report.full = coplanarity_test(sample, config.alpha, config.df);
  report.vw_full = vw_by_block(sample);
  if (report.full.degenerate_test) {
    report.warnings.push_back("full sample: standard error is zero, test is degenerate");
  }

  if (sample.size() >= 3) {
    report.loo = leave_one_out(sample, config.alpha_ref, config.df);
    report.reduction = greedy_reduce(sample, config.alpha_ref, config.max_removals, config.df,
                                     config.reduction_rule);
    const DirectionSample reduced = sample.subset(report.reduction->final_indices);
    report.reduced = summarize(reduced, config.alpha, config.df);
    report.vw_reduced = vw_by_block(reduced);
  } else {
    report.warnings.push_back("fewer than 3 scenes: leave-one-out diagnostics skipped");
    report.reduced = report.full;
    report.vw_reduced = report.vw_full;
  }
  return report;
}

AnalysisReport run_analysis(const StudyConfig& config) {
  const std::string content = read_file(config.input_path);
  std::istringstream in(content);
  const auto scenes = parse_landmarks(in);
  return analyze_scenes(scenes, config, sha256_hex(content));
}

DirectionSample sample_of(const AnalysisReport& report) {
  std::vector<std::vector<Eigen::VectorXd>> rows;
  std::vector<std::string> ids;
  for (const auto& s : report.scenes) {
    rows.push_back(s.units);
    ids.push_back(s.scene_id);
  }
  return DirectionSample::from_rows(rows, std::move(ids));
}

std::vector<Eigen::Index> reduced_rows(const AnalysisReport& report) {
  if (report.reduction) return report.reduction->final_indices;
  std::vector<Eigen::Index> all(report.scenes.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
  return all;
}

void emit_outputs(const AnalysisReport& report, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + outdir.string() + ": " + ec.message());

  const DirectionSample sample = sample_of(report);
  const auto kept = reduced_rows(report);
  const int dim = sample.dimension();
  const bool multi = sample.blocks() > 1;
  const auto names = component_names(dim);

  {
    const auto path = outdir / "report.json";
    auto out = open_output(path);
    out << dump_report(report);
    finish(out, path);
  }
  {
    const auto path = outdir / "sphere_points.csv";
    auto out = open_output(path);
    out << "scene" << (multi ? ",block" : "");
    for (const auto& n : names) out << ',' << n;
    out << ",removed\n";
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      const bool removed = std::find(kept.begin(), kept.end(), i) == kept.end();
      for (int f = 0; f < sample.blocks(); ++f) {
        out << sample.scene_ids()[static_cast<std::size_t>(i)];
        if (multi) out << ',' << f + 1;
        const Eigen::VectorXd u = sample.unit(i, f);
        for (int c = 0; c < dim; ++c) out << ',' << format_double(u(c));
        out << ',' << (removed ? 1 : 0) << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = outdir / "mean_direction.csv";
    auto out = open_output(path);
    out << (multi ? "block," : "");
    for (const auto& n : names) out << n << ',';
    out << "resultant_length\n";
    for (int f = 0; f < sample.blocks(); ++f) {
      if (multi) out << f + 1 << ',';
      for (int c = 0; c < dim; ++c)
        out << format_double(report.full.extrinsic_mean(f * dim + c)) << ',';
      out << format_double(report.full.resultant(f)) << '\n';
    }
    finish(out, path);
  }
  write_angles(outdir / "angles_full.csv", sample, report.full.extrinsic_mean);
  write_angles(outdir / "angles_reduced.csv", sample.subset(kept), report.reduced.extrinsic_mean);
  {
    const auto path = outdir / "loo_table.csv";
    auto out = open_output(path);
    out << "scene,ts,se,z,ci_lower,ci_upper,focal\n";
    for (const auto& row : report.loo) {
      out << row.scene_id << ',' << format_double(row.ts) << ',' << format_double(row.se) << ','
          << (row.z ? format_double(*row.z) : "") << ',' << format_double(row.ci_lower) << ','
          << format_double(row.ci_upper) << ',' << (row.focal ? 1 : 0) << '\n';
    }
    finish(out, path);
  }
}

}  // namespace opshape
