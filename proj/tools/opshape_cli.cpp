// Command-line front end. Exit codes: 0 success, 1 I/O or internal failure,
// 2 parse/schema/usage error, 3 geometric degeneracy, 4 statistical
// degeneracy (always for a focal mean, otherwise only with --strict).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opshape/analysis.hpp"
#include "opshape/error.hpp"
#include "opshape/kernels.hpp"
#include "opshape/landmarks_csv.hpp"
#include "opshape/monte_carlo.hpp"
#include "opshape/report_json.hpp"
#include "opshape/rng.hpp"
#include "opshape/synth.hpp"

namespace {

using namespace opshape;
using nlohmann::json;

constexpr std::uint64_t kCheckStream = std::uint64_t{1} << 40;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kGeometric = 3, kStatistical = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidFrame:
    case ErrorKind::InvalidLevel:
    case ErrorKind::InvalidArgument:
      return kUsage;
    case ErrorKind::InvalidLandmark:
    case ErrorKind::DegenerateFrame:
    case ErrorKind::DegeneratePoint:
    case ErrorKind::BehindCamera:
    case ErrorKind::GenerationFailed:
      return kGeometric;
    case ErrorKind::FocalMean:
    case ErrorKind::EmptySample:
      return kStatistical;
    case ErrorKind::Io:
      return kFailure;
  }
  return kFailure;
}

struct StudyOptions {
  std::string input;
  std::vector<int> frame{1, 2, 4, 3};
  std::vector<int> remaining{5};
  double alpha = 0.05;
  double alpha_ref = 0.05;
  std::optional<int> df;
  std::optional<int> max_removals;
  std::string rule = "max_lower";
  bool skip_degenerate = false;
  bool strict = false;
  std::string out;

  StudyConfig config() const {
    StudyConfig c;
    c.frame_labels = frame;
    c.remaining_labels = remaining;
    c.alpha = alpha;
    c.alpha_ref = alpha_ref;
    c.df = df;
    c.max_removals = max_removals;
    c.reduction_rule = reduction_rule_from_string(rule);
    c.skip_degenerate = skip_degenerate;
    c.input_path = input;
    c.output_dir = out;
    return c;
  }
};

void add_study_options(CLI::App* cmd, StudyOptions& o, const std::string& out_help) {
  cmd->add_option("input", o.input, "Landmark CSV (scene,landmark,x,y)")->required();
  cmd->add_option("--frame", o.frame, "Ordered frame labels")->delimiter(',')->capture_default_str();
  cmd->add_option("--remaining", o.remaining, "Remaining labels")->delimiter(',')->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Test level")->capture_default_str();
  cmd->add_option("--alpha-ref", o.alpha_ref, "Reference level for the reduction")->capture_default_str();
  cmd->add_option("--df", o.df, "Chi-square degrees of freedom (default m*q)");
  cmd->add_option("--max-removals", o.max_removals, "Reduction cap (default n/4)");
  cmd->add_option("--reduction-rule", o.rule, "Greedy step: max_lower or min_lower")
      ->check(CLI::IsMember({"max_lower", "min_lower"}))
      ->capture_default_str();
  cmd->add_flag("--skip-degenerate", o.skip_degenerate, "Skip scenes with a degenerate frame");
  cmd->add_flag("--strict", o.strict, "Exit 4 when a statistical degeneracy is flagged");
  cmd->add_option("--out", o.out, out_help);
}

// Writes text to the named file, or stdout when the name is empty.
void emit_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out.flush()) throw Error(ErrorKind::Io, "write failed for " + path);
}

bool statistically_degenerate(const AnalysisReport& r) {
  if (r.full.degenerate_test || r.reduced.degenerate_test) return true;
  for (const auto& v : r.vw_full)
    if (v.focal_warning) return true;
  for (const auto& row : r.loo)
    if (row.focal) return true;
  return false;
}

int finish_study(const AnalysisReport& r, const StudyOptions& o) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (o.strict && statistically_degenerate(r)) {
    std::cerr << "error: statistical degeneracy flagged (--strict)\n";
    return kStatistical;
  }
  return kOk;
}

std::string summary_line(const char* label, const OpsSummary& s) {
  std::ostringstream out;
  out.precision(6);
  out << label << ": n=" << s.n << " tS=" << s.ts << " SE=" << s.se << " CI=[" << s.ci.lower
      << ", " << s.ci.upper << "] T=" << s.chisq << " df=" << s.df << " p_chisq=" << s.p_chisq
      << " reject=" << (s.reject_ci ? "yes" : "no") << "\n";
  return out.str();
}

int run_analyze(const StudyOptions& o) {
  if (o.out.empty()) throw Error(ErrorKind::InvalidArgument, "analyze needs --out DIR");
  const AnalysisReport r = run_analysis(o.config());
  emit_outputs(r, o.out);
  std::cout << summary_line("full", r.full);
  if (r.reduction) {
    std::cout << "removed " << r.reduction->steps.size() << " scene(s), stopped: "
              << to_string(r.reduction->stopped_reason) << "\n";
  }
  std::cout << summary_line("reduced", r.reduced);
  return finish_study(r, o);
}

int run_reduce(const StudyOptions& o) {
  const AnalysisReport r = run_analysis(o.config());
  json loo = json::array();
  for (const auto& row : r.loo) loo.push_back(to_json(row));
  const json doc{{"provenance", {{"input_sha256", r.provenance.input_sha256}}},
                 {"full", to_json(r.full)},
                 {"loo", loo},
                 {"reduction", r.reduction ? to_json(*r.reduction) : json(nullptr)},
                 {"reduced", to_json(r.reduced)}};
  emit_text(o.out, doc.dump(2) + "\n");
  return finish_study(r, o);
}

int run_vw(const StudyOptions& o) {
  const AnalysisReport r = run_analysis(o.config());
  json full = json::array(), reduced = json::array();
  for (const auto& v : r.vw_full) full.push_back(to_json(v));
  for (const auto& v : r.vw_reduced) reduced.push_back(to_json(v));
  json ratio = json::array();
  for (std::size_t f = 0; f < r.vw_full.size(); ++f) {
    const double ops = 2.0 * (1.0 - r.full.resultant(static_cast<Eigen::Index>(f)));
    ratio.push_back(ops > 0.0 ? json(r.vw_full[f].ts_ps / ops) : json(nullptr));
  }
  const json doc{{"provenance", {{"input_sha256", r.provenance.input_sha256}}},
                 {"ts_ops", r.full.ts},
                 {"vw_full", full},
                 {"vw_reduced", reduced},
                 {"ps_to_ops_ratio", ratio}};
  emit_text(o.out, doc.dump(2) + "\n");
  bool focal = false;
  for (const auto& v : r.vw_full) focal = focal || v.focal_warning;
  if (focal) std::cerr << "warning: top eigenvalue of the VW mean is not separated\n";
  if (o.strict && focal) return kStatistical;
  return kOk;
}

struct SynthOptions {
  int k = 5;
  int n = 41;
  double delta = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 7;
  std::vector<int> frame{1, 2, 4, 3};
  std::string out;
};

int run_synth(const SynthOptions& o) {
  const SynthStudy study = synth_study(o.k, o.n, o.delta, o.seed, o.noise, o.frame);
  std::ostringstream csv;
  write_landmarks(csv, study.images);
  emit_text(o.out, csv.str());
  return kOk;
}

struct McOptions {
  double sigma = 0.1;
  Eigen::Index n = 200;
  int replications = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  Eigen::Index reference_draws = 1'000'000;
  int bootstrap = 2000;
  std::vector<double> direction{0.0, 0.0, 1.0};
  std::string out;
};

int run_mc(const McOptions& o) {
  CoverageConfig c;
  c.direction = Eigen::Map<const Eigen::VectorXd>(o.direction.data(),
                                                  static_cast<Eigen::Index>(o.direction.size()));
  c.sigma = o.sigma;
  c.n = o.n;
  c.replications = o.replications;
  c.seed = o.seed;
  c.alpha = o.alpha;
  c.reference_draws = o.reference_draws;
  if (c.replications < 1) throw Error(ErrorKind::InvalidArgument, "--replications must be >= 1");
  const CoverageResult r = run_coverage(c);
  json doc{{"sigma", c.sigma},
           {"n", c.n},
           {"replications", c.replications},
           {"seed", c.seed},
           {"alpha", c.alpha},
           {"reference_draws", c.reference_draws},
           {"reference_ts", r.reference_ts},
           {"coverage", r.coverage},
           {"mean_ts", r.mean_ts},
           {"sd_ts", r.sd_ts},
           {"mean_se", r.mean_se}};
  if (o.bootstrap > 0) {
    // One fixed sample, on a substream no replication uses: delta-method SE
    // against the bootstrap SE.
    const DirectionSample sample =
        tangent_gaussian_sample(c.direction, c.sigma, c.n, derive_seed(c.seed, kCheckStream));
    doc["check_sample"] = {{"delta_se", delta_se(sample)},
                           {"bootstrap_se", bootstrap_se(sample, o.bootstrap, derive_seed(c.seed, kCheckStream + 1))},
                           {"bootstrap_resamples", o.bootstrap}};
  }
  emit_text(o.out, doc.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oriented projective shape total-variance analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(opshape::kSoftwareVersion));

  StudyOptions analyze_opts, reduce_opts, vw_opts;
  auto* analyze = app.add_subcommand("analyze", "Full pipeline; writes report.json and plot CSVs");
  add_study_options(analyze, analyze_opts, "Output directory");
  auto* reduce = app.add_subcommand("reduce", "Leave-one-out table and greedy reduction (JSON)");
  add_study_options(reduce, reduce_opts, "Output file (default stdout)");
  auto* vw = app.add_subcommand("vw", "Veronese-Whitney projective-shape comparator (JSON)");
  add_study_options(vw, vw_opts, "Output file (default stdout)");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate pinhole images of one scene (CSV)");
  synth->add_option("--k", synth_opts.k, "Landmarks per scene")->capture_default_str();
  synth->add_option("--n", synth_opts.n, "Number of cameras")->capture_default_str();
  synth->add_option("--delta", synth_opts.delta, "Out-of-plane offset of non-frame landmarks")->capture_default_str();
  synth->add_option("--noise", synth_opts.noise, "Image-plane Gaussian noise sigma")->capture_default_str();
  synth->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
  synth->add_option("--frame", synth_opts.frame, "Frame labels kept in general position")->delimiter(',')->capture_default_str();
  synth->add_option("--out", synth_opts.out, "Output CSV (default stdout)");

  McOptions mc_opts;
  auto* mc = app.add_subcommand("mc", "Monte Carlo coverage of the delta-method interval (JSON)");
  mc->add_option("--sigma", mc_opts.sigma, "Tangent Gaussian scale")->capture_default_str();
  mc->add_option("--n", mc_opts.n, "Sample size")->capture_default_str();
  mc->add_option("--replications", mc_opts.replications, "Replications")->capture_default_str();
  mc->add_option("--seed", mc_opts.seed, "Random seed")->capture_default_str();
  mc->add_option("--alpha", mc_opts.alpha, "Interval level")->capture_default_str();
  mc->add_option("--reference-draws", mc_opts.reference_draws, "Draws for the reference index")->capture_default_str();
  mc->add_option("--bootstrap", mc_opts.bootstrap, "Bootstrap resamples for the SE check (0 to skip)")->capture_default_str();
  mc->add_option("--direction", mc_opts.direction, "Population mean direction")->delimiter(',');
  mc->add_option("--out", mc_opts.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return run_analyze(analyze_opts);
    if (*reduce) return run_reduce(reduce_opts);
    if (*vw) return run_vw(vw_opts);
    if (*synth) return run_synth(synth_opts);
    if (*mc) return run_mc(mc_opts);
  } catch (const opshape::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
