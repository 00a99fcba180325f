#include "opshape/report_json.hpp"

#include "opshape/error.hpp"

namespace opshape {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "opshape.report/1";

json vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vec_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json mat(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd mat_from(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
      throw Error(ErrorKind::SchemaError, "ragged matrix in report");
    }
    m.row(r) = vec_from(j[static_cast<std::size_t>(r)]).transpose();
  }
  return m;
}

template <typename T>
json optional_value(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

VwSummary vw_from_json(const json& j) {
  VwSummary s;
  s.mean_matrix = mat_from(j.at("mean_matrix"));
  s.lambda1 = j.at("lambda1").get<double>();
  s.axis = vec_from(j.at("axis"));
  s.ts_ps = j.at("ts_ps").get<double>();
  s.eigengap = j.at("eigengap").get<double>();
  s.focal_warning = j.at("focal_warning").get<bool>();
  return s;
}

LooRow loo_from_json(const json& j) {
  LooRow r;
  r.index = j.at("index").get<Eigen::Index>();
  r.scene_id = j.at("scene").get<std::string>();
  r.focal = j.at("focal").get<bool>();
  r.ts = j.at("ts").get<double>();
  r.se = j.at("se").get<double>();
  r.z = optional_from<double>(j.at("z"));
  r.ci_lower = j.at("ci_lower").get<double>();
  r.ci_upper = j.at("ci_upper").get<double>();
  return r;
}

ReductionTrace trace_from_json(const json& j) {
  ReductionTrace t;
  for (const auto& s : j.at("steps")) {
    ReductionStep step;
    step.removed_index = s.at("removed_index").get<Eigen::Index>();
    step.removed_scene_id = s.at("removed_scene").get<std::string>();
    step.summary = ops_summary_from_json(s.at("summary"));
    step.ci_lower = s.at("ci_lower").get<double>();
    t.steps.push_back(std::move(step));
  }
  t.alpha_ref = j.at("alpha_ref").get<double>();
  t.rule = reduction_rule_from_string(j.at("rule").get<std::string>());
  t.initial_ci_lower = j.at("initial_ci_lower").get<double>();
  t.final_indices = j.at("final_indices").get<std::vector<Eigen::Index>>();
  t.final_sample_ids = j.at("final_scenes").get<std::vector<std::string>>();
  t.stopped_reason = stop_reason_from_string(j.at("stopped_reason").get<std::string>());
  return t;
}

StudyConfig config_from_json(const json& j) {
  StudyConfig c;
  c.frame_labels = j.at("frame").get<std::vector<int>>();
  c.remaining_labels = j.at("remaining").get<std::vector<int>>();
  c.alpha = j.at("alpha").get<double>();
  c.alpha_ref = j.at("alpha_ref").get<double>();
  c.df = optional_from<int>(j.at("df"));
  c.max_removals = optional_from<int>(j.at("max_removals"));
  c.reduction_rule = reduction_rule_from_string(j.at("reduction_rule").get<std::string>());
  c.skip_degenerate = j.at("skip_degenerate").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.input_path = j.at("input").get<std::string>();
  return c;
}

}  // namespace

json to_json(const OpsSummary& s) {
  return {
      {"n", s.n},
      {"q", s.q},
      {"dimension", s.dimension},
      {"mean", vec(s.mean)},
      {"resultant", vec(s.resultant)},
      {"extrinsic_mean", vec(s.extrinsic_mean)},
      {"ts", s.ts},
      {"covariance", mat(s.covariance)},
      {"se", s.se},
      {"z", optional_value(s.z)},
      {"p_normal", s.p_normal},
      {"degenerate_test", s.degenerate_test},
      {"chisq", s.chisq},
      {"df", s.df},
      {"p_chisq", s.p_chisq},
      {"alpha", s.alpha},
      {"z_critical", s.z_critical},
      {"ci", {{"lower", s.ci.lower}, {"upper", s.ci.upper}}},
      {"reject_ci", s.reject_ci},
      {"reject_chisq", s.reject_chisq},
  };
}

OpsSummary ops_summary_from_json(const json& j) {
  OpsSummary s;
  s.n = j.at("n").get<Eigen::Index>();
  s.q = j.at("q").get<int>();
  s.dimension = j.at("dimension").get<int>();
  s.mean = vec_from(j.at("mean"));
  s.resultant = vec_from(j.at("resultant"));
  s.extrinsic_mean = vec_from(j.at("extrinsic_mean"));
  s.ts = j.at("ts").get<double>();
  s.covariance = mat_from(j.at("covariance"));
  s.se = j.at("se").get<double>();
  s.z = optional_from<double>(j.at("z"));
  s.p_normal = j.at("p_normal").get<double>();
  s.degenerate_test = j.at("degenerate_test").get<bool>();
  s.chisq = j.at("chisq").get<double>();
  s.df = j.at("df").get<int>();
  s.p_chisq = j.at("p_chisq").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.z_critical = j.at("z_critical").get<double>();
  s.ci = {j.at("ci").at("lower").get<double>(), j.at("ci").at("upper").get<double>()};
  s.reject_ci = j.at("reject_ci").get<bool>();
  s.reject_chisq = j.at("reject_chisq").get<bool>();
  return s;
}

json to_json(const VwSummary& s) {
  return {{"mean_matrix", mat(s.mean_matrix)}, {"lambda1", s.lambda1},
          {"axis", vec(s.axis)},               {"ts_ps", s.ts_ps},
          {"eigengap", s.eigengap},            {"focal_warning", s.focal_warning}};
}

json to_json(const LooRow& r) {
  return {{"index", r.index},       {"scene", r.scene_id},         {"focal", r.focal},
          {"ts", r.ts},             {"se", r.se},                  {"z", optional_value(r.z)},
          {"ci_lower", r.ci_lower}, {"ci_upper", r.ci_upper}};
}

json to_json(const ReductionTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"removed_index", s.removed_index},
                     {"removed_scene", s.removed_scene_id},
                     {"summary", to_json(s.summary)},
                     {"ci_lower", s.ci_lower}});
  }
  return {{"steps", steps},
          {"alpha_ref", t.alpha_ref},
          {"rule", to_string(t.rule)},
          {"initial_ci_lower", t.initial_ci_lower},
          {"final_indices", t.final_indices},
          {"final_scenes", t.final_sample_ids},
          {"stopped_reason", to_string(t.stopped_reason)}};
}

json to_json(const StudyConfig& c) {
  return {{"frame", c.frame_labels},
          {"remaining", c.remaining_labels},
          {"alpha", c.alpha},
          {"alpha_ref", c.alpha_ref},
          {"df", optional_value(c.df)},
          {"max_removals", optional_value(c.max_removals)},
          {"reduction_rule", to_string(c.reduction_rule)},
          {"skip_degenerate", c.skip_degenerate},
          {"seed", c.seed},
          {"input", c.input_path}};
}

json report_to_json(const AnalysisReport& r) {
  json skipped = json::array();
  for (const auto& s : r.provenance.skipped_scenes)
    skipped.push_back({{"scene", s.scene_id}, {"reason", s.reason}});

  json scenes = json::array();
  for (const auto& s : r.scenes) {
    json units = json::array();
    for (const auto& u : s.units) units.push_back(vec(u));
    scenes.push_back({{"scene", s.scene_id}, {"units", units}, {"det_sign_flipped", s.det_sign_flipped}});
  }

  auto vw_list = [](const std::vector<VwSummary>& list) {
    json out = json::array();
    for (const auto& v : list) out.push_back(to_json(v));
    return out;
  };
  json loo = json::array();
  for (const auto& row : r.loo) loo.push_back(to_json(row));

  return {
      {"schema", kSchema},
      {"software", {{"name", "opshape"}, {"version", r.provenance.software_version}}},
      {"provenance", {{"input_sha256", r.provenance.input_sha256}, {"skipped_scenes", skipped}}},
      {"config", to_json(r.config)},
      {"warnings", r.warnings},
      {"mixed_orientation", r.mixed_orientation},
      {"scenes", scenes},
      {"full", to_json(r.full)},
      {"vw_full", vw_list(r.vw_full)},
      {"loo", loo},
      {"reduction", r.reduction ? to_json(*r.reduction) : json(nullptr)},
      {"reduced", to_json(r.reduced)},
      {"vw_reduced", vw_list(r.vw_reduced)},
  };
}

AnalysisReport report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSchema) {
      throw Error(ErrorKind::SchemaError, "unsupported report schema");
    }
    AnalysisReport r;
    r.config = config_from_json(j.at("config"));
    r.provenance.input_sha256 = j.at("provenance").at("input_sha256").get<std::string>();
    r.provenance.software_version = j.at("software").at("version").get<std::string>();
    for (const auto& s : j.at("provenance").at("skipped_scenes"))
      r.provenance.skipped_scenes.push_back({s.at("scene").get<std::string>(), s.at("reason").get<std::string>()});
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.mixed_orientation = j.at("mixed_orientation").get<bool>();
    for (const auto& s : j.at("scenes")) {
      SceneRecord rec;
      rec.scene_id = s.at("scene").get<std::string>();
      for (const auto& u : s.at("units")) rec.units.push_back(vec_from(u));
      rec.det_sign_flipped = s.at("det_sign_flipped").get<bool>();
      r.scenes.push_back(std::move(rec));
    }
    r.full = ops_summary_from_json(j.at("full"));
    for (const auto& v : j.at("vw_full")) r.vw_full.push_back(vw_from_json(v));
    for (const auto& row : j.at("loo")) r.loo.push_back(loo_from_json(row));
    if (!j.at("reduction").is_null()) r.reduction = trace_from_json(j.at("reduction"));
    r.reduced = ops_summary_from_json(j.at("reduced"));
    for (const auto& v : j.at("vw_reduced")) r.vw_reduced.push_back(vw_from_json(v));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const AnalysisReport& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace opshape
