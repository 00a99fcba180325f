#include <limits>

#include "opshape/error.hpp"
#include "opshape/kernels.hpp"
#include "opshape/rng.hpp"
#include "opshape/synth.hpp"

namespace opshape::kernels {

LooRow loo_row(const DirectionSample& sample, Eigen::Index row, double alpha,
               std::optional<int> df) {
  LooRow out;
  out.index = row;
  out.scene_id = sample.scene_ids()[static_cast<std::size_t>(row)];
  try {
    const OpsSummary s = summarize(sample.without(row), alpha, df);
    out.ts = s.ts;
    out.se = s.se;
    out.z = s.z;
    out.ci_lower = s.ci.lower;
    out.ci_upper = s.ci.upper;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FocalMean) throw;
    out.focal = true;
  }
  return out;
}

Replicate coverage_replicate(const CoverageConfig& config, int replication) {
  const DirectionSample sample =
      tangent_gaussian_sample(config.direction, config.sigma, config.n,
                              derive_seed(config.seed, static_cast<std::uint64_t>(replication)));
  const OpsSummary s = summarize(sample, config.alpha);
  return {s.ts, s.se, s.ci.lower, s.ci.upper};
}

double bootstrap_replicate(const DirectionSample& sample, std::uint64_t seed, int resample) {
  SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(resample)));
  const Eigen::Index n = sample.size();
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) {
    r = static_cast<Eigen::Index>(rng.next_double() * static_cast<double>(n));
  }
  return total_variance(sample.subset(rows));
}

namespace serial {

std::vector<SceneResult> scene_directions(std::span<const LandmarkScene> scenes,
                                          const FrameSpec& spec) {
  std::vector<SceneResult> out(scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    try {
      out[i].directions = scene_to_directions(scenes[i], spec);
    } catch (...) {
      out[i].error = std::current_exception();
    }
  }
  return out;
}

std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df) {
  std::vector<LooRow> rows(static_cast<std::size_t>(sample.size()));
  for (Eigen::Index i = 0; i < sample.size(); ++i)
    rows[static_cast<std::size_t>(i)] = loo_row(sample, i, alpha, df);
  return rows;
}

std::vector<Replicate> coverage_replicates(const CoverageConfig& config) {
  std::vector<Replicate> out(static_cast<std::size_t>(config.replications));
  for (int r = 0; r < config.replications; ++r)
    out[static_cast<std::size_t>(r)] = coverage_replicate(config, r);
  return out;
}

std::vector<double> bootstrap_ts(const DirectionSample& sample, int resamples,
                                 std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b)
    out[static_cast<std::size_t>(b)] = bootstrap_replicate(sample, seed, b);
  return out;
}

}  // namespace serial
}  // namespace opshape::kernels
