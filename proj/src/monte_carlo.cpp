#include "opshape/monte_carlo.hpp"

#include <cmath>
#include <limits>

#include "opshape/directional_stats.hpp"
#include "opshape/error.hpp"
#include "opshape/kernels.hpp"
#include "opshape/rng.hpp"
#include "opshape/synth.hpp"

namespace opshape {
namespace {

constexpr std::uint64_t kReferenceStream = std::numeric_limits<std::uint64_t>::max();

}  // namespace

double reference_total_variance(const CoverageConfig& config) {
  return total_variance(tangent_gaussian_sample(config.direction, config.sigma,
                                                config.reference_draws,
                                                derive_seed(config.seed, kReferenceStream)));
}

CoverageResult run_coverage(const CoverageConfig& config) {
  if (config.replications < 1 || config.n < 2) {
    throw Error(ErrorKind::InvalidArgument, "coverage needs replications >= 1 and n >= 2");
  }
  CoverageResult out;
  out.reference_ts = reference_total_variance(config);
  out.replicates = kernels::omp::coverage_replicates(config);

  int covered = 0;
  double sum_ts = 0.0;
  double sum_se = 0.0;
  for (const auto& r : out.replicates) {
    if (r.lower <= out.reference_ts && out.reference_ts <= r.upper) ++covered;
    sum_ts += r.ts;
    sum_se += r.se;
  }
  const auto count = static_cast<double>(out.replicates.size());
  out.coverage = covered / count;
  out.mean_ts = sum_ts / count;
  out.mean_se = sum_se / count;
  double ss = 0.0;
  for (const auto& r : out.replicates) ss += (r.ts - out.mean_ts) * (r.ts - out.mean_ts);
  out.sd_ts = count > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  return out;
}

double bootstrap_se(const DirectionSample& sample, int resamples, std::uint64_t seed) {
  if (resamples < 2) throw Error(ErrorKind::InvalidArgument, "bootstrap needs >= 2 resamples");
  const std::vector<double> ts = kernels::omp::bootstrap_ts(sample, resamples, seed);
  double mean = 0.0;
  for (double t : ts) mean += t;
  mean /= static_cast<double>(ts.size());
  double ss = 0.0;
  for (double t : ts) ss += (t - mean) * (t - mean);
  return std::sqrt(ss / static_cast<double>(ts.size() - 1));
}

}  // namespace opshape
