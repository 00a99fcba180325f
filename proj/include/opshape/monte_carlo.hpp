#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "opshape/direction_sample.hpp"

namespace opshape {

struct CoverageConfig {
  Eigen::VectorXd direction = Eigen::Vector3d::UnitZ();
  double sigma = 0.1;
  Eigen::Index n = 200;
  int replications = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  Eigen::Index reference_draws = 1'000'000;
};

struct Replicate {
  double ts = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Replicate&) const = default;
};

struct CoverageResult {
  double reference_ts = 0.0;  // large-sample estimate of the population index
  double coverage = 0.0;
  double mean_ts = 0.0;
  double mean_se = 0.0;
  double sd_ts = 0.0;
  std::vector<Replicate> replicates;
};

/// Population index estimated from one tangent-Gaussian sample of
/// config.reference_draws points (its own substream of the seed).
double reference_total_variance(const CoverageConfig& config);

/// Delta-method CI coverage of the reference index over independent
/// replications; replication r uses substream derive_seed(seed, r).
CoverageResult run_coverage(const CoverageConfig& config);

/// Standard deviation of tS over nonparametric bootstrap resamples.
double bootstrap_se(const DirectionSample& sample, int resamples, std::uint64_t seed);

}  // namespace opshape
