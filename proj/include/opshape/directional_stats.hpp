#pragma once

#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "opshape/direction_sample.hpp"

namespace opshape {

/// Below this mean-vector norm the extrinsic mean is undefined.
inline constexpr double kFocalTolerance = 1e-10;

/// 1 - R_n at or below this (64 ulps of 1) counts as exactly zero.
inline constexpr double kDispersionFloor = 64.0 * std::numeric_limits<double>::epsilon();

/// Blockwise arithmetic mean, stacked like a sample row.
Eigen::VectorXd mean_vector(const DirectionSample& sample);

/// Mean resultant length R_n of each block.
Eigen::VectorXd resultant_length(const Eigen::VectorXd& mean, int dimension);

/// Blockwise mean / ||mean||. Throws FocalMean.
Eigen::VectorXd extrinsic_mean(const Eigen::VectorXd& mean, int dimension);

/// tS = 2 * sum over blocks of (1 - R_n).
double total_variance(const DirectionSample& sample);

/// (1/n) sum (u_i - mean)(u_i - mean)^T over the stacked rows.
Eigen::MatrixXd sample_covariance(const DirectionSample& sample);

/// Delta-method standard error of tS, with gradient -2 mean/||mean|| per block.
double delta_se(const DirectionSample& sample);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const Interval&) const = default;
};

/// tS -/+ z_{1-alpha/2} se. Not clamped at zero.
Interval confidence_interval(double ts, double se, double alpha);

struct ZTest {
  std::optional<double> z;  // empty when se == 0
  double p_value = 1.0;     // one-sided, 1 - Phi(z)
  bool degenerate = false;
};

/// z = tS / se. When se == 0 the test is degenerate: p = 1 if tS == 0, else 0.
ZTest z_statistic(double ts, double se);

struct ChiSquareTest {
  double statistic = 0.0;  // T = n tS
  int df = 0;
  double p_value = 1.0;
};

ChiSquareTest chisq_statistic(double ts, Eigen::Index n, int df);

/// Every full-sample quantity of the coplanarity analysis.
struct OpsSummary {
  Eigen::Index n = 0;
  int q = 0;
  int dimension = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd resultant;
  Eigen::VectorXd extrinsic_mean;
  double ts = 0.0;
  Eigen::MatrixXd covariance;
  double se = 0.0;
  std::optional<double> z;
  double p_normal = 1.0;
  bool degenerate_test = false;
  double chisq = 0.0;
  int df = 0;
  double p_chisq = 1.0;
  double alpha = 0.05;
  double z_critical = 0.0;
  Interval ci;
  bool reject_ci = false;      // primary decision: lower endpoint > 0
  bool reject_chisq = false;   // p_chisq < alpha

  bool operator==(const OpsSummary&) const = default;
};

/// Builds the summary; df defaults to m * q. Throws FocalMean, InvalidLevel.
OpsSummary summarize(const DirectionSample& sample, double alpha, std::optional<int> df = {});

/// summarize() with the n >= 2 precondition of the test enforced.
OpsSummary coplanarity_test(const DirectionSample& sample, double alpha,
                            std::optional<int> df = {});

/// n x q matrix of arccos(u_i . mean_E) per block, in [0, pi].
Eigen::MatrixXd angular_distances(const DirectionSample& sample);

/// Angles against a given stacked extrinsic mean (e.g. one from another sample).
Eigen::MatrixXd angular_distances(const DirectionSample& sample,
                                  const Eigen::VectorXd& extrinsic_mean);

}  // namespace opshape
