#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "opshape/direction_sample.hpp"

namespace opshape {

/// Eigengap below which the top eigenvector is reported as ill-defined.
inline constexpr double kEigengapTolerance = 1e-10;

/// Veronese-Whitney embedding z z^T / ||z||^2. Throws DegeneratePoint for z = 0.
Eigen::MatrixXd vw_embed(const Eigen::VectorXd& z);

/// Average of the embeddings. Throws EmptySample.
Eigen::MatrixXd vw_mean(std::span<const Eigen::VectorXd> axes);

struct TopEigenpair {
  double lambda1 = 0.0;
  Eigen::VectorXd v1;  // unit, canonical sign
  double eigengap = 0.0;
  bool focal_warning = false;
};

TopEigenpair top_eigenpair(const Eigen::MatrixXd& j);

struct VwSummary {
  Eigen::MatrixXd mean_matrix;
  double lambda1 = 0.0;
  Eigen::VectorXd axis;
  double ts_ps = 0.0;  // 2 (1 - lambda1)
  double eigengap = 0.0;
  bool focal_warning = false;

  bool operator==(const VwSummary&) const = default;
};

VwSummary total_variance_ps(std::span<const Eigen::VectorXd> axes);

/// One VW summary per remaining-landmark block of the sample.
std::vector<VwSummary> vw_by_block(const DirectionSample& sample);

}  // namespace opshape
