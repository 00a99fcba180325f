#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opshape {

/// n observations of q unit vectors in R^{m+1}, stored row-wise as an
/// n x ((m+1) q) matrix so block f of row i is row(i).segment(f (m+1), m+1).
class DirectionSample {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  DirectionSample(Eigen::MatrixXd stacked, int dimension, std::vector<std::string> scene_ids);

  /// Rows of q unit vectors each.
  static DirectionSample from_rows(const std::vector<std::vector<Eigen::VectorXd>>& rows,
                                   std::vector<std::string> scene_ids);

  Eigen::Index size() const noexcept { return stacked_.rows(); }
  int dimension() const noexcept { return dimension_; }
  int blocks() const noexcept { return static_cast<int>(stacked_.cols()) / dimension_; }
  Eigen::Index width() const noexcept { return stacked_.cols(); }

  const Eigen::MatrixXd& stacked() const noexcept { return stacked_; }
  Eigen::VectorXd unit(Eigen::Index row, int block) const;
  const std::vector<std::string>& scene_ids() const noexcept { return scene_ids_; }

  DirectionSample subset(std::span<const Eigen::Index> rows) const;
  DirectionSample without(Eigen::Index row) const;

 private:
  Eigen::MatrixXd stacked_;
  int dimension_;
  std::vector<std::string> scene_ids_;
};

}  // namespace opshape
