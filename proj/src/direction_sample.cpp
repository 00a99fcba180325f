#include "opshape/direction_sample.hpp"

#include <cmath>
#include <string>

#include "opshape/error.hpp"

namespace opshape {

DirectionSample::DirectionSample(Eigen::MatrixXd stacked, int dimension,
                                 std::vector<std::string> scene_ids)
    : stacked_(std::move(stacked)), dimension_(dimension), scene_ids_(std::move(scene_ids)) {
  if (stacked_.rows() == 0) throw Error(ErrorKind::EmptySample, "sample has no rows");
  if (dimension_ < 2 || stacked_.cols() == 0 || stacked_.cols() % dimension_ != 0) {
    throw Error(ErrorKind::InvalidArgument, "sample width must be a positive multiple of m + 1");
  }
  if (scene_ids_.empty()) {
    scene_ids_.reserve(static_cast<std::size_t>(stacked_.rows()));
    for (Eigen::Index i = 0; i < stacked_.rows(); ++i) scene_ids_.push_back(std::to_string(i + 1));
  }
  if (static_cast<Eigen::Index>(scene_ids_.size()) != stacked_.rows()) {
    throw Error(ErrorKind::InvalidArgument, "scene id count differs from sample size");
  }
  for (Eigen::Index i = 0; i < stacked_.rows(); ++i) {
    for (int f = 0; f < blocks(); ++f) {
      const double norm = stacked_.row(i).segment(f * dimension_, dimension_).norm();
      if (!(std::abs(norm - 1.0) <= kUnitTolerance)) {
        throw Error(ErrorKind::InvalidArgument,
                    "row " + std::to_string(i + 1) + " block " + std::to_string(f + 1) +
                        " is not a unit vector");
      }
    }
  }
}

DirectionSample DirectionSample::from_rows(const std::vector<std::vector<Eigen::VectorXd>>& rows,
                                           std::vector<std::string> scene_ids) {
  if (rows.empty()) throw Error(ErrorKind::EmptySample, "sample has no rows");
  const auto q = static_cast<Eigen::Index>(rows.front().size());
  if (q == 0) throw Error(ErrorKind::InvalidArgument, "rows need at least one unit vector");
  const auto dim = rows.front().front().size();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(rows.size()), q * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != q) {
      throw Error(ErrorKind::InvalidArgument, "rows have differing numbers of blocks");
    }
    for (Eigen::Index f = 0; f < q; ++f) {
      const auto& u = rows[i][static_cast<std::size_t>(f)];
      if (u.size() != dim) throw Error(ErrorKind::InvalidArgument, "block dimension mismatch");
      stacked.row(static_cast<Eigen::Index>(i)).segment(f * dim, dim) = u.transpose();
    }
  }
  return DirectionSample(std::move(stacked), static_cast<int>(dim), std::move(scene_ids));
}

Eigen::VectorXd DirectionSample::unit(Eigen::Index row, int block) const {
  return stacked_.row(row).segment(block * dimension_, dimension_).transpose();
}

DirectionSample DirectionSample::subset(std::span<const Eigen::Index> rows) const {
  Eigen::MatrixXd picked(static_cast<Eigen::Index>(rows.size()), stacked_.cols());
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Eigen::Index r = rows[k];
    if (r < 0 || r >= size()) throw Error(ErrorKind::InvalidArgument, "row index out of range");
    picked.row(static_cast<Eigen::Index>(k)) = stacked_.row(r);
    ids.push_back(scene_ids_[static_cast<std::size_t>(r)]);
  }
  return DirectionSample(std::move(picked), dimension_, std::move(ids));
}

DirectionSample DirectionSample::without(Eigen::Index row) const {
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index i = 0; i < size(); ++i)
    if (i != row) keep.push_back(i);
  return subset(keep);
}

}  // namespace opshape
