#include "opshape/vw_comparison.hpp"

#include <algorithm>
#include <vector>

#include "opshape/error.hpp"
#include "opshape/geometry.hpp"
#include "opshape/jacobi.hpp"

namespace opshape {

Eigen::MatrixXd vw_embed(const Eigen::VectorXd& z) {
  const double norm2 = z.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorKind::DegeneratePoint, "VW embedding of the zero vector");
  return z * z.transpose() / norm2;
}

Eigen::MatrixXd vw_mean(std::span<const Eigen::VectorXd> axes) {
  if (axes.empty()) throw Error(ErrorKind::EmptySample, "VW mean of an empty sample");
  const auto dim = axes.front().size();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& z : axes) {
    if (z.size() != dim) throw Error(ErrorKind::InvalidArgument, "axes differ in dimension");
    j += vw_embed(z);
  }
  j /= static_cast<double>(axes.size());
  return 0.5 * (j + j.transpose());
}

TopEigenpair top_eigenpair(const Eigen::MatrixXd& j) {
  const SymmetricEigen eig = jacobi_eigen(j);
  TopEigenpair out;
  out.lambda1 = eig.values(0);
  out.v1 = canonical_axis(eig.vectors.col(0).normalized());
  out.eigengap = eig.values.size() > 1 ? eig.values(0) - eig.values(1) : 0.0;
  out.focal_warning = eig.values.size() > 1 && out.eigengap < kEigengapTolerance;
  return out;
}

VwSummary total_variance_ps(std::span<const Eigen::VectorXd> axes) {
  VwSummary s;
  s.mean_matrix = vw_mean(axes);
  const TopEigenpair top = top_eigenpair(s.mean_matrix);
  s.lambda1 = top.lambda1;
  s.axis = top.v1;
  s.ts_ps = 2.0 * std::max(0.0, 1.0 - top.lambda1);
  s.eigengap = top.eigengap;
  s.focal_warning = top.focal_warning;
  return s;
}

std::vector<VwSummary> vw_by_block(const DirectionSample& sample) {
  std::vector<VwSummary> out;
  out.reserve(static_cast<std::size_t>(sample.blocks()));
  std::vector<Eigen::VectorXd> axes(static_cast<std::size_t>(sample.size()));
  for (int f = 0; f < sample.blocks(); ++f) {
    for (Eigen::Index i = 0; i < sample.size(); ++i)
      axes[static_cast<std::size_t>(i)] = canonical_axis(sample.unit(i, f));
    out.push_back(total_variance_ps(axes));
  }
  return out;
}

}  // namespace opshape
