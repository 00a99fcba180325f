#include "opshape/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "opshape/error.hpp"

namespace opshape {
namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double rel_tol, int max_sweeps) {
  const Eigen::Index n = input.rows();
  if (n == 0 || input.cols() != n) {
    throw Error(ErrorKind::InvalidArgument, "jacobi_eigen needs a nonempty square matrix");
  }
  const double scale = input.norm();
  if ((input - input.transpose()).norm() > 1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "jacobi_eigen needs a symmetric matrix");
  }

  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = rel_tol * scale;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle chosen so the rotated (p, q) entry vanishes; the
        // smaller root for t keeps |theta| <= pi / 4.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen result;
  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    result.values(k) = a(order[k], order[k]);
    result.vectors.col(k) = v.col(order[k]);
  }
  result.sweeps = sweep;
  return result;
}

}  // namespace opshape
