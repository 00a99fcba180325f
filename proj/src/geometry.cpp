#include "opshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "opshape/error.hpp"

namespace opshape {
namespace {

constexpr double kSingularTolerance = 1e-10;
constexpr double kLambdaTolerance = 1e-10;
constexpr double kPointTolerance = 1e-12;

void check_homogeneous_size(std::span<const HomogeneousPoint> points, Eigen::Index expected) {
  for (const auto& p : points) {
    if (p.size() != expected) {
      throw Error(ErrorKind::InvalidArgument, "homogeneous points must all have length m + 1");
    }
  }
}

}  // namespace

const Vector& LandmarkScene::point(int label) const {
  if (label < 1 || label > size()) {
    throw Error(ErrorKind::InvalidLandmark,
                "scene " + scene_id + " has no landmark " + std::to_string(label));
  }
  return points[static_cast<std::size_t>(label - 1)];
}

void validate(const LandmarkScene& scene) {
  if (scene.points.empty()) {
    throw Error(ErrorKind::InvalidLandmark, "scene " + scene.scene_id + " has no landmarks");
  }
  const auto m = scene.points.front().size();
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    const auto& p = scene.points[i];
    if (p.size() != m || m < 1) {
      throw Error(ErrorKind::InvalidLandmark,
                  "scene " + scene.scene_id + ": inconsistent landmark dimension");
    }
    if (!p.allFinite()) {
      throw Error(ErrorKind::InvalidLandmark, "scene " + scene.scene_id + ": landmark " +
                                                  std::to_string(i + 1) + " is not finite");
    }
  }
}

FrameSpec::FrameSpec(std::vector<int> frame_labels, std::vector<int> remaining_labels)
    : frame_(std::move(frame_labels)), remaining_(std::move(remaining_labels)) {
  if (frame_.size() < 3) {
    throw Error(ErrorKind::InvalidFrame, "a frame needs m + 2 >= 3 labels");
  }
  if (remaining_.empty()) {
    throw Error(ErrorKind::InvalidFrame, "at least one remaining label is required");
  }
  std::set<int> seen;
  for (int label : frame_) {
    if (label < 1) throw Error(ErrorKind::InvalidFrame, "labels must be positive");
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::InvalidFrame, "duplicate frame label " + std::to_string(label));
    }
  }
  for (int label : remaining_) {
    if (label < 1) throw Error(ErrorKind::InvalidFrame, "labels must be positive");
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::InvalidFrame,
                  "label " + std::to_string(label) + " repeated or shared with the frame");
    }
  }
}

FrameSpec FrameSpec::sope_creek() { return FrameSpec({1, 2, 4, 3}, {5}); }

void FrameSpec::check_scene(int k, int m) const {
  if (dimension() != m) {
    throw Error(ErrorKind::InvalidFrame, "frame has " + std::to_string(frame_.size()) +
                                             " labels but landmarks live in dimension " +
                                             std::to_string(m));
  }
  auto in_range = [k](int label) { return label >= 1 && label <= k; };
  if (!std::all_of(frame_.begin(), frame_.end(), in_range) ||
      !std::all_of(remaining_.begin(), remaining_.end(), in_range)) {
    throw Error(ErrorKind::InvalidFrame,
                "frame or remaining label outside 1.." + std::to_string(k));
  }
}

HomogeneousPoint::HomogeneousPoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "homogeneous point needs at least 2 entries");
  }
  if (!coords_.allFinite()) {
    throw Error(ErrorKind::InvalidLandmark, "homogeneous point is not finite");
  }
  if (coords_.isZero(0.0)) {
    throw Error(ErrorKind::DegeneratePoint, "homogeneous point is the zero vector");
  }
}

HomogeneousPoint lift(const Vector& point) {
  if (!point.allFinite()) throw Error(ErrorKind::InvalidLandmark, "landmark is not finite");
  Vector x(point.size() + 1);
  x.head(point.size()) = point;
  x(point.size()) = 1.0;
  return HomogeneousPoint(std::move(x));
}

FrameScalars frame_scalars(std::span<const HomogeneousPoint> frame_points) {
  if (frame_points.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "a frame needs m + 2 >= 3 points");
  }
  const auto dim = static_cast<Eigen::Index>(frame_points.size()) - 1;
  check_homogeneous_size(frame_points, dim);

  Matrix frame(dim, dim);
  double column_norms = 1.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    frame.col(j) = frame_points[static_cast<std::size_t>(j)].coords();
    column_norms *= frame.col(j).norm();
  }
  const Eigen::PartialPivLU<Matrix> lu(frame);
  if (std::abs(lu.determinant()) < kSingularTolerance * column_norms) {
    throw Error(ErrorKind::DegenerateFrame, "first m + 1 frame points are linearly dependent");
  }
  Vector lambda = lu.solve(frame_points.back().coords());
  const double largest = lambda.cwiseAbs().maxCoeff();
  FrameScalars result;
  result.column_flipped.assign(static_cast<std::size_t>(dim), false);
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (std::abs(lambda(j)) < kLambdaTolerance * largest) {
      throw Error(ErrorKind::DegenerateFrame,
                  "unit point lies on a frame hyperplane (lambda_" + std::to_string(j + 1) +
                      " = 0)");
    }
    if (lambda(j) < 0.0) {
      lambda(j) = -lambda(j);
      frame.col(j) = -frame.col(j);
      result.column_flipped[static_cast<std::size_t>(j)] = true;
    }
  }
  result.lambda = std::move(lambda);
  result.adjusted_frame = std::move(frame);
  return result;
}

OrientedFrameChart oriented_frame_homography(std::span<const HomogeneousPoint> frame_points) {
  const FrameScalars scalars = frame_scalars(frame_points);
  OrientedFrameChart chart;
  chart.homography = scalars.lambda.cwiseInverse().asDiagonal() *
                     scalars.adjusted_frame.partialPivLu().inverse();
  chart.frame_scalars = scalars.lambda;
  if (chart.homography.determinant() <= 0.0) {
    if (chart.homography.rows() % 2 == 1) {
      chart.homography = -chart.homography;
      chart.det_sign_flipped = true;
    } else {
      chart.orientation_reversing = true;
    }
  }
  return chart;
}

Vector oriented_coordinate(const OrientedFrameChart& chart, const HomogeneousPoint& point) {
  if (point.size() != chart.homography.cols()) {
    throw Error(ErrorKind::InvalidArgument, "point and chart dimensions differ");
  }
  Vector y = chart.homography * point.coords();
  const double norm = y.norm();
  if (!(norm > kPointTolerance * chart.homography.norm() * point.coords().norm())) {
    throw Error(ErrorKind::DegeneratePoint, "point maps to the zero vector in the frame chart");
  }
  return y / norm;
}

Vector canonical_axis(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

Vector axial_coordinate(const OrientedFrameChart& chart, const HomogeneousPoint& point) {
  return canonical_axis(oriented_coordinate(chart, point));
}

SceneDirections directions_from_homogeneous(std::span<const HomogeneousPoint> points,
                                            const FrameSpec& spec) {
  if (points.empty()) throw Error(ErrorKind::InvalidLandmark, "no landmarks");
  const auto dim = points.front().size();
  check_homogeneous_size(points, dim);
  spec.check_scene(static_cast<int>(points.size()), static_cast<int>(dim) - 1);

  std::vector<HomogeneousPoint> frame;
  frame.reserve(spec.frame_labels().size());
  for (int label : spec.frame_labels()) frame.push_back(points[static_cast<std::size_t>(label - 1)]);
  const OrientedFrameChart chart = oriented_frame_homography(frame);

  SceneDirections out;
  out.det_sign_flipped = chart.det_sign_flipped;
  out.orientation_reversing = chart.orientation_reversing;
  out.units.reserve(spec.remaining_labels().size());
  for (int label : spec.remaining_labels()) {
    out.units.push_back(oriented_coordinate(chart, points[static_cast<std::size_t>(label - 1)]));
  }
  return out;
}

SceneDirections scene_to_directions(const LandmarkScene& scene, const FrameSpec& spec) {
  try {
    validate(scene);
    std::vector<HomogeneousPoint> lifted;
    lifted.reserve(scene.points.size());
    for (const auto& p : scene.points) lifted.push_back(lift(p));
    return directions_from_homogeneous(lifted, spec);
  } catch (const Error& e) {
    throw Error(e.kind(), "scene " + scene.scene_id + ": " + e.detail());
  }
}

}  // namespace opshape
