#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opshape {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One image's labeled landmarks. points[label - 1] holds landmark `label`.
struct LandmarkScene {
  std::string scene_id;
  std::vector<Vector> points;

  int size() const { return static_cast<int>(points.size()); }
  int dimension() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  const Vector& point(int label) const;
};

/// Throws InvalidLandmark when a coordinate is non-finite or dimensions disagree.
void validate(const LandmarkScene& scene);

/// Ordered frame labels (m + 2 of them) and the ordered remaining labels whose
/// coordinates are read off in that frame.
class FrameSpec {
 public:
  FrameSpec(std::vector<int> frame_labels, std::vector<int> remaining_labels);

  /// Frame {1,2,4,3} with remaining landmark 5.
  static FrameSpec sope_creek();

  const std::vector<int>& frame_labels() const noexcept { return frame_; }
  const std::vector<int>& remaining_labels() const noexcept { return remaining_; }
  int dimension() const noexcept { return static_cast<int>(frame_.size()) - 2; }
  int blocks() const noexcept { return static_cast<int>(remaining_.size()); }

  /// Checks every label lies in 1..k and that the frame size is m + 2.
  void check_scene(int k, int m) const;

  bool operator==(const FrameSpec&) const = default;

 private:
  std::vector<int> frame_;
  std::vector<int> remaining_;
};

/// A nonzero vector of R^{m+1}; any positive multiple names the same
/// oriented projective point.
class HomogeneousPoint {
 public:
  explicit HomogeneousPoint(Vector coords);

  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index size() const noexcept { return coords_.size(); }

 private:
  Vector coords_;
};

/// (x, 1).
HomogeneousPoint lift(const Vector& point);

struct FrameScalars {
  Vector lambda;           // strictly positive
  Matrix adjusted_frame;   // columns: sign-adjusted first m + 1 frame points
  std::vector<bool> column_flipped;
};

/// Solves U * lambda = u_{m+2} for the first m + 1 frame representatives U and
/// flips column signs so every lambda_j > 0.
FrameScalars frame_scalars(std::span<const HomogeneousPoint> frame_points);

struct OrientedFrameChart {
  Matrix homography;
  Vector frame_scalars;
  bool det_sign_flipped = false;
  // Only possible when m + 1 is even: negation cannot change the sign of the
  // determinant, so the chart is kept with det < 0 and flagged.
  bool orientation_reversing = false;

  int dimension() const { return static_cast<int>(homography.rows()) - 1; }
};

/// H = diag(lambda)^{-1} * U'^{-1}, negated if needed so det(H) > 0.
OrientedFrameChart oriented_frame_homography(std::span<const HomogeneousPoint> frame_points);

/// H x / ||H x||.
Vector oriented_coordinate(const OrientedFrameChart& chart, const HomogeneousPoint& point);

/// Flips v so its first nonzero component is positive.
Vector canonical_axis(Vector v);

/// Oriented coordinate with the sign canonicalized; the axis [y] for
/// projective (sign-blind) analysis.
Vector axial_coordinate(const OrientedFrameChart& chart, const HomogeneousPoint& point);

struct SceneDirections {
  std::vector<Vector> units;  // one per remaining label, in FrameSpec order
  bool det_sign_flipped = false;
  bool orientation_reversing = false;
};

/// Oriented projective coordinates of the remaining landmarks. `points` is
/// label-indexed (points[label - 1]).
SceneDirections directions_from_homogeneous(std::span<const HomogeneousPoint> points,
                                            const FrameSpec& spec);

/// Lifts the scene and calls directions_from_homogeneous; failures are
/// rethrown with the scene id prefixed.
SceneDirections scene_to_directions(const LandmarkScene& scene, const FrameSpec& spec);

}  // namespace opshape
