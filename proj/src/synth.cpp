#include "opshape/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opshape/error.hpp"
#include "opshape/rng.hpp"

// Scene and camera generation uses only + - * / and sqrt so that a seed names
// the same fixture on every IEEE-754 platform.

namespace opshape {
namespace {

constexpr int kMaxTries = 1000;
constexpr double kGeneralPositionMargin = 0.05;

Eigen::Vector3d random_unit3(SplitMix64& rng) {
  for (;;) {
    const Eigen::Vector3d v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0));
    const double r2 = v.squaredNorm();
    if (r2 > 1e-4 && r2 <= 1.0) return v / std::sqrt(r2);
  }
}

// b1, b2 with (b1, b2, normal) a right-handed orthonormal basis.
std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& normal) {
  Eigen::Index axis = 0;
  normal.cwiseAbs().minCoeff(&axis);
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  const Eigen::Vector3d b1 = (e - e.dot(normal) * normal).normalized();
  return {b1, normal.cross(b1)};
}

void check_frame_labels(int k, const std::vector<int>& frame_labels) {
  if (frame_labels.size() != 4) {
    throw Error(ErrorKind::InvalidFrame, "planar scenes need a 4-landmark frame");
  }
  for (int label : frame_labels) {
    if (label < 1 || label > k) throw Error(ErrorKind::InvalidFrame, "frame label outside 1..k");
  }
}

// The frame must be far from degenerate in the plane's own coordinates, so
// that no image of it is numerically close to a degenerate frame either.
bool well_posed_frame(const std::vector<Eigen::Vector2d>& plane_points,
                      const std::vector<int>& frame_labels) {
  Eigen::Matrix3d u;
  double norms = 1.0;
  for (int j = 0; j < 3; ++j) {
    const auto& p = plane_points[static_cast<std::size_t>(frame_labels[j] - 1)];
    u.col(j) << p, 1.0;
    norms *= u.col(j).norm();
  }
  if (std::abs(u.determinant()) < kGeneralPositionMargin * norms) return false;
  const auto& p4 = plane_points[static_cast<std::size_t>(frame_labels[3] - 1)];
  const Eigen::Vector3d lambda = u.partialPivLu().solve(Eigen::Vector3d(p4.x(), p4.y(), 1.0));
  return lambda.cwiseAbs().minCoeff() >= kGeneralPositionMargin * lambda.cwiseAbs().maxCoeff();
}

Eigen::Vector3d centroid(const Scene3D& scene) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& p : scene.points) c += p;
  return c / static_cast<double>(scene.points.size());
}

}  // namespace

LandmarkScene project(const PinholeCamera& camera, const Scene3D& scene, std::string scene_id,
                      double noise_sigma, std::uint64_t noise_seed) {
  if (!(camera.focal > 0.0)) throw Error(ErrorKind::InvalidArgument, "focal must be positive");
  LandmarkScene out;
  out.scene_id = std::move(scene_id);
  out.points.reserve(scene.points.size());
  SplitMix64 rng(noise_seed);
  for (std::size_t j = 0; j < scene.points.size(); ++j) {
    const Eigen::Vector3d pc = camera.rotation * (scene.points[j] - camera.center);
    if (!(pc.z() >= kMinDepth)) {
      throw Error(ErrorKind::BehindCamera,
                  "landmark " + std::to_string(j + 1) + " has depth " + std::to_string(pc.z()));
    }
    Eigen::Vector2d img(camera.focal * pc.x() / pc.z(), camera.focal * pc.y() / pc.z());
    if (noise_sigma > 0.0) {
      img.x() += noise_sigma * rng.normal();
      img.y() += noise_sigma * rng.normal();
    }
    out.points.emplace_back(img);
  }
  return out;
}

Scene3D random_coplanar_scene(int k, std::uint64_t seed, const std::vector<int>& frame_labels) {
  if (k < 5) throw Error(ErrorKind::InvalidArgument, "synthetic scenes need k >= 5");
  check_frame_labels(k, frame_labels);
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    const Eigen::Vector3d normal = random_unit3(rng);
    const Eigen::Vector3d center(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                 rng.uniform(-0.5, 0.5));
    std::vector<Eigen::Vector2d> plane(static_cast<std::size_t>(k));
    for (auto& p : plane) p = Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (!well_posed_frame(plane, frame_labels)) continue;

    const auto [b1, b2] = plane_basis(normal);
    Scene3D scene;
    scene.coplanar = true;
    scene.normal = normal;
    scene.offset = normal.dot(center);
    scene.out_of_plane_offsets.assign(static_cast<std::size_t>(k), 0.0);
    for (const auto& p : plane) scene.points.push_back(center + p.x() * b1 + p.y() * b2);
    return scene;
  }
  throw Error(ErrorKind::GenerationFailed, "no well-posed coplanar scene in 1000 tries");
}

std::vector<PinholeCamera> random_cameras(const Scene3D& scene, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one camera");
  if (scene.points.empty()) throw Error(ErrorKind::InvalidArgument, "scene has no points");
  SplitMix64 rng(seed);
  const Eigen::Vector3d target = centroid(scene);
  double extent = 1.0;
  for (const auto& p : scene.points) extent = std::max(extent, (p - target).norm());

  std::vector<PinholeCamera> cameras;
  cameras.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxTries && !placed; ++attempt) {
      // Viewing directions within 60 degrees of the plane normal.
      const Eigen::Vector3d dir = random_unit3(rng);
      if (dir.dot(scene.normal) < 0.5) continue;
      PinholeCamera cam;
      cam.center = target + rng.uniform(4.0, 8.0) * extent * dir;
      const Eigen::Vector3d forward = (target - cam.center).normalized();
      const Eigen::Vector3d up = random_unit3(rng);
      const Eigen::Vector3d side = up.cross(forward);
      if (side.norm() < 0.1) continue;
      const Eigen::Vector3d x_axis = side.normalized();
      const Eigen::Vector3d y_axis = forward.cross(x_axis);
      cam.rotation.row(0) = x_axis.transpose();
      cam.rotation.row(1) = y_axis.transpose();
      cam.rotation.row(2) = forward.transpose();
      cam.focal = rng.uniform(0.5, 2.0);
      placed = std::all_of(scene.points.begin(), scene.points.end(), [&](const auto& p) {
        return (cam.rotation * (p - cam.center)).z() >= kMinDepth;
      });
      if (placed) cameras.push_back(cam);
    }
    if (!placed) throw Error(ErrorKind::GenerationFailed, "no valid camera in 1000 tries");
  }
  return cameras;
}

Scene3D perturb_out_of_plane(const Scene3D& scene, double delta, std::uint64_t seed,
                             const std::vector<int>& frame_labels) {
  if (!(delta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be >= 0");
  if (delta == 0.0) return scene;
  check_frame_labels(static_cast<int>(scene.points.size()), frame_labels);
  SplitMix64 rng(seed);
  Scene3D out = scene;
  out.coplanar = false;
  out.out_of_plane_offsets.assign(scene.points.size(), 0.0);
  for (std::size_t j = 0; j < scene.points.size(); ++j) {
    const int label = static_cast<int>(j) + 1;
    if (std::find(frame_labels.begin(), frame_labels.end(), label) != frame_labels.end()) continue;
    const double signed_delta = (rng.next_u64() & 1U) ? delta : -delta;
    out.points[j] += signed_delta * scene.normal;
    out.out_of_plane_offsets[j] = signed_delta;
  }
  return out;
}

DirectionSample tangent_gaussian_sample(const Eigen::VectorXd& direction, double sigma,
                                        Eigen::Index n, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
  if (n < 1) throw Error(ErrorKind::EmptySample, "n must be >= 1");
  const double norm = direction.norm();
  if (!(norm > 0.0) || direction.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "direction must be a nonzero vector");
  }
  const Eigen::VectorXd d = direction / norm;
  const auto dim = d.size();

  // Orthonormal tangent basis by Gram-Schmidt on the coordinate axes, skipping
  // the axis most aligned with d.
  Eigen::Index skip = 0;
  d.cwiseAbs().maxCoeff(&skip);
  Eigen::MatrixXd basis(dim, dim - 1);
  Eigen::Index filled = 0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (a == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, a);
    v -= v.dot(d) * d;
    for (Eigen::Index b = 0; b < filled; ++b) v -= v.dot(basis.col(b)) * basis.col(b);
    basis.col(filled++) = v.normalized();
  }

  SplitMix64 rng(seed);
  Eigen::MatrixXd stacked(n, dim);
  Eigen::VectorXd coeffs(dim - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma == 0.0) {
      stacked.row(i) = d.transpose();
      continue;
    }
    for (Eigen::Index b = 0; b < dim - 1; ++b) coeffs(b) = sigma * rng.normal();
    const Eigen::VectorXd v = d + basis * coeffs;
    stacked.row(i) = (v / v.norm()).transpose();
  }
  return DirectionSample(std::move(stacked), static_cast<int>(dim), {});
}

SynthStudy synth_study(int k, int n, double delta, std::uint64_t seed, double noise_sigma,
                       const std::vector<int>& frame_labels) {
  SynthStudy study;
  const Scene3D base = random_coplanar_scene(k, derive_seed(seed, 0), frame_labels);
  study.scene = perturb_out_of_plane(base, delta, derive_seed(seed, 1), frame_labels);
  study.cameras = random_cameras(study.scene, n, derive_seed(seed, 2));
  study.images.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    study.images.push_back(project(study.cameras[static_cast<std::size_t>(i)], study.scene,
                                   std::to_string(i + 1), noise_sigma,
                                   derive_seed(seed, 3 + static_cast<std::uint64_t>(i))));
  }
  return study;
}

}  // namespace opshape
