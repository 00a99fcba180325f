#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opshape/direction_sample.hpp"
#include "opshape/geometry.hpp"

namespace opshape {

/// Labeled 3D landmarks; points[label - 1].
struct Scene3D {
  std::vector<Eigen::Vector3d> points;
  bool coplanar = true;
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // unit
  double offset = 0.0;                                // plane: normal . x = offset
  std::vector<double> out_of_plane_offsets;           // signed distance per point
};

/// Camera coordinates are rotation * (X - center); the camera looks along +z.
struct PinholeCamera {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double focal = 1.0;
};

inline constexpr double kMinDepth = 1e-6;

/// Central projection focal * (X/Z, Y/Z). Throws BehindCamera for depth below
/// kMinDepth. noise_sigma > 0 adds isotropic image-plane Gaussian noise.
LandmarkScene project(const PinholeCamera& camera, const Scene3D& scene, std::string scene_id,
                      double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

/// k >= 5 points on a random plane through the origin region, resampled until
/// the frame given by frame_labels is in comfortable general position.
Scene3D random_coplanar_scene(int k, std::uint64_t seed,
                              const std::vector<int>& frame_labels = {1, 2, 4, 3});

/// n cameras on a shell in front of the scene plane (the side the normal points
/// to), each aimed at the scene centroid with a random roll and focal length.
std::vector<PinholeCamera> random_cameras(const Scene3D& scene, int n, std::uint64_t seed);

/// Moves every non-frame landmark along the plane normal by +/- delta (random
/// sign). delta == 0 returns the scene unchanged.
Scene3D perturb_out_of_plane(const Scene3D& scene, double delta, std::uint64_t seed,
                             const std::vector<int>& frame_labels = {1, 2, 4, 3});

/// n unit vectors (direction + t) / ||direction + t|| with t isotropic Gaussian
/// of scale sigma in the tangent space at `direction`.
DirectionSample tangent_gaussian_sample(const Eigen::VectorXd& direction, double sigma,
                                        Eigen::Index n, std::uint64_t seed);

struct SynthStudy {
  Scene3D scene;
  std::vector<PinholeCamera> cameras;
  std::vector<LandmarkScene> images;  // scene ids "1".."n"
};

/// One scene (perturbed by delta) photographed by n random cameras. All
/// randomness derives from `seed`.
SynthStudy synth_study(int k, int n, double delta, std::uint64_t seed, double noise_sigma = 0.0,
                       const std::vector<int>& frame_labels = {1, 2, 4, 3});

}  // namespace opshape
