#pragma once

// Data-parallel inner loops of the analysis. Each kernel exists twice with the
// same signature: `omp` is what the library uses, `serial` is the reference
// the tests compare it against. Both write results by index and reduce in
// index order, so their outputs are bitwise identical for any thread count.

#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "opshape/diagnostics.hpp"
#include "opshape/direction_sample.hpp"
#include "opshape/geometry.hpp"
#include "opshape/monte_carlo.hpp"

namespace opshape::kernels {

struct SceneResult {
  SceneDirections directions;
  std::exception_ptr error;  // set instead of directions on failure
};

namespace serial {
std::vector<SceneResult> scene_directions(std::span<const LandmarkScene> scenes,
                                          const FrameSpec& spec);
std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df);
std::vector<Replicate> coverage_replicates(const CoverageConfig& config);
std::vector<double> bootstrap_ts(const DirectionSample& sample, int resamples,
                                 std::uint64_t seed);
}  // namespace serial

namespace omp {
std::vector<SceneResult> scene_directions(std::span<const LandmarkScene> scenes,
                                          const FrameSpec& spec);
std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df);
std::vector<Replicate> coverage_replicates(const CoverageConfig& config);
std::vector<double> bootstrap_ts(const DirectionSample& sample, int resamples,
                                 std::uint64_t seed);
}  // namespace omp

// Single-item bodies shared by both variants.
LooRow loo_row(const DirectionSample& sample, Eigen::Index row, double alpha,
               std::optional<int> df);
Replicate coverage_replicate(const CoverageConfig& config, int replication);
double bootstrap_replicate(const DirectionSample& sample, std::uint64_t seed, int resample);

}  // namespace opshape::kernels
