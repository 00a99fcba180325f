#include <exception>

#include <omp.h>

#include "opshape/kernels.hpp"

namespace opshape::kernels::omp {
namespace {

// Exceptions may not cross an OpenMP region; each iteration parks its own and
// the first one (by index) is rethrown afterwards.
template <typename Body>
void parallel_for(std::ptrdiff_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<SceneResult> scene_directions(std::span<const LandmarkScene> scenes,
                                          const FrameSpec& spec) {
  std::vector<SceneResult> out(scenes.size());
  const auto count = static_cast<std::ptrdiff_t>(scenes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k].directions = scene_to_directions(scenes[k], spec);
    } catch (...) {
      out[k].error = std::current_exception();
    }
  }
  return out;
}

std::vector<LooRow> leave_one_out(const DirectionSample& sample, double alpha,
                                  std::optional<int> df) {
  std::vector<LooRow> rows(static_cast<std::size_t>(sample.size()));
  parallel_for(sample.size(), [&](std::ptrdiff_t i) {
    rows[static_cast<std::size_t>(i)] = loo_row(sample, i, alpha, df);
  });
  return rows;
}

std::vector<Replicate> coverage_replicates(const CoverageConfig& config) {
  std::vector<Replicate> out(static_cast<std::size_t>(config.replications));
  parallel_for(config.replications, [&](std::ptrdiff_t r) {
    out[static_cast<std::size_t>(r)] = coverage_replicate(config, static_cast<int>(r));
  });
  return out;
}

std::vector<double> bootstrap_ts(const DirectionSample& sample, int resamples,
                                 std::uint64_t seed) {
  std::vector<double> out(static_cast<std::size_t>(resamples));
  parallel_for(resamples, [&](std::ptrdiff_t b) {
    out[static_cast<std::size_t>(b)] = bootstrap_replicate(sample, seed, static_cast<int>(b));
  });
  return out;
}

}  // namespace opshape::kernels::omp
