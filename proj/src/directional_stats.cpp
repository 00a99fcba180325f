#include "opshape/directional_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "opshape/error.hpp"
#include "opshape/special.hpp"

namespace opshape {
namespace {

// Stacked delta-method gradient: -2 mean_f / ||mean_f|| in every block.
Eigen::VectorXd gradient(const Eigen::VectorXd& mean, int dimension) {
  return -2.0 * extrinsic_mean(mean, dimension);
}

// 1 - R_n for one block. Values within a few ulps of zero are rounding noise
// of the norm (a perfectly concentrated block can give R_n = 1 - 1ulp) and are
// reported as exactly zero, like the projections in se_from_mean.
double block_dispersion(double resultant) {
  const double d = 1.0 - resultant;
  return d > kDispersionFloor ? d : 0.0;
}

double se_from_mean(const DirectionSample& sample, const Eigen::VectorXd& mean) {
  const Eigen::VectorXd g = gradient(mean, sample.dimension());
  const auto n = static_cast<double>(sample.size());
  // Projections below the rounding floor of g . (u_i - mean) are zeroed, so
  // provably-zero forms (e.g. any two-point sample) come out exactly zero.
  const double floor = 16.0 * static_cast<double>(sample.width()) *
                       std::numeric_limits<double>::epsilon() * g.norm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double d = g.dot(sample.stacked().row(i).transpose() - mean);
    if (std::abs(d) > floor) sum += d * d;
  }
  return std::sqrt(sum / n / n);
}

}  // namespace

Eigen::VectorXd mean_vector(const DirectionSample& sample) {
  return sample.stacked().colwise().mean().transpose();
}

Eigen::VectorXd resultant_length(const Eigen::VectorXd& mean, int dimension) {
  const auto q = mean.size() / dimension;
  Eigen::VectorXd r(q);
  for (Eigen::Index f = 0; f < q; ++f) r(f) = mean.segment(f * dimension, dimension).norm();
  return r;
}

Eigen::VectorXd extrinsic_mean(const Eigen::VectorXd& mean, int dimension) {
  Eigen::VectorXd out(mean.size());
  const auto q = mean.size() / dimension;
  for (Eigen::Index f = 0; f < q; ++f) {
    const auto block = mean.segment(f * dimension, dimension);
    const double norm = block.norm();
    if (norm < kFocalTolerance) {
      throw Error(ErrorKind::FocalMean,
                  "mean vector of block " + std::to_string(f + 1) + " vanishes");
    }
    out.segment(f * dimension, dimension) = block / norm;
  }
  return out;
}

double total_variance(const DirectionSample& sample) {
  const Eigen::VectorXd r = resultant_length(mean_vector(sample), sample.dimension());
  double ts = 0.0;
  for (Eigen::Index f = 0; f < r.size(); ++f) ts += 2.0 * block_dispersion(r(f));
  return ts;
}

Eigen::MatrixXd sample_covariance(const DirectionSample& sample) {
  const Eigen::RowVectorXd mean = sample.stacked().colwise().mean();
  const Eigen::MatrixXd centered = sample.stacked().rowwise() - mean;
  Eigen::MatrixXd s = centered.transpose() * centered / static_cast<double>(sample.size());
  return 0.5 * (s + s.transpose());
}

double delta_se(const DirectionSample& sample) { return se_from_mean(sample, mean_vector(sample)); }

Interval confidence_interval(double ts, double se, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  }
  if (!(se >= 0.0) || !std::isfinite(se)) {
    throw Error(ErrorKind::InvalidArgument, "standard error must be finite and nonnegative");
  }
  const double half = normal_quantile(1.0 - 0.5 * alpha) * se;
  return {ts - half, ts + half};
}

ZTest z_statistic(double ts, double se) {
  ZTest out;
  if (se > 0.0) {
    out.z = ts / se;
    out.p_value = normal_sf(*out.z);
  } else {
    out.degenerate = true;
    out.p_value = ts > 0.0 ? 0.0 : 1.0;
  }
  return out;
}

ChiSquareTest chisq_statistic(double ts, Eigen::Index n, int df) {
  if (n < 1) throw Error(ErrorKind::EmptySample, "chi-square statistic needs n >= 1");
  if (df < 1) throw Error(ErrorKind::InvalidArgument, "chi-square df must be >= 1");
  ChiSquareTest out;
  out.statistic = static_cast<double>(n) * ts;
  out.df = df;
  out.p_value = chisq_sf(out.statistic, df);
  return out;
}

OpsSummary summarize(const DirectionSample& sample, double alpha, std::optional<int> df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  }
  OpsSummary s;
  s.n = sample.size();
  s.q = sample.blocks();
  s.dimension = sample.dimension();
  s.mean = mean_vector(sample);
  s.resultant = resultant_length(s.mean, s.dimension);
  s.extrinsic_mean = extrinsic_mean(s.mean, s.dimension);
  for (Eigen::Index f = 0; f < s.resultant.size(); ++f)
    s.ts += 2.0 * block_dispersion(s.resultant(f));
  s.covariance = sample_covariance(sample);
  s.se = se_from_mean(sample, s.mean);

  s.alpha = alpha;
  s.z_critical = normal_quantile(1.0 - 0.5 * alpha);
  s.ci = {s.ts - s.z_critical * s.se, s.ts + s.z_critical * s.se};

  const ZTest z = z_statistic(s.ts, s.se);
  s.z = z.z;
  s.p_normal = z.p_value;
  s.degenerate_test = z.degenerate;

  const ChiSquareTest chi = chisq_statistic(s.ts, s.n, df.value_or((s.dimension - 1) * s.q));
  s.chisq = chi.statistic;
  s.df = chi.df;
  s.p_chisq = chi.p_value;

  s.reject_ci = s.ci.lower > 0.0;
  s.reject_chisq = s.p_chisq < alpha;
  return s;
}

OpsSummary coplanarity_test(const DirectionSample& sample, double alpha, std::optional<int> df) {
  if (sample.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "the coplanarity test needs n >= 2");
  }
  return summarize(sample, alpha, df);
}

Eigen::MatrixXd angular_distances(const DirectionSample& sample) {
  return angular_distances(sample, extrinsic_mean(mean_vector(sample), sample.dimension()));
}

Eigen::MatrixXd angular_distances(const DirectionSample& sample,
                                  const Eigen::VectorXd& extrinsic_mean) {
  if (extrinsic_mean.size() != sample.width()) {
    throw Error(ErrorKind::InvalidArgument, "mean direction width differs from the sample");
  }
  const int dim = sample.dimension();
  Eigen::MatrixXd theta(sample.size(), sample.blocks());
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (int f = 0; f < sample.blocks(); ++f) {
      const double c = sample.stacked().row(i).segment(f * dim, dim).dot(
          extrinsic_mean.segment(f * dim, dim).transpose());
      theta(i, f) = std::acos(std::clamp(c, -1.0, 1.0));
    }
  }
  return theta;
}

}  // namespace opshape
