#pragma once

#include <vector>

#include "affnet/fisher_inverse.hpp"
#include "affnet/graph.hpp"

namespace affnet {

double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0, 1); accurate to about 1e-15
/// after one Halley correction of a rational starting value.
double normal_quantile(double p);

/// z_{(1+level)/2}. Exact constants for 0.90, 0.95 and 0.99; throws BadLevel
/// outside (0, 1).
double z_for_level(double level);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval confidence_interval(double estimate, double se, double level);

enum class Side { Event, Actor };

/// S evaluated at theta_hat; its diagonal holds the asymptotic variances.
ApproxInverse<double> plugin_covariance(const Parameters& theta_hat);

/// (1/v_ii + 1/v_jj)^{1/2} for two same-side indices (0-based; actors must be
/// < n-1). The shared 1/v_{m+n,m+n} terms of S cancel in a contrast.
double contrast_se(const FisherInfo<double>& v_hat, Side side, Index i, Index j);

struct InferenceResult {
  Parameters theta_hat;
  FisherInfo<double> v_hat;
  double level = 0.95;

  // sqrt(s_kk): full plug-in variance including the pinned-actor term.
  Eigen::VectorXd se_alpha;
  Eigen::VectorXd se_beta;
  std::vector<Interval> ci_alpha;
  std::vector<Interval> ci_beta;

  // v_kk^{-1/2}: the per-node rate, which is what same-side comparisons see.
  Eigen::VectorXd rate_se_alpha;
  Eigen::VectorXd rate_se_beta;
  std::vector<Interval> rate_ci_alpha;
  std::vector<Interval> rate_ci_beta;

  double contrast_se(Side side, Index i, Index j) const;
  Interval contrast_ci(Side side, Index i, Index j) const;
  double contrast_estimate(Side side, Index i, Index j) const;
};

InferenceResult infer(const Parameters& theta_hat, double level = 0.95);

}  // namespace affnet
