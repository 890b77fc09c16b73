#include "affnet/inference.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace affnet {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "normal_quantile needs p in (0, 1)");
  }
  // Acklam's rational approximation (relative error ~1e-9).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // Halley step against the erfc-based CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1 + 0.5 * x * u);
}

double z_for_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::BadLevel, "confidence level must lie in (0, 1)");
  }
  if (level == 0.95) return 1.959963984540054;
  if (level == 0.90) return 1.6448536269514722;
  if (level == 0.99) return 2.5758293035489004;
  return normal_quantile(0.5 + 0.5 * level);
}

Interval confidence_interval(double estimate, double se, double level) {
  if (!(se > 0.0)) throw Error(ErrorKind::InvalidArgument, "standard error must be positive");
  const double half = z_for_level(level) * se;
  return {estimate - half, estimate + half};
}

ApproxInverse<double> plugin_covariance(const Parameters& theta_hat) {
  return build_S(fisher_info(theta_hat));
}

double contrast_se(const FisherInfo<double>& v_hat, Side side, Index i, Index j) {
  if (i == j) throw Error(ErrorKind::SameIndex, "contrast of an index with itself");
  const Eigen::VectorXd& diag = side == Side::Event ? v_hat.event_diag : v_hat.actor_diag;
  if (i < 0 || j < 0 || i >= diag.size() || j >= diag.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "contrast index out of range (" + std::to_string(i + 1) + ", " +
                    std::to_string(j + 1) + ")");
  }
  return std::sqrt(1.0 / diag(i) + 1.0 / diag(j));
}

double InferenceResult::contrast_se(Side side, Index i, Index j) const {
  return affnet::contrast_se(v_hat, side, i, j);
}

double InferenceResult::contrast_estimate(Side side, Index i, Index j) const {
  const Eigen::VectorXd& t = side == Side::Event ? theta_hat.alpha : theta_hat.beta;
  return t(i) - t(j);
}

Interval InferenceResult::contrast_ci(Side side, Index i, Index j) const {
  return confidence_interval(contrast_estimate(side, i, j), contrast_se(side, i, j), level);
}

InferenceResult infer(const Parameters& theta_hat, double level) {
  z_for_level(level);
  InferenceResult r;
  r.theta_hat = theta_hat;
  r.v_hat = fisher_info(theta_hat);
  r.level = level;
  const ApproxInverse<double> s = build_S(r.v_hat);
  const Index m = theta_hat.m(), k = theta_hat.n() - 1;

  r.se_alpha = (s.inv_event_diag.array() + s.inv_aug_total).sqrt();
  r.se_beta = (s.inv_actor_diag.array() + s.inv_aug_total).sqrt();
  r.rate_se_alpha = s.inv_event_diag.cwiseSqrt();
  r.rate_se_beta = s.inv_actor_diag.cwiseSqrt();
  for (Index i = 0; i < m; ++i) {
    r.ci_alpha.push_back(confidence_interval(theta_hat.alpha(i), r.se_alpha(i), level));
    r.rate_ci_alpha.push_back(
        confidence_interval(theta_hat.alpha(i), r.rate_se_alpha(i), level));
  }
  for (Index j = 0; j < k; ++j) {
    r.ci_beta.push_back(confidence_interval(theta_hat.beta(j), r.se_beta(j), level));
    r.rate_ci_beta.push_back(
        confidence_interval(theta_hat.beta(j), r.rate_se_beta(j), level));
  }
  return r;
}

}  // namespace affnet
