#include <cmath>
#include <random>

#include "doctest.h"
#include "affnet/inference.hpp"
#include "oracles.hpp"

using namespace affnet;
using doctest::Approx;
using Eigen::MatrixXd;

TEST_CASE("normal quantiles") {
  CHECK(z_for_level(0.95) == Approx(1.959963984540054).epsilon(1e-15));
  CHECK(z_for_level(0.90) == Approx(1.6448536269514722).epsilon(1e-15));
  CHECK(z_for_level(0.99) == Approx(2.5758293035489004).epsilon(1e-15));
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) <= 1e-8);
  for (double p : {1e-10, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.77, 0.97575, 0.999, 1 - 1e-9})
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-8 * std::max(p, 1e-2));
  CHECK(normal_quantile(0.5) == Approx(0.0).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == Approx(0.975).epsilon(1e-14));
  for (double bad : {0.0, 1.0, -0.1, 1.5, double(NAN)}) CHECK_THROWS_AS(z_for_level(bad), Error);
}

TEST_CASE("confidence intervals") {
  const Interval unit = confidence_interval(0.0, 1.0, 0.95);
  CHECK(unit.lo == Approx(-1.960).epsilon(1e-3));
  CHECK(unit.hi == Approx(1.960).epsilon(1e-3));
  CHECK(unit.half_width() == Approx(z_for_level(0.95)).epsilon(1e-15));

  // Published rows are rounded, hence the loose tolerances.
  const Interval club = confidence_interval(-0.32, 0.08, 0.95);
  CHECK(std::abs(club.lo - -0.49) <= 0.015);
  CHECK(std::abs(club.hi - -0.16) <= 0.006);
  const Interval student = confidence_interval(0.996, 0.311, 0.95);
  CHECK(std::abs(student.lo - 0.387) <= 0.0015);
  CHECK(std::abs(student.hi - 1.606) <= 0.0015);

  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(confidence_interval(0.0, -1.0, 0.95), Error);
}

TEST_CASE("plug-in covariance at zero") {
  const auto s = plugin_covariance(Parameters::Zero(2, 2));
  for (Index k = 0; k < 3; ++k) CHECK(s(k, k) == 4.0);
  for (Index n : {10, 50}) {
    const auto sn = plugin_covariance(Parameters::Zero(n, n));
    CHECK(sn(0, 0) == Approx(8.0 / n).epsilon(1e-14));
  }
}

TEST_CASE("contrast standard errors") {
  const auto v = fisher_info(Parameters::Zero(100, 200));
  CHECK(contrast_se(v, Side::Event, 0, 1) == Approx(0.2).epsilon(1e-14));
  CHECK(contrast_se(v, Side::Actor, 3, 7) == Approx(std::sqrt(8.0 / 100)).epsilon(1e-14));
  CHECK_THROWS_AS(contrast_se(v, Side::Event, 4, 4), Error);
  CHECK_THROWS_AS(contrast_se(v, Side::Event, 0, 100), Error);
  CHECK_THROWS_AS(contrast_se(v, Side::Actor, 0, 199), Error);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 3 + trial % 4, n = 4 + trial % 5;
    const Parameters t = Parameters::FromStacked(oracle::random_vector(m + n - 1, rng, 1.5), m);
    const auto vt = fisher_info(t);
    const MatrixXd s = oracle::dense_S(oracle::dense_fisher(t.alpha, t.beta), m,
                                       oracle::pinned_total(t.alpha));
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        if (i == j) continue;
        const double se = contrast_se(vt, Side::Event, i, j);
        CHECK(se * se == Approx(s(i, i) + s(j, j) - 2 * s(i, j)).epsilon(1e-12));
        CHECK(se == contrast_se(vt, Side::Event, j, i));
      }
    for (Index i = 0; i + 1 < n; ++i)
      for (Index j = i + 1; j + 1 < n; ++j) {
        const double se = contrast_se(vt, Side::Actor, i, j);
        CHECK(se * se ==
              Approx(s(m + i, m + i) + s(m + j, m + j) - 2 * s(m + i, m + j)).epsilon(1e-12));
      }
  }
}

TEST_CASE("inference result") {
  std::mt19937_64 rng(23);
  const Index m = 6, n = 9;
  const Parameters t = Parameters::FromStacked(oracle::random_vector(m + n - 1, rng, 1.0), m);
  const InferenceResult r = infer(t, 0.90);
  const auto s = plugin_covariance(t);
  const double z = z_for_level(0.90);
  REQUIRE(r.se_alpha.size() == m);
  REQUIRE(r.se_beta.size() == n - 1);
  REQUIRE(r.ci_beta.size() == std::size_t(n - 1));
  for (Index i = 0; i < m; ++i) {
    CHECK(r.se_alpha(i) == Approx(std::sqrt(s(i, i))).epsilon(1e-14));
    CHECK(r.ci_alpha[i].half_width() == Approx(z * r.se_alpha(i)).epsilon(1e-12));
    CHECK(r.ci_alpha[i].contains(t.alpha(i)));
    CHECK(r.rate_se_alpha(i) == Approx(1 / std::sqrt(r.v_hat.event_diag(i))).epsilon(1e-14));
    CHECK(r.rate_se_alpha(i) < r.se_alpha(i));
  }
  for (Index j = 0; j + 1 < n; ++j) {
    CHECK(r.se_beta(j) == Approx(std::sqrt(s(m + j, m + j))).epsilon(1e-14));
    CHECK(r.se_beta(j) > 0);
  }
  CHECK(r.contrast_estimate(Side::Event, 0, 1) == t.alpha(0) - t.alpha(1));
  CHECK(r.contrast_se(Side::Actor, 1, 2) == contrast_se(r.v_hat, Side::Actor, 1, 2));
  const Interval c = r.contrast_ci(Side::Event, 2, 4);
  CHECK(c.half_width() == Approx(z * r.contrast_se(Side::Event, 2, 4)).epsilon(1e-12));
}

TEST_CASE("rate standard errors are sandwiched") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = 10 + trial, n = 15 + 2 * trial;
    const Parameters t = Parameters::FromStacked(oracle::random_vector(m + n - 1, rng, 1.0), m);
    const InferenceResult r = infer(t);
    const double q = membership_bounds(t).first;
    for (Index i = 0; i < m; ++i) {
      CHECK(r.rate_se_alpha(i) >= 2 / std::sqrt(double(n)) - 1e-12);
      CHECK(r.rate_se_alpha(i) <= 1 / std::sqrt(q * n) + 1e-12);
    }
    for (Index j = 0; j + 1 < n; ++j) {
      CHECK(r.rate_se_beta(j) >= 2 / std::sqrt(double(m)) - 1e-12);
      CHECK(r.rate_se_beta(j) <= 1 / std::sqrt(q * m) + 1e-12);
    }
  }
}

TEST_CASE("standard errors shrink like n^-1/2 at zero") {
  double prev = 0;
  for (Index n : {25, 50, 100, 200}) {
    const InferenceResult r = infer(Parameters::Zero(n, n));
    if (prev > 0) {
      const double ratio = r.se_alpha(0) / prev;
      CHECK(ratio >= 0.6);
      CHECK(ratio <= 0.8);
    }
    prev = r.se_alpha(0);
  }
}
