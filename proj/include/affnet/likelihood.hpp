#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "affnet/graph.hpp"

namespace affnet {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Logistic function of z, branch-selected so exp never overflows.
template <typename Scalar>
Scalar logistic(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

/// p(1-p) for p = logistic(z); symmetric in z.
template <typename Scalar>
Scalar logistic_variance(Scalar z) {
  using std::abs;
  using std::exp;
  const Scalar e = exp(-abs(z));
  return e / ((Scalar(1) + e) * (Scalar(1) + e));
}

/// log(1 + e^z) as max(z, 0) + log1p(e^{-|z|}).
template <typename Scalar>
Scalar log1p_exp(Scalar z) {
  using std::abs;
  using std::exp;
  using std::log1p;
  return std::max(z, Scalar(0)) + log1p(exp(-abs(z)));
}

template <typename Scalar>
Scalar edge_probability(Scalar alpha_i, Scalar beta_j) {
  return logistic(alpha_i + beta_j);
}

/// Model-implied mean degrees for every event and every actor (including the
/// pinned actor n). Columns are visited in order so the sums are reproducible.
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> expected_degrees(
    const ParameterVector<Scalar>& theta) {
  const Index m = theta.m(), n = theta.n();
  Vector<Scalar> ed = Vector<Scalar>::Zero(m);
  Vector<Scalar> eb(n);
  for (Index j = 0; j < n; ++j) {
    const Scalar bj = theta.beta_at(j);
    Scalar col(0);
    for (Index i = 0; i < m; ++i) {
      const Scalar p = logistic(theta.alpha(i) + bj);
      ed(i) += p;
      col += p;
    }
    eb(j) = col;
  }
  return {std::move(ed), std::move(eb)};
}

template <typename Scalar>
Scalar log_likelihood(const DegreeSequence& ds, const ParameterVector<Scalar>& theta) {
  const Index m = theta.m(), n = theta.n();
  if (ds.m() != m || ds.n() != n) {
    throw Error(ErrorKind::DimensionMismatch, "degree sequence / parameter size mismatch");
  }
  Scalar linear(0);
  for (Index i = 0; i < m; ++i) linear += theta.alpha(i) * Scalar(ds.d(i));
  for (Index j = 0; j + 1 < n; ++j) linear += theta.beta(j) * Scalar(ds.b(j));
  Scalar log_partition(0);
  for (Index j = 0; j < n; ++j) {
    const Scalar bj = theta.beta_at(j);
    for (Index i = 0; i < m; ++i) log_partition += log1p_exp(theta.alpha(i) + bj);
  }
  return linear - log_partition;
}

template <typename Scalar>
Scalar log_likelihood(const BipartiteGraph& g, const ParameterVector<Scalar>& theta) {
  check_dimensions(g, theta.m(), theta.n());
  return log_likelihood(degrees(g), theta);
}

/// F(theta) = g - E_theta g over (d_1..d_m, b_1..b_{n-1}); the b_n equation is
/// redundant under the pinned beta_n and is left out.
template <typename Scalar>
Vector<Scalar> score(const DegreeSequence& ds, const ParameterVector<Scalar>& theta) {
  const Index m = theta.m(), n = theta.n();
  if (ds.m() != m || ds.n() != n) {
    throw Error(ErrorKind::DimensionMismatch, "degree sequence / parameter size mismatch");
  }
  const auto [ed, eb] = expected_degrees(theta);
  Vector<Scalar> f(m + n - 1);
  for (Index i = 0; i < m; ++i) f(i) = Scalar(ds.d(i)) - ed(i);
  for (Index j = 0; j + 1 < n; ++j) f(m + j) = Scalar(ds.b(j)) - eb(j);
  return f;
}

template <typename Scalar>
Vector<Scalar> score(const BipartiteGraph& g, const ParameterVector<Scalar>& theta) {
  check_dimensions(g, theta.m(), theta.n());
  return score(degrees(g), theta);
}

/// Fisher information of theta kept in structured form: the two diagonal
/// blocks, the event-by-actor cross block, and the entries of the augmented
/// (m+n)-th row/column. Only event rows have a nonzero augmented entry; it is
/// the variance term of the pinned actor n.
template <typename Scalar>
struct FisherInfo {
  Vector<Scalar> event_diag;  // v_{i,i}, i < m
  Vector<Scalar> actor_diag;  // v_{m+j,m+j}, j < n-1
  Matrix<Scalar> cross;       // v_{i,m+j}, m x (n-1)
  Vector<Scalar> aug_row;     // v_{i,m+n}, i < m
  Scalar aug_total{};         // v_{m+n,m+n}

  Index m() const { return event_diag.size(); }
  Index n() const { return actor_diag.size() + 1; }
  Index dim() const { return event_diag.size() + actor_diag.size(); }

  Scalar diag(Index k) const {
    return k < m() ? event_diag(k) : actor_diag(k - m());
  }

  /// Dense (m+n-1)^2 matrix. Used by reference checks, not by the solver.
  Matrix<Scalar> to_dense() const {
    const Index mm = m(), d = dim();
    Matrix<Scalar> v = Matrix<Scalar>::Zero(d, d);
    v.diagonal() << event_diag, actor_diag;
    v.topRightCorner(mm, d - mm) = cross;
    v.bottomLeftCorner(d - mm, mm) = cross.transpose();
    return v;
  }

  /// V x in O(mn) without forming V.
  template <typename Derived>
  Vector<Scalar> multiply(const Eigen::MatrixBase<Derived>& x) const {
    const Index mm = m();
    const auto xa = x.head(mm);
    const auto xb = x.tail(dim() - mm);
    Vector<Scalar> y(dim());
    y.head(mm) = event_diag.cwiseProduct(xa) + cross * xb;
    y.tail(dim() - mm) = actor_diag.cwiseProduct(xb) + cross.transpose() * xa;
    return y;
  }

  FisherInfo scaled(Scalar c) const {
    return {c * event_diag, c * actor_diag, c * cross, c * aug_row, c * aug_total};
  }
};

template <typename Scalar>
FisherInfo<Scalar> fisher_info(const ParameterVector<Scalar>& theta) {
  const Index m = theta.m(), n = theta.n();
  FisherInfo<Scalar> v;
  v.event_diag = Vector<Scalar>::Zero(m);
  v.actor_diag.resize(n - 1);
  v.cross.resize(m, n - 1);
  v.aug_row.resize(m);
  for (Index j = 0; j < n; ++j) {
    const Scalar bj = theta.beta_at(j);
    Scalar col(0);
    for (Index i = 0; i < m; ++i) {
      const Scalar w = logistic_variance(theta.alpha(i) + bj);
      v.event_diag(i) += w;
      if (j + 1 < n) {
        v.cross(i, j) = w;
        col += w;
      } else {
        v.aug_row(i) = w;
      }
    }
    if (j + 1 < n) v.actor_diag(j) = col;
  }
  v.aug_total = v.aug_row.sum();
  return v;
}

/// Bounds (q, Q) with q <= every off-diagonal Fisher entry <= Q, from
/// ||theta||_inf alone.
template <typename Scalar>
std::pair<Scalar, Scalar> membership_bounds(const ParameterVector<Scalar>& theta) {
  return {logistic_variance(Scalar(2) * theta.sup_norm()), Scalar(0.25)};
}

/// Tightest (q, Q) for a given V: the extreme cross and augmented entries.
template <typename Scalar>
std::pair<Scalar, Scalar> class_bounds(const FisherInfo<Scalar>& v) {
  Scalar lo = v.aug_row.minCoeff(), hi = v.aug_row.maxCoeff();
  if (v.cross.size()) {
    lo = std::min(lo, v.cross.minCoeff());
    hi = std::max(hi, v.cross.maxCoeff());
  }
  return {lo, hi};
}

}  // namespace affnet
