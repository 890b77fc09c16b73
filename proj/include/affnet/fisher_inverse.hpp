#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "affnet/likelihood.hpp"

namespace affnet {

/// Closed-form approximation S to the inverse Fisher information:
///
///   s_ij = delta_ij / v_ii + sign_i * sign_j / v_{m+n,m+n}
///
/// with sign = +1 on event indices and -1 on actor indices. Only the
/// reciprocal diagonals and the reciprocal augmented total are stored, so
/// storage and application are both O(m + n).
template <typename Scalar>
struct ApproxInverse {
  Vector<Scalar> inv_event_diag;
  Vector<Scalar> inv_actor_diag;
  Scalar inv_aug_total{};

  Index m() const { return inv_event_diag.size(); }
  Index n() const { return inv_actor_diag.size() + 1; }
  Index dim() const { return inv_event_diag.size() + inv_actor_diag.size(); }

  Scalar inv_diag(Index k) const {
    return k < m() ? inv_event_diag(k) : inv_actor_diag(k - m());
  }
  Scalar sign(Index k) const { return k < m() ? Scalar(1) : Scalar(-1); }

  Scalar operator()(Index i, Index j) const {
    const Scalar shared = sign(i) * sign(j) * inv_aug_total;
    return i == j ? inv_diag(i) + shared : shared;
  }

  Matrix<Scalar> to_dense() const {
    const Index d = dim();
    Matrix<Scalar> s(d, d);
    for (Index j = 0; j < d; ++j)
      for (Index i = 0; i < d; ++i) s(i, j) = (*this)(i, j);
    return s;
  }
};

template <typename Scalar>
ApproxInverse<Scalar> build_S(const FisherInfo<Scalar>& v) {
  if (!(v.aug_total > Scalar(0))) {
    throw Error(ErrorKind::SingularAugmented,
                "augmented Fisher total is not positive");
  }
  return {v.event_diag.cwiseInverse(), v.actor_diag.cwiseInverse(),
          Scalar(1) / v.aug_total};
}

/// S x without forming S. The augmented residual
/// x_{m+n} = sum_{i<=m} x_i - sum_{i>m} x_i is the only coupling term.
template <typename Scalar, typename Derived>
Vector<Scalar> apply_S(const ApproxInverse<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  const Index m = s.m(), d = s.dim();
  if (x.size() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "apply_S: vector has length " + std::to_string(x.size()) +
                    ", expected " + std::to_string(d));
  }
  const Scalar x_aug = x.head(m).sum() - x.tail(d - m).sum();
  const Scalar shared = x_aug * s.inv_aug_total;
  Vector<Scalar> y(d);
  y.head(m) = x.head(m).cwiseProduct(s.inv_event_diag).array() + shared;
  y.tail(d - m) = x.tail(d - m).cwiseProduct(s.inv_actor_diag).array() - shared;
  return y;
}

inline constexpr Index kMaxOracleDim = 2000;

/// Dense V^{-1} via Cholesky, falling back to pivoted LU when Cholesky fails.
/// Throws TooLarge above kMaxOracleDim and NumericallySingular when the
/// residual ||V V^{-1} - I||_max exceeds 1e-8.
template <typename Scalar>
Matrix<Scalar> exact_inverse_oracle(const FisherInfo<Scalar>& v) {
  const Index d = v.dim();
  if (d > kMaxOracleDim) {
    throw Error(ErrorKind::TooLarge, "dense inverse of dimension " +
                                         std::to_string(d) + " refused");
  }
  const Matrix<Scalar> dense = v.to_dense();
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(d, d);
  Matrix<Scalar> inv;
  Eigen::LLT<Matrix<Scalar>> llt(dense);
  if (llt.info() == Eigen::Success) {
    inv = llt.solve(eye);
  } else {
    inv = dense.partialPivLu().solve(eye);
  }
  using std::abs;
  const Scalar residual = (dense * inv - eye).cwiseAbs().maxCoeff();
  if (!(residual <= Scalar(1e-8))) {
    throw Error(ErrorKind::NumericallySingular,
                "Fisher matrix inverse residual too large");
  }
  return inv;
}

template <typename Scalar>
struct ApproxError {
  Scalar max_abs_err{};
  Scalar bound_ratio{};  // max_abs_err * q^3 m n / Q^2
  Scalar q{};
  Scalar Q{};
};

/// Entrywise distance between V^{-1} and S, and its normalization by the
/// class bounds of V (an empirical stand-in for the unknown constant).
template <typename Scalar>
ApproxError<Scalar> lemma1_error(const FisherInfo<Scalar>& v) {
  const Matrix<Scalar> inv = exact_inverse_oracle(v);
  const ApproxInverse<Scalar> s = build_S(v);
  Scalar err(0);
  for (Index j = 0; j < inv.cols(); ++j)
    for (Index i = 0; i < inv.rows(); ++i) {
      using std::abs;
      err = std::max(err, abs(inv(i, j) - s(i, j)));
    }
  const auto [q, Q] = class_bounds(v);
  const Scalar mn = Scalar(v.m()) * Scalar(v.n());
  return {err, err * q * q * q * mn / (Q * Q), q, Q};
}

}  // namespace affnet
