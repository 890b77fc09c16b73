#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affnet/errors.hpp"

namespace affnet {

using Index = Eigen::Index;
using AffiliationMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using DegreeVector = Eigen::Matrix<Index, Eigen::Dynamic, 1>;

/// Binary m x n affiliation matrix: rows are events, columns are actors.
/// Validated on construction and immutable afterwards.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  explicit BipartiteGraph(AffiliationMatrix x,
                          std::vector<std::string> event_labels = {},
                          std::vector<std::string> actor_labels = {});

  Index m() const { return x_.rows(); }
  Index n() const { return x_.cols(); }
  const AffiliationMatrix& x() const { return x_; }
  std::uint8_t operator()(Index i, Index j) const { return x_(i, j); }
  Index edge_count() const;

  bool has_event_labels() const { return !event_labels_.empty(); }
  bool has_actor_labels() const { return !actor_labels_.empty(); }
  const std::vector<std::string>& event_labels() const { return event_labels_; }
  const std::vector<std::string>& actor_labels() const { return actor_labels_; }

  /// Label of event i, falling back to its 1-based index.
  std::string event_name(Index i) const;
  std::string actor_name(Index j) const;

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.x_ == b.x_ && a.event_labels_ == b.event_labels_ &&
           a.actor_labels_ == b.actor_labels_;
  }

 private:
  AffiliationMatrix x_;
  std::vector<std::string> event_labels_;
  std::vector<std::string> actor_labels_;
};

/// Event degrees d (row sums) and actor degrees b (column sums).
struct DegreeSequence {
  DegreeVector d;
  DegreeVector b;

  Index m() const { return d.size(); }
  Index n() const { return b.size(); }
};

DegreeSequence degrees(const BipartiteGraph& g);

struct PruneResult {
  BipartiteGraph graph;
  std::vector<Index> removed_events;  // positions in the input graph
  std::vector<Index> removed_actors;
  std::vector<Index> kept_events;
  std::vector<Index> kept_actors;
};

/// Drops zero-degree events and actors until none remain. Throws AllPruned
/// when nothing survives.
PruneResult prune_zero_degree(const BipartiteGraph& g);

/// (alpha_1..alpha_m, beta_1..beta_{n-1}); beta_n is pinned to zero and never
/// stored.
template <typename Scalar>
struct ParameterVector {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector alpha;
  Vector beta;

  ParameterVector() = default;
  ParameterVector(Vector a, Vector b) : alpha(std::move(a)), beta(std::move(b)) {}

  static ParameterVector Zero(Index m, Index n) {
    return {Vector::Zero(m), Vector::Zero(n - 1)};
  }

  /// Splits a stacked (alpha; beta) vector of length m+n-1.
  static ParameterVector FromStacked(const Eigen::Ref<const Vector>& v, Index m) {
    return {v.head(m), v.tail(v.size() - m)};
  }

  Index m() const { return alpha.size(); }
  Index n() const { return beta.size() + 1; }
  Index dim() const { return alpha.size() + beta.size(); }

  /// beta_j for j in [0, n), with the pinned zero at j = n-1.
  Scalar beta_at(Index j) const { return j < beta.size() ? beta(j) : Scalar(0); }

  Vector stacked() const {
    Vector v(dim());
    v << alpha, beta;
    return v;
  }

  Scalar sup_norm() const {
    Scalar s(0);
    if (alpha.size()) s = alpha.cwiseAbs().maxCoeff();
    if (beta.size()) s = std::max(s, beta.cwiseAbs().maxCoeff());
    return s;
  }

  bool all_finite() const { return alpha.allFinite() && beta.allFinite(); }

  template <typename Other>
  ParameterVector<Other> cast() const {
    return {alpha.template cast<Other>(), beta.template cast<Other>()};
  }
};

using Parameters = ParameterVector<double>;

/// Throws DimensionMismatch unless theta has m alphas and n-1 betas.
void check_dimensions(const BipartiteGraph& g, Index theta_m, Index theta_n);

}  // namespace affnet
