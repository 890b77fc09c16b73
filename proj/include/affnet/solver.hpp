#pragma once

#include <string>
#include <vector>

#include "affnet/fisher_inverse.hpp"
#include "affnet/graph.hpp"
#include "affnet/likelihood.hpp"

namespace affnet {

enum class FitMethod { NewtonExact, NewtonApprox, FixedPoint };
enum class InitKind { Zeros, Moment, User };
enum class Existence { Exists, BoundaryDegree, Diverged, MaxIter };

const char* to_string(FitMethod m);
const char* to_string(Existence e);

struct FitConfig {
  FitMethod method = FitMethod::NewtonApprox;
  double tol_score = 1e-8;   // on ||F(theta)||_inf
  double tol_step = 1e-10;   // on ||delta theta||_inf
  int max_iter = 200;
  double divergence_threshold = 30.0;  // on ||theta||_inf
  InitKind init = InitKind::Zeros;
  Parameters user_init;      // used when init == User
  int max_halvings = 30;     // 0 disables the likelihood safeguard

  void validate() const;
};

/// Degrees that sit on the boundary of their range (0 or the opposite side's
/// size). Any such degree rules the MLE out.
struct BoundaryReport {
  std::vector<Index> events;
  std::vector<Index> actors;

  bool ok() const { return events.empty() && actors.empty(); }
};

BoundaryReport existence_precheck(const DegreeSequence& ds);

struct FitResult {
  Parameters theta_hat;
  bool converged = false;
  Existence existence = Existence::MaxIter;
  int iterations = 0;
  double final_score_norm = 0.0;
  std::vector<double> score_trace;  // ||F||_inf at every visited iterate
  BoundaryReport boundary;
  std::vector<std::string> warnings;

  bool exists() const { return existence == Existence::Exists; }
};

FitResult fit(const BipartiteGraph& g, const FitConfig& cfg = {});
FitResult fit(const DegreeSequence& ds, const FitConfig& cfg = {});

/// Solves V delta = rhs exactly through the Schur complement on the smaller
/// side; O(k^2 (m+n) + k^3) with k = min(m, n-1).
Eigen::VectorXd solve_fisher(const FisherInfo<double>& v, const Eigen::VectorXd& rhs);

/// Conjugate gradients on V delta = rhs preconditioned by S. Stops once
/// ||residual||_2 <= rel_tol ||rhs||_2. The first iterate is S rhs scaled to
/// the maximizer of the quadratic model; each iteration costs one O(mn)
/// product with V and one O(m+n) application of S.
Eigen::VectorXd solve_fisher_pcg(const FisherInfo<double>& v, const Eigen::VectorXd& rhs,
                                 double rel_tol = 1e-4, int max_iter = 100);

/// Newton direction for F' = -V: exact solve or the closed-form S.
Eigen::VectorXd newton_direction(const Eigen::VectorXd& score, const FisherInfo<double>& v,
                                 FitMethod method);

/// theta + V^{-1} F (exact) or theta + S F (approx).
Parameters newton_step(const Parameters& theta, const Eigen::VectorXd& score,
                       const FisherInfo<double>& v, FitMethod method);

/// One Gauss-Seidel sweep of the degree-matching map
/// alpha_i += log(d_i / E d_i), then beta_j += log(b_j / E b_j), followed by
/// the translation that restores beta_n = 0.
Parameters fixed_point_step(const DegreeSequence& ds, const Parameters& theta);

/// alpha_i = logit(d_i/n), beta_j = logit(b_j/m) centred, shifted so beta_n = 0.
Parameters moment_init(const DegreeSequence& ds);

}  // namespace affnet
