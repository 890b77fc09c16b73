#include "affnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affnet {

const char* to_string(FitMethod m) {
  switch (m) {
    case FitMethod::NewtonExact: return "exact";
    case FitMethod::NewtonApprox: return "approx";
    case FitMethod::FixedPoint: return "fixed-point";
  }
  return "?";
}

const char* to_string(Existence e) {
  switch (e) {
    case Existence::Exists: return "exists";
    case Existence::BoundaryDegree: return "boundary_degree";
    case Existence::Diverged: return "diverged";
    case Existence::MaxIter: return "max_iter";
  }
  return "?";
}

void FitConfig::validate() const {
  if (!(tol_score > 0) || !(tol_step > 0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
  if (!(divergence_threshold > 0)) {
    throw Error(ErrorKind::InvalidArgument, "divergence threshold must be positive");
  }
  if (max_halvings < 0) throw Error(ErrorKind::InvalidArgument, "max_halvings < 0");
}

BoundaryReport existence_precheck(const DegreeSequence& ds) {
  BoundaryReport r;
  const Index m = ds.m(), n = ds.n();
  for (Index i = 0; i < m; ++i)
    if (ds.d(i) == 0 || ds.d(i) == n) r.events.push_back(i);
  for (Index j = 0; j < n; ++j)
    if (ds.b(j) == 0 || ds.b(j) == m) r.actors.push_back(j);
  return r;
}

Eigen::VectorXd solve_fisher(const FisherInfo<double>& v, const Eigen::VectorXd& rhs) {
  const Index m = v.m(), k = v.n() - 1;
  if (rhs.size() != m + k) {
    throw Error(ErrorKind::DimensionMismatch, "solve_fisher: rhs length mismatch");
  }
  const auto fa = rhs.head(m);
  const auto fb = rhs.tail(k);
  Eigen::VectorXd out(m + k);
  if (m <= k) {
    const Eigen::VectorXd inv_b = v.actor_diag.cwiseInverse();
    const Eigen::MatrixXd cs = v.cross * inv_b.asDiagonal();
    Eigen::MatrixXd schur = -cs * v.cross.transpose();
    schur.diagonal() += v.event_diag;
    const Eigen::VectorXd da = schur.ldlt().solve(fa - cs * fb);
    out.head(m) = da;
    out.tail(k) = (fb - v.cross.transpose() * da).cwiseProduct(inv_b);
  } else {
    const Eigen::VectorXd inv_a = v.event_diag.cwiseInverse();
    const Eigen::MatrixXd cs = v.cross.transpose() * inv_a.asDiagonal();
    Eigen::MatrixXd schur = -cs * v.cross;
    schur.diagonal() += v.actor_diag;
    const Eigen::VectorXd db = schur.ldlt().solve(fb - cs * fa);
    out.tail(k) = db;
    out.head(m) = (fa - v.cross * db).cwiseProduct(inv_a);
  }
  return out;
}

Eigen::VectorXd solve_fisher_pcg(const FisherInfo<double>& v, const Eigen::VectorXd& rhs,
                                 double rel_tol, int max_iter) {
  if (rhs.size() != v.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "solve_fisher_pcg: rhs length mismatch");
  }
  const ApproxInverse<double> s = build_S(v);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = apply_S(s, r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double stop = rel_tol * rhs.norm();
  for (int k = 0; k < max_iter && r.norm() > stop; ++k) {
    const Eigen::VectorXd vp = v.multiply(p);
    const double curv = p.dot(vp);
    if (!(curv > 0)) break;
    const double a = rz / curv;
    x += a * p;
    r -= a * vp;
    z = apply_S(s, r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return x;
}

Eigen::VectorXd newton_direction(const Eigen::VectorXd& score, const FisherInfo<double>& v,
                                 FitMethod method) {
  switch (method) {
    case FitMethod::NewtonExact: return solve_fisher(v, score);
    case FitMethod::NewtonApprox: return apply_S(build_S(v), score);
    case FitMethod::FixedPoint: break;
  }
  throw Error(ErrorKind::InvalidArgument, "fixed-point iteration has no Newton direction");
}

Parameters newton_step(const Parameters& theta, const Eigen::VectorXd& score,
                       const FisherInfo<double>& v, FitMethod method) {
  const Eigen::VectorXd next = theta.stacked() + newton_direction(score, v, method);
  return Parameters::FromStacked(next, theta.m());
}

Parameters fixed_point_step(const DegreeSequence& ds, const Parameters& theta) {
  const Index m = theta.m(), n = theta.n();
  Parameters next = theta;
  {
    const auto [ed, eb] = expected_degrees(next);
    for (Index i = 0; i < m; ++i)
      next.alpha(i) += std::log(double(ds.d(i))) - std::log(ed(i));
  }
  const auto [ed, eb] = expected_degrees(next);
  const double shift = std::log(double(ds.b(n - 1))) - std::log(eb(n - 1));
  for (Index j = 0; j + 1 < n; ++j)
    next.beta(j) += std::log(double(ds.b(j))) - std::log(eb(j)) - shift;
  next.alpha.array() += shift;
  return next;
}

namespace {

double logit_clamped(double num, double den) {
  const double p = std::clamp(num / den, 0.5 / den, 1.0 - 0.5 / den);
  return std::log(p / (1.0 - p));
}

double sup_norm(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

Parameters moment_init(const DegreeSequence& ds) {
  const Index m = ds.m(), n = ds.n();
  Eigen::VectorXd a(m), b(n);
  for (Index i = 0; i < m; ++i) a(i) = logit_clamped(double(ds.d(i)), double(n));
  for (Index j = 0; j < n; ++j) b(j) = logit_clamped(double(ds.b(j)), double(m));
  b.array() -= b.mean();
  const double c = b(n - 1);
  return {a.array() + c, (b.head(n - 1).array() - c).matrix()};
}

FitResult fit(const BipartiteGraph& g, const FitConfig& cfg) {
  if (g.m() < 1 || g.n() < 2) {
    throw Error(ErrorKind::InvalidArgument, "fit needs m >= 1 and n >= 2");
  }
  return fit(degrees(g), cfg);
}

FitResult fit(const DegreeSequence& ds, const FitConfig& cfg) {
  cfg.validate();
  const Index m = ds.m(), n = ds.n();
  if (m < 1 || n < 2) throw Error(ErrorKind::InvalidArgument, "fit needs m >= 1 and n >= 2");

  FitResult res;
  if (m > n) {
    res.warnings.push_back("m > n: the asymptotic approximations assume m <= n");
  }
  res.boundary = existence_precheck(ds);
  if (!res.boundary.ok()) {
    res.existence = Existence::BoundaryDegree;
    res.theta_hat = Parameters::Zero(m, n);
    return res;
  }

  Parameters theta;
  switch (cfg.init) {
    case InitKind::Zeros: theta = Parameters::Zero(m, n); break;
    case InitKind::Moment: theta = moment_init(ds); break;
    case InitKind::User:
      if (cfg.user_init.m() != m || cfg.user_init.n() != n) {
        throw Error(ErrorKind::DimensionMismatch, "user initial value has wrong size");
      }
      if (!cfg.user_init.all_finite()) {
        throw Error(ErrorKind::InvalidArgument, "user initial value is not finite");
      }
      theta = cfg.user_init;
      break;
  }

  const bool newton = cfg.method != FitMethod::FixedPoint;
  double ll = newton ? log_likelihood(ds, theta) : 0.0;
  res.existence = Existence::MaxIter;

  for (;;) {
    const Eigen::VectorXd f = score(ds, theta);
    res.final_score_norm = sup_norm(f);
    res.score_trace.push_back(res.final_score_norm);

    Eigen::VectorXd delta;
    Parameters candidate;
    if (newton) {
      const FisherInfo<double> v = fisher_info(theta);
      // The bare S step can oscillate (S V has an eigenvalue of exactly 2
      // when m = n at theta = 0), so S serves as a CG preconditioner instead.
      delta = cfg.method == FitMethod::NewtonApprox ? solve_fisher_pcg(v, f)
                                                    : newton_direction(f, v, cfg.method);
    } else {
      candidate = fixed_point_step(ds, theta);
      delta = candidate.stacked() - theta.stacked();
    }

    if (res.final_score_norm <= cfg.tol_score && sup_norm(delta) <= cfg.tol_step) {
      res.existence = Existence::Exists;
      res.converged = true;
      break;
    }
    if (res.iterations >= cfg.max_iter) break;

    if (newton) {
      const Eigen::VectorXd base = theta.stacked();
      // Accept ties up to rounding so the last tiny steps are never rejected.
      const double slack = 64 * std::numeric_limits<double>::epsilon() * (std::abs(ll) + 1);
      double t = 1.0;
      candidate = Parameters::FromStacked(base + delta, m);
      double ll_next = log_likelihood(ds, candidate);
      for (int h = 0; h < cfg.max_halvings && !(ll_next >= ll - slack); ++h) {
        t *= 0.5;
        candidate = Parameters::FromStacked(base + t * delta, m);
        ll_next = log_likelihood(ds, candidate);
      }
      ll = ll_next;
    }
    theta = std::move(candidate);
    ++res.iterations;

    if (!theta.all_finite() || theta.sup_norm() > cfg.divergence_threshold) {
      res.existence = Existence::Diverged;
      break;
    }
  }
  res.theta_hat = std::move(theta);
  return res;
}

}  // namespace affnet
