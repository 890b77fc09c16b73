#include "affnet/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace affnet {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

Index parse_index(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || v < 1) {
    throw Error(ErrorKind::InvalidArgument, "bad 1-based index in '" + context + "'");
  }
  return Index(v - 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Replication {
  bool exists = false;
  Parameters theta_hat;
  FisherInfo<double> v_hat;
};

Replication replicate(const Scenario& s, std::uint64_t seed, const FitConfig& cfg) {
  const BipartiteGraph g = sample_graph(s.theta_star, seed);
  FitResult fr = fit(g, cfg);
  Replication r;
  r.exists = fr.exists();
  if (r.exists) {
    r.v_hat = fisher_info(fr.theta_hat);
    r.theta_hat = std::move(fr.theta_hat);
  }
  return r;
}

void check_pair(const ContrastPair& p, const Scenario& s) {
  const Index limit = p.side == Side::Event ? s.m : s.n - 1;
  if (p.i == p.j) throw Error(ErrorKind::SameIndex, "pair " + p.label() + " repeats an index");
  if (p.i >= limit || p.j >= limit) {
    throw Error(ErrorKind::InvalidArgument, "pair " + p.label() + " is out of range");
  }
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

ContrastPair ContrastPair::parse(const std::string& text) {
  auto parts = split(text, ':');
  ContrastPair p;
  std::string head;
  if (parts.size() == 3) {
    head = parts[0];
    parts.erase(parts.begin());
  } else if (parts.size() == 2 && !parts[0].empty()) {
    head = parts[0].substr(0, 1);
    parts[0] = parts[0].substr(1);
  } else {
    throw Error(ErrorKind::InvalidArgument, "bad pair '" + text + "'");
  }
  if (head == "a" || head == "alpha") {
    p.side = Side::Event;
  } else if (head == "b" || head == "beta") {
    p.side = Side::Actor;
  } else {
    throw Error(ErrorKind::InvalidArgument, "bad pair side in '" + text + "'");
  }
  p.i = parse_index(parts[0], text);
  p.j = parse_index(parts[1], text);
  if (p.i == p.j) throw Error(ErrorKind::SameIndex, "pair '" + text + "' repeats an index");
  return p;
}

std::vector<ContrastPair> ContrastPair::parse_list(const std::string& text) {
  std::vector<ContrastPair> out;
  for (const auto& item : split(text, ','))
    if (!item.empty()) out.push_back(parse(item));
  return out;
}

std::string ContrastPair::label() const {
  return std::string(side == Side::Event ? "alpha" : "beta") + "(" + std::to_string(i + 1) +
         "," + std::to_string(j + 1) + ")";
}

CoverageReport run_coverage(const Scenario& scenario, const std::vector<ContrastPair>& pairs,
                            Index replications, std::uint64_t seed,
                            const ExperimentOptions& opts) {
  if (replications < 1) throw Error(ErrorKind::InvalidArgument, "need at least one replication");
  for (const auto& p : pairs) check_pair(p, scenario);
  const double z = z_for_level(opts.level);

  struct Outcome {
    bool exists = false;
    std::vector<char> covered;
    std::vector<double> half;
  };
  std::vector<Outcome> outcomes(replications);
  parallel_for(replications, opts.threads, [&](Index r) {
    const Replication rep = replicate(scenario, seed + std::uint64_t(r), opts.fit);
    Outcome& out = outcomes[r];
    out.exists = rep.exists;
    if (!rep.exists) return;
    for (const auto& p : pairs) {
      const Eigen::VectorXd& est = p.side == Side::Event ? rep.theta_hat.alpha : rep.theta_hat.beta;
      const Eigen::VectorXd& truth =
          p.side == Side::Event ? scenario.theta_star.alpha : scenario.theta_star.beta;
      const double se = contrast_se(rep.v_hat, p.side, p.i, p.j);
      const Interval ci = confidence_interval(est(p.i) - est(p.j), se, opts.level);
      out.covered.push_back(ci.contains(truth(p.i) - truth(p.j)));
      out.half.push_back(z * se);
    }
  });

  CoverageReport rep;
  rep.scenario = scenario;
  rep.level = opts.level;
  rep.seed = seed;
  rep.method = opts.fit.method;
  rep.total_replications = replications;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    PairCoverage pc;
    pc.pair = pairs[k];
    double hits = 0, half = 0;
    for (const auto& o : outcomes) {
      if (!o.exists) continue;
      ++pc.replications_used;
      hits += o.covered[k];
      half += o.half[k];
    }
    if (pc.replications_used > 0) {
      pc.coverage_pct = 100.0 * hits / double(pc.replications_used);
      pc.mean_ci_halfwidth = half / double(pc.replications_used);
      pc.mean_ci_length = 2.0 * pc.mean_ci_halfwidth;
    } else {
      pc.coverage_pct = pc.mean_ci_halfwidth = pc.mean_ci_length = std::nan("");
    }
    rep.pairs.push_back(pc);
  }
  for (const auto& o : outcomes) rep.nonexistent += !o.exists;
  rep.nonexistence_pct = 100.0 * double(rep.nonexistent) / double(replications);
  return rep;
}

QQTarget QQTarget::parse(const std::string& text) {
  const auto parts = split(text, ':');
  QQTarget t;
  if (parts.size() == 3 && (parts[0] == "xi" || parts[0] == "eta")) {
    t.kind = parts[0] == "xi" ? Kind::Xi : Kind::Eta;
    t.side = parts[0] == "xi" ? Side::Event : Side::Actor;
    t.i = parse_index(parts[1], text);
    t.j = parse_index(parts[2], text);
    if (t.i == t.j) throw Error(ErrorKind::SameIndex, "target '" + text + "' repeats an index");
    return t;
  }
  if (parts.size() == 2 && (parts[0] == "alpha" || parts[0] == "beta")) {
    t.kind = Kind::Single;
    t.side = parts[0] == "alpha" ? Side::Event : Side::Actor;
    t.i = t.j = parse_index(parts[1], text);
    return t;
  }
  throw Error(ErrorKind::InvalidArgument, "bad QQ target '" + text + "'");
}

std::string QQTarget::label() const {
  const std::string a = std::to_string(i + 1), b = std::to_string(j + 1);
  switch (kind) {
    case Kind::Xi: return "xi_" + a + "_" + b;
    case Kind::Eta: return "eta_" + a + "_" + b;
    case Kind::Single: return std::string(side == Side::Event ? "alpha_" : "beta_") + a;
  }
  return "?";
}

std::vector<QQExport> run_qq(const Scenario& scenario, const std::vector<QQTarget>& targets,
                             Index replications, std::uint64_t seed,
                             const ExperimentOptions& opts) {
  if (replications < 1) throw Error(ErrorKind::InvalidArgument, "need at least one replication");
  for (const auto& t : targets) {
    const Index limit = t.side == Side::Event ? scenario.m : scenario.n - 1;
    if (t.i >= limit || t.j >= limit) {
      throw Error(ErrorKind::InvalidArgument, "QQ target " + t.label() + " is out of range");
    }
  }

  struct Outcome {
    bool exists = false;
    std::vector<double> stat;
  };
  std::vector<Outcome> outcomes(replications);
  parallel_for(replications, opts.threads, [&](Index r) {
    const Replication rep = replicate(scenario, seed + std::uint64_t(r), opts.fit);
    Outcome& out = outcomes[r];
    out.exists = rep.exists;
    if (!rep.exists) return;
    const ApproxInverse<double> s = build_S(rep.v_hat);
    for (const auto& t : targets) {
      const bool ev = t.side == Side::Event;
      const Eigen::VectorXd& est = ev ? rep.theta_hat.alpha : rep.theta_hat.beta;
      const Eigen::VectorXd& truth = ev ? scenario.theta_star.alpha : scenario.theta_star.beta;
      if (t.kind == QQTarget::Kind::Single) {
        const Index k = ev ? t.i : scenario.m + t.i;
        out.stat.push_back((est(t.i) - truth(t.i)) / std::sqrt(s(k, k)));
      } else {
        const double diff = est(t.i) - est(t.j) - (truth(t.i) - truth(t.j));
        out.stat.push_back(diff / contrast_se(rep.v_hat, t.side, t.i, t.j));
      }
    }
  });

  std::vector<QQExport> exports;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    QQExport q;
    q.target = targets[k];
    for (const auto& o : outcomes) {
      if (o.exists) {
        q.empirical.push_back(o.stat[k]);
      } else {
        ++q.nonexistent;
      }
    }
    std::sort(q.empirical.begin(), q.empirical.end());
    const double count = double(q.empirical.size());
    for (std::size_t r = 0; r < q.empirical.size(); ++r)
      q.theoretical.push_back(normal_quantile((double(r) + 0.5) / count));
    exports.push_back(std::move(q));
  }
  return exports;
}

std::vector<ConsistencyRow> run_consistency(const std::vector<Scenario>& scenarios,
                                            Index replications, std::uint64_t seed,
                                            const ExperimentOptions& opts) {
  if (replications < 1) throw Error(ErrorKind::InvalidArgument, "need at least one replication");
  std::vector<ConsistencyRow> rows;
  for (const auto& sc : scenarios) {
    std::vector<double> err(replications, std::nan(""));
    parallel_for(replications, opts.threads, [&](Index r) {
      const Replication rep = replicate(sc, seed + std::uint64_t(r), opts.fit);
      if (rep.exists) err[r] = (rep.theta_hat.stacked() - sc.theta_star.stacked()).cwiseAbs().maxCoeff();
    });
    ConsistencyRow row;
    row.m = sc.m;
    row.n = sc.n;
    std::vector<double> ok;
    for (double e : err) {
      if (std::isnan(e)) {
        ++row.nonexistent;
      } else {
        ok.push_back(e);
      }
    }
    row.used = Index(ok.size());
    if (!ok.empty()) {
      double sum = 0;
      for (double e : ok) sum += e;
      row.mean_error = sum / double(ok.size());
      std::sort(ok.begin(), ok.end());
      const std::size_t rank = std::size_t(std::ceil(0.9 * double(ok.size())));
      row.p90_error = ok[std::max<std::size_t>(rank, 1) - 1];
    } else {
      row.mean_error = row.p90_error = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

double ks_statistic(std::vector<double> sample) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "KS statistic of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = normal_cdf(sample[k]);
    d = std::max({d, double(k + 1) / n - f, f - double(k) / n});
  }
  return d;
}

void write_coverage_csv(std::ostream& os, const CoverageReport& r) {
  os << "pair,coverage_pct,mean_ci_length,mean_ci_halfwidth,replications_used,"
        "nonexistence_pct,total_replications,m,n,L,L_alpha,L_beta,level,seed,method\n";
  for (const auto& p : r.pairs) {
    os << p.pair.label() << ',' << fmt(p.coverage_pct) << ',' << fmt(p.mean_ci_length) << ','
       << fmt(p.mean_ci_halfwidth) << ',' << p.replications_used << ','
       << fmt(r.nonexistence_pct) << ',' << r.total_replications << ',' << r.scenario.m << ','
       << r.scenario.n << ',' << r.scenario.height.label() << ',' << fmt(r.scenario.L_alpha)
       << ',' << fmt(r.scenario.L_beta) << ',' << fmt(r.level) << ',' << r.seed << ','
       << to_string(r.method) << '\n';
  }
}

void write_qq_csv(std::ostream& os, const QQExport& qq) {
  os << "theoretical,empirical\n";
  for (std::size_t k = 0; k < qq.empirical.size(); ++k)
    os << fmt(qq.theoretical[k]) << ',' << fmt(qq.empirical[k]) << '\n';
}

void write_consistency_csv(std::ostream& os, const std::vector<ConsistencyRow>& rows) {
  os << "m,n,mean_sup_error,p90_sup_error,used,nonexistent\n";
  for (const auto& r : rows)
    os << r.m << ',' << r.n << ',' << fmt(r.mean_error) << ',' << fmt(r.p90_error) << ','
       << r.used << ',' << r.nonexistent << '\n';
}

}  // namespace affnet
