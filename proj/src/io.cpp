#include "affnet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace affnet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // Avoid printing "-0.00".
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::Zeros: return "zeros";
    case InitKind::Moment: return "moment";
    case InitKind::User: return "user";
  }
  return "?";
}

}  // namespace

InputFormat parse_format(const std::string& text) {
  if (text == "edge_list" || text == "edges" || text == "edge-list") return InputFormat::EdgeList;
  if (text == "dense_matrix" || text == "dense" || text == "dense-matrix") return InputFormat::DenseMatrix;
  throw Error(ErrorKind::InvalidArgument, "unknown input format '" + text + "'");
}

ParsedInput parse_input(const std::string& path, InputFormat format, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError(ErrorKind::ParseError, "cannot open '" + path + "'", 0);
  return format == InputFormat::DenseMatrix ? parse_dense(in) : parse_edge_list(in, has_header);
}

ParsedInput parse_dense(std::istream& is) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    std::vector<std::uint8_t> row;
    for (const auto& f : fields) {
      if (f == "0" || f == "1") {
        row.push_back(std::uint8_t(f[0] - '0'));
        continue;
      }
      const bool numeric = !f.empty() && f.find_first_not_of("0123456789.-+eE") == std::string::npos;
      if (numeric) {
        throw ParseError(ErrorKind::NonBinaryEntry,
                         "line " + std::to_string(lineno) + ": entry '" + f + "' is not 0 or 1",
                         lineno);
      }
      throw ParseError(ErrorKind::ParseError,
                       "line " + std::to_string(lineno) + ": cannot parse '" + f + "'", lineno);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(ErrorKind::ParseError,
                       "line " + std::to_string(lineno) + ": expected " +
                           std::to_string(rows.front().size()) + " entries, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw ParseError(ErrorKind::EmptyInput, "no matrix rows found", lineno);
  }
  AffiliationMatrix x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
  return {BipartiteGraph(std::move(x)), {}};
}

ParsedInput parse_edge_list(std::istream& is, bool has_header) {
  std::vector<std::string> events, actors;
  std::unordered_map<std::string, Index> event_index, actor_index;
  std::vector<std::pair<Index, Index>> edges;
  std::set<std::pair<Index, Index>> seen;
  ParsedInput out;

  std::string line;
  std::size_t lineno = 0;
  bool header_pending = has_header;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const char sep = t.find('\t') != std::string::npos ? '\t' : ',';
    const auto fields = split_fields(t, sep);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(ErrorKind::ParseError,
                       "line " + std::to_string(lineno) + ": expected 'event<sep>actor'", lineno);
    }
    auto lookup = [](auto& index, auto& labels, const std::string& key) {
      auto [it, inserted] = index.try_emplace(key, Index(labels.size()));
      if (inserted) labels.push_back(key);
      return it->second;
    };
    const Index e = lookup(event_index, events, fields[0]);
    const Index a = lookup(actor_index, actors, fields[1]);
    if (!seen.insert({e, a}).second) {
      out.warnings.push_back("line " + std::to_string(lineno) + ": duplicate edge (" + fields[0] +
                             ", " + fields[1] + ") ignored");
      continue;
    }
    edges.emplace_back(e, a);
  }
  if (edges.empty()) throw ParseError(ErrorKind::EmptyInput, "no edges found", lineno);

  AffiliationMatrix x = AffiliationMatrix::Zero(events.size(), actors.size());
  for (const auto& [e, a] : edges) x(e, a) = 1;
  out.graph = BipartiteGraph(std::move(x), std::move(events), std::move(actors));
  return out;
}

void write_dense(std::ostream& os, const BipartiteGraph& g) {
  for (Index i = 0; i < g.m(); ++i) {
    for (Index j = 0; j < g.n(); ++j) {
      if (j) os << ',';
      os << int(g(i, j));
    }
    os << '\n';
  }
}

void write_edge_list(std::ostream& os, const BipartiteGraph& g) {
  for (Index i = 0; i < g.m(); ++i)
    for (Index j = 0; j < g.n(); ++j)
      if (g(i, j)) os << g.event_name(i) << '\t' << g.actor_name(j) << '\n';
}

void write_theta(std::ostream& os, const Parameters& theta) {
  os << "side,index,value\n";
  for (Index i = 0; i < theta.m(); ++i) os << "alpha," << i + 1 << ',' << full(theta.alpha(i)) << '\n';
  for (Index j = 0; j < theta.beta.size(); ++j)
    os << "beta," << j + 1 << ',' << full(theta.beta(j)) << '\n';
}

Parameters read_theta(std::istream& is) {
  std::map<Index, double> alpha, beta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t.rfind("side,", 0) == 0) continue;
    const auto f = split_fields(t, ',');
    auto fail = [&](const std::string& why) {
      return ParseError(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + why, lineno);
    };
    if (f.size() != 3) throw fail("expected side,index,value");
    long long idx = 0;
    double value = 0;
    try {
      std::size_t used = 0;
      idx = std::stoll(f[1], &used);
      if (used != f[1].size()) throw fail("bad index");
      value = std::stod(f[2], &used);
      if (used != f[2].size()) throw fail("bad value");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw fail("bad number");
    }
    if (idx < 1 || !std::isfinite(value)) throw fail("index must be >= 1 and value finite");
    auto& target = f[0] == "alpha" ? alpha : f[0] == "beta" ? beta : throw fail("side must be alpha or beta");
    if (!target.emplace(Index(idx - 1), value).second) throw fail("repeated index");
  }
  auto to_vec = [&](const std::map<Index, double>& mp, const char* side) {
    Eigen::VectorXd v(mp.size());
    Index k = 0;
    for (const auto& [i, val] : mp) {
      if (i != k) {
        throw ParseError(ErrorKind::ParseError, std::string(side) + " indices are not contiguous", 0);
      }
      v(k++) = val;
    }
    return v;
  };
  if (alpha.empty()) throw ParseError(ErrorKind::EmptyInput, "no alpha values", lineno);
  return {to_vec(alpha, "alpha"), to_vec(beta, "beta")};
}

void write_fit_report(std::ostream& os, const FitReport& rep) {
  const BipartiteGraph& g = rep.graph;
  const DegreeSequence ds = degrees(g);
  const FitResult& fr = rep.result;
  const bool have_inf = rep.inference.has_value() && fr.exists();

  os << "# affnet fit report\n[model]\n";
  os << "events = " << g.m() << "\nactors = " << g.n() << "\nedges = " << g.edge_count() << '\n';
  os << "input_events = " << rep.original_m << "\ninput_actors = " << rep.original_n << '\n';
  os << "pruned_events = " << (rep.pruning ? rep.pruning->removed_events.size() : 0) << '\n';
  os << "pruned_actors = " << (rep.pruning ? rep.pruning->removed_actors.size() : 0) << '\n';
  os << "reference_actor = " << g.actor_name(g.n() - 1) << '\n';

  const FitConfig& c = rep.config;
  os << "[config]\nmethod = " << to_string(c.method) << "\ntol_score = " << full(c.tol_score)
     << "\ntol_step = " << full(c.tol_step) << "\nmax_iter = " << c.max_iter
     << "\ndivergence_threshold = " << full(c.divergence_threshold)
     << "\ninit = " << to_string(c.init) << '\n';
  if (rep.inference) os << "level = " << full(rep.inference->level) << '\n';

  os << "[diagnostics]\nexistence = " << to_string(fr.existence)
     << "\nconverged = " << (fr.converged ? "true" : "false") << "\niterations = " << fr.iterations
     << "\nfinal_score_norm = " << full(fr.final_score_norm) << "\nscore_trace =";
  for (double s : fr.score_trace) os << ' ' << full(s);
  os << '\n';
  if (!fr.boundary.ok()) {
    os << "boundary_events =";
    for (Index i : fr.boundary.events) os << ' ' << g.event_name(i);
    os << "\nboundary_actors =";
    for (Index j : fr.boundary.actors) os << ' ' << g.actor_name(j);
    os << '\n';
  }
  for (const auto& w : fr.warnings) os << "warning = " << w << '\n';

  auto by_degree = [](const DegreeVector& deg) {
    std::vector<Index> order(deg.size());
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return deg(a) > deg(b); });
    return order;
  };
  const auto event_order = by_degree(ds.d);
  const auto actor_order = by_degree(ds.b);

  auto human = [&](double est, const Interval& ci, double se, int digits) {
    return fixed(est, digits) + "[" + fixed(ci.lo, digits) + "," + fixed(ci.hi, digits) + "](" +
           fixed(se, digits) + ")";
  };

  os << "[events]\n# label\tdegree\testimate[ci_low,ci_high](se)\n";
  for (Index i : event_order) {
    os << g.event_name(i) << '\t' << ds.d(i) << '\t';
    if (have_inf) {
      const auto& inf = *rep.inference;
      os << human(inf.theta_hat.alpha(i), inf.rate_ci_alpha[i], inf.rate_se_alpha(i), 2);
    } else {
      os << "NA";
    }
    os << '\n';
  }
  os << "[actors]\n# label\tdegree\testimate[ci_low,ci_high](se)\n";
  for (Index j : actor_order) {
    os << g.actor_name(j) << '\t' << ds.b(j) << '\t';
    if (j == g.n() - 1) {
      os << (have_inf ? "0.000 (reference)" : "NA");
    } else if (have_inf) {
      const auto& inf = *rep.inference;
      os << human(inf.theta_hat.beta(j), inf.rate_ci_beta[j], inf.rate_se_beta(j), 3);
    } else {
      os << "NA";
    }
    os << '\n';
  }

  os << "[machine]\nside,index,label,degree,estimate,se,ci_low,ci_high,rate_se,rate_ci_low,"
        "rate_ci_high\n";
  auto machine_row = [&](const char* side, Index k, const std::string& label, Index degree,
                         bool reference) {
    os << side << ',' << k + 1 << ',' << csv_field(label) << ',' << degree << ',';
    if (!have_inf) {
      os << "NA,NA,NA,NA,NA,NA,NA\n";
      return;
    }
    const auto& inf = *rep.inference;
    if (reference) {
      os << "0,NA,NA,NA,NA,NA,NA\n";
      return;
    }
    const bool ev = side[0] == 'e';
    const double est = ev ? inf.theta_hat.alpha(k) : inf.theta_hat.beta(k);
    const Interval& ci = ev ? inf.ci_alpha[k] : inf.ci_beta[k];
    const Interval& rci = ev ? inf.rate_ci_alpha[k] : inf.rate_ci_beta[k];
    const double se = ev ? inf.se_alpha(k) : inf.se_beta(k);
    const double rse = ev ? inf.rate_se_alpha(k) : inf.rate_se_beta(k);
    os << full(est) << ',' << full(se) << ',' << full(ci.lo) << ',' << full(ci.hi) << ','
       << full(rse) << ',' << full(rci.lo) << ',' << full(rci.hi) << '\n';
  };
  for (Index i : event_order) machine_row("event", i, g.event_name(i), ds.d(i), false);
  for (Index j : actor_order)
    machine_row("actor", j, g.actor_name(j), ds.b(j), j == g.n() - 1);
}

}  // namespace affnet
