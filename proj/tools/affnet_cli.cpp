// affnet: fit, simulate and check the degree-parameterized bipartite graph
// model from the command line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "affnet/experiments.hpp"
#include "affnet/io.hpp"

namespace {

using namespace affnet;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitFailure = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::NonBinaryEntry:
    case ErrorKind::EmptyInput:
      return kExitInput;
    case ErrorKind::InvalidArgument:
    case ErrorKind::BadLevel:
    case ErrorKind::SameIndex:
    case ErrorKind::DimensionMismatch:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

/// Writes to the named file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long long v = std::stoll(item);
      if (v < 2) throw std::invalid_argument("size");
      out.push_back(Index(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad size '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "no sizes given");
  return out;
}

const std::map<std::string, FitMethod> kMethods{{"exact", FitMethod::NewtonExact},
                                                {"approx", FitMethod::NewtonApprox},
                                                {"fixed-point", FitMethod::FixedPoint}};
const std::map<std::string, InitKind> kInits{{"zeros", InitKind::Zeros},
                                             {"moment", InitKind::Moment}};

struct FitFlags {
  FitConfig cfg;
  std::string method = "approx";
  std::string init = "zeros";

  void add_to(CLI::App* app) {
    app->add_option("--method", method, "Solver: exact, approx or fixed-point")
        ->check(CLI::IsMember({"exact", "approx", "fixed-point"}));
    app->add_option("--tol", cfg.tol_score, "Tolerance on ||F(theta)||_inf")->capture_default_str();
    app->add_option("--tol-step", cfg.tol_step, "Tolerance on the step size")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "Iteration cap")->capture_default_str();
    app->add_option("--divergence", cfg.divergence_threshold, "Divergence threshold on ||theta||_inf")
        ->capture_default_str();
    app->add_option("--init", init, "Starting value: zeros or moment")
        ->check(CLI::IsMember({"zeros", "moment"}));
  }

  FitConfig resolve() const {
    FitConfig c = cfg;
    c.method = kMethods.at(method);
    c.init = kInits.at(init);
    return c;
  }
};

struct ScenarioFlags {
  Index m = 100;
  Index n = 200;
  std::string L = "0";

  void add_to(CLI::App* app) {
    app->add_option("--m", m, "Number of events")->capture_default_str();
    app->add_option("--n", n, "Number of actors")->capture_default_str();
    app->add_option("--L", L, "Ramp height: 0, loglog, sqrtlog, log or a number")
        ->capture_default_str();
  }

  Scenario resolve() const { return make_scenario(m, n, RampHeight::parse(L)); }
};

int run_fit(const std::string& input, const std::string& format, bool header, bool prune,
            const FitFlags& flags, double level, const std::string& out) {
  ParsedInput parsed = parse_input(input, parse_format(format), header);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';

  FitReport rep;
  rep.original_m = parsed.graph.m();
  rep.original_n = parsed.graph.n();
  if (prune) {
    rep.pruning = prune_zero_degree(parsed.graph);
    std::cerr << "pruned " << rep.pruning->removed_events.size() << " zero-degree events and "
              << rep.pruning->removed_actors.size() << " zero-degree actors\n";
    rep.graph = rep.pruning->graph;
  } else {
    rep.graph = std::move(parsed.graph);
  }
  rep.config = flags.resolve();
  rep.result = fit(rep.graph, rep.config);
  for (const auto& w : rep.result.warnings) std::cerr << "warning: " << w << '\n';
  if (rep.result.exists()) {
    rep.inference = infer(rep.result.theta_hat, level);
  } else {
    std::cerr << "MLE does not exist (" << to_string(rep.result.existence) << ")\n";
  }
  Output o(out);
  write_fit_report(o.stream(), rep);
  return 0;
}

int run_sample(const ScenarioFlags& sf, const std::string& theta_path, std::uint64_t seed,
               const std::string& format, const std::string& out) {
  Parameters theta;
  if (!theta_path.empty()) {
    std::ifstream in(theta_path);
    if (!in) throw ParseError(ErrorKind::ParseError, "cannot open '" + theta_path + "'", 0);
    theta = read_theta(in);
    if (theta.n() < 2) throw Error(ErrorKind::InvalidArgument, "theta file needs beta values");
  } else {
    theta = sf.resolve().theta_star;
  }
  const BipartiteGraph g = sample_graph(theta, seed);
  {
    Output o(out);
    if (parse_format(format) == InputFormat::DenseMatrix) {
      write_dense(o.stream(), g);
    } else {
      write_edge_list(o.stream(), g);
    }
  }
  if (out != "-") {
    Output sidecar(with_suffix(out, ".theta"));
    write_theta(sidecar.stream(), theta);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-parameterized bipartite graph model: fitting, inference, simulation"};
  app.set_config("--config", "", "Read flags from a TOML/INI file");
  app.require_subcommand(1);

  int threads = 0;
  std::uint64_t seed = 7;
  std::string out = "-";
  double level = 0.95;

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit the model to an observed affiliation network");
  std::string input, format = "edge_list";
  bool header = false, prune = true;
  FitFlags fit_flags;
  fit_cmd->add_option("--input", input, "Input file")->required();
  fit_cmd->add_option("--format", format, "edge_list or dense_matrix")->capture_default_str();
  fit_cmd->add_flag("--header", header, "Skip the first non-comment line of an edge list");
  fit_cmd->add_flag("--prune,!--no-prune", prune, "Drop zero-degree events/actors first (default on)");
  fit_cmd->add_option("--level", level, "Confidence level")->capture_default_str();
  fit_cmd->add_option("--threads", threads, "Worker threads (unused by a single fit)");
  fit_cmd->add_option("--out", out, "Report path ('-' for stdout)");
  fit_flags.add_to(fit_cmd);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw a network from a scenario or a theta file");
  ScenarioFlags sample_sc;
  std::string theta_path, sample_format = "dense_matrix";
  sample_sc.add_to(sample_cmd);
  sample_cmd->add_option("--theta", theta_path, "CSV of side,index,value (overrides --m/--n/--L)");
  sample_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample_cmd->add_option("--format", sample_format, "Output format")->capture_default_str();
  sample_cmd->add_option("--out", out, "Graph path; true theta goes to <out>.theta.<ext>")
      ->required();

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "Monte-Carlo coverage of same-side contrasts");
  ScenarioFlags cov_sc;
  FitFlags cov_fit;
  std::string pairs = "a1:2";
  Index reps = 1000;
  cov_sc.add_to(cov_cmd);
  cov_fit.add_to(cov_cmd);
  cov_cmd->add_option("--pairs", pairs, "Comma list like a1:2,b100:101 (1-based)")
      ->capture_default_str();
  cov_cmd->add_option("--reps", reps, "Replications")->capture_default_str();
  cov_cmd->add_option("--seed", seed, "Base seed; replication r uses seed + r")->capture_default_str();
  cov_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  cov_cmd->add_option("--level", level, "Confidence level")->capture_default_str();
  cov_cmd->add_option("--out", out, "CSV path ('-' for stdout)");

  // qq
  auto* qq_cmd = app.add_subcommand("qq", "Export QQ pairs of standardized estimates");
  ScenarioFlags qq_sc;
  FitFlags qq_fit;
  std::vector<std::string> targets{"xi:1:2"};
  Index qq_reps = 1000;
  qq_sc.add_to(qq_cmd);
  qq_fit.add_to(qq_cmd);
  qq_cmd->add_option("--target", targets, "xi:i:j, eta:i:j, alpha:i or beta:j (repeatable)")
      ->capture_default_str();
  qq_cmd->add_option("--reps", qq_reps, "Replications")->capture_default_str();
  qq_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
  qq_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  qq_cmd->add_option("--out", out, "CSV path; several targets get a _<target> suffix");

  // check-approx
  auto* chk_cmd = app.add_subcommand("check-approx", "Tabulate max|V^-1 - S| over a size grid");
  std::string sizes = "10,20,40,80", chk_L = "0";
  double aspect = 1.0;
  chk_cmd->add_option("--sizes", sizes, "Comma list of m values")->capture_default_str();
  chk_cmd->add_option("--aspect", aspect, "n = round(aspect * m)")->capture_default_str();
  chk_cmd->add_option("--L", chk_L, "Ramp height used to build theta")->capture_default_str();
  chk_cmd->add_option("--out", out, "CSV path ('-' for stdout)");

  // consistency
  auto* con_cmd = app.add_subcommand("consistency", "Mean and 90th percentile of ||theta_hat - theta*||_inf");
  std::string con_sizes = "50,100,200", con_L = "0";
  FitFlags con_fit;
  Index con_reps = 200;
  con_cmd->add_option("--sizes", con_sizes, "Comma list of m = n values")->capture_default_str();
  con_cmd->add_option("--L", con_L, "Ramp height")->capture_default_str();
  con_cmd->add_option("--reps", con_reps, "Replications per size")->capture_default_str();
  con_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
  con_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  con_cmd->add_option("--out", out, "CSV path ('-' for stdout)");
  con_fit.add_to(con_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fit_cmd) return run_fit(input, format, header, prune, fit_flags, level, out);
    if (*sample_cmd) return run_sample(sample_sc, theta_path, seed, sample_format, out);
    if (*cov_cmd) {
      ExperimentOptions opts{cov_fit.resolve(), level, threads};
      const auto rep = run_coverage(cov_sc.resolve(), ContrastPair::parse_list(pairs), reps, seed, opts);
      Output o(out);
      write_coverage_csv(o.stream(), rep);
      return 0;
    }
    if (*qq_cmd) {
      std::vector<QQTarget> parsed;
      for (const auto& t : targets) parsed.push_back(QQTarget::parse(t));
      ExperimentOptions opts{qq_fit.resolve(), 0.95, threads};
      const auto exports = run_qq(qq_sc.resolve(), parsed, qq_reps, seed, opts);
      for (const auto& q : exports) {
        const std::string path =
            exports.size() > 1 && out != "-" ? with_suffix(out, "_" + q.target.label()) : out;
        Output o(path);
        write_qq_csv(o.stream(), q);
        std::cerr << q.target.label() << ": " << q.empirical.size() << " replications, "
                  << q.nonexistent << " without MLE";
        if (!q.empirical.empty()) std::cerr << ", KS = " << ks_statistic(q.empirical);
        std::cerr << '\n';
      }
      return 0;
    }
    if (*chk_cmd) {
      const RampHeight h = RampHeight::parse(chk_L);
      Output o(out);
      o.stream() << "m,n,q,Q,max_abs_err,err_times_mn,bound_ratio\n";
      for (Index m : parse_sizes(sizes)) {
        const Index n = std::max<Index>(2, Index(std::llround(aspect * double(m))));
        const FisherInfo<double> v = fisher_info(make_scenario(m, n, h).theta_star);
        const auto e = lemma1_error(v);
        o.stream() << m << ',' << n << ',' << e.q << ',' << e.Q << ',' << e.max_abs_err << ','
                   << e.max_abs_err * double(m) * double(n) << ',' << e.bound_ratio << '\n';
      }
      return 0;
    }
    if (*con_cmd) {
      std::vector<Scenario> scenarios;
      const RampHeight h = RampHeight::parse(con_L);
      for (Index s : parse_sizes(con_sizes)) scenarios.push_back(make_scenario(s, s, h));
      ExperimentOptions opts{con_fit.resolve(), 0.95, threads};
      Output o(out);
      write_consistency_csv(o.stream(), run_consistency(scenarios, con_reps, seed, opts));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}
