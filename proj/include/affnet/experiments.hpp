#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "affnet/inference.hpp"
#include "affnet/sampler.hpp"
#include "affnet/solver.hpp"

namespace affnet {

/// A same-side pair (i, j), stored 0-based. Text form is 1-based:
/// "a1:2" / "alpha:1:2" for events, "b1:2" / "beta:1:2" for actors.
struct ContrastPair {
  Side side = Side::Event;
  Index i = 0;
  Index j = 1;

  static ContrastPair parse(const std::string& text);
  static std::vector<ContrastPair> parse_list(const std::string& text);
  std::string label() const;
};

struct ExperimentOptions {
  FitConfig fit;
  double level = 0.95;
  int threads = 0;  // 0 = hardware concurrency
};

struct PairCoverage {
  ContrastPair pair;
  double coverage_pct = 0.0;
  double mean_ci_length = 0.0;     // hi - lo
  double mean_ci_halfwidth = 0.0;  // z * se
  Index replications_used = 0;
};

/// Coverage is tallied only over replications in which the MLE exists; the
/// non-existence frequency is reported alongside.
struct CoverageReport {
  Scenario scenario;
  double level = 0.95;
  std::uint64_t seed = 0;
  FitMethod method = FitMethod::NewtonApprox;
  Index total_replications = 0;
  Index nonexistent = 0;
  double nonexistence_pct = 0.0;
  std::vector<PairCoverage> pairs;
};

CoverageReport run_coverage(const Scenario& scenario, const std::vector<ContrastPair>& pairs,
                            Index replications, std::uint64_t seed,
                            const ExperimentOptions& opts = {});

struct QQTarget {
  enum class Kind { Xi, Eta, Single };

  Kind kind = Kind::Xi;
  Side side = Side::Event;
  Index i = 0;
  Index j = 1;

  /// "xi:1:2", "eta:1:2", "alpha:3", "beta:5" (1-based).
  static QQTarget parse(const std::string& text);
  std::string label() const;
};

struct QQExport {
  QQTarget target;
  std::vector<double> empirical;    // sorted standardized statistics
  std::vector<double> theoretical;  // standard normal at (k - 0.5) / N
  Index nonexistent = 0;
};

std::vector<QQExport> run_qq(const Scenario& scenario, const std::vector<QQTarget>& targets,
                             Index replications, std::uint64_t seed,
                             const ExperimentOptions& opts = {});

struct ConsistencyRow {
  Index m = 0;
  Index n = 0;
  double mean_error = 0.0;  // mean of ||theta_hat - theta*||_inf
  double p90_error = 0.0;
  Index used = 0;
  Index nonexistent = 0;
};

std::vector<ConsistencyRow> run_consistency(const std::vector<Scenario>& scenarios,
                                            Index replications, std::uint64_t seed,
                                            const ExperimentOptions& opts = {});

/// One-sample Kolmogorov-Smirnov distance to the standard normal.
double ks_statistic(std::vector<double> sample);

void write_coverage_csv(std::ostream& os, const CoverageReport& report);
void write_qq_csv(std::ostream& os, const QQExport& qq);
void write_consistency_csv(std::ostream& os, const std::vector<ConsistencyRow>& rows);

/// Runs body(k) for k in [0, count) on `threads` workers. Each k must write
/// only its own output slot; reductions happen afterwards in index order.
template <typename Body>
void parallel_for(Index count, int threads, Body&& body);

int resolve_threads(int requested);

}  // namespace affnet

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace affnet {

template <typename Body>
void parallel_for(Index count, int threads, Body&& body) {
  const int workers = std::max(1, std::min<int>(resolve_threads(threads), int(count)));
  if (workers == 1) {
    for (Index k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (Index k; (k = next.fetch_add(1)) < count;) {
          try {
            body(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(count);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace affnet
