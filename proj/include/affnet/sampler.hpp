#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "affnet/graph.hpp"

namespace affnet {

/// Endpoint L of the linear parameter ramps. The named kinds are resolved
/// against m for alpha and against n for beta.
struct RampHeight {
  enum class Kind { Zero, LogLog, SqrtLog, Log, Value };

  Kind kind = Kind::Zero;
  double value = 0.0;  // used by Kind::Value

  /// Accepts 0, loglog, sqrtlog, log, or a number.
  static RampHeight parse(const std::string& text);
  double resolve(Index size) const;
  std::string label() const;
};

struct Scenario {
  Index m = 0;
  Index n = 0;
  RampHeight height;
  double L_alpha = 0.0;
  double L_beta = 0.0;
  Parameters theta_star;
};

/// alpha*_{i+1} = (m-1-i) L_alpha/(m-1), beta*_{j+1} = (n-1-j) L_beta/(n-1),
/// beta*_n = 0.
Scenario make_scenario(Index m, Index n, RampHeight height);

/// 64-bit Mersenne Twister (fully specified by the standard, so streams are
/// identical across platforms) with a hand-rolled 53-bit uniform in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Independent Bernoulli(logistic(alpha_i + beta_j)) entries, drawn column by
/// column from a single stream seeded with `seed`.
BipartiteGraph sample_graph(const Parameters& theta, std::uint64_t seed);

}  // namespace affnet
