#include "affnet/sampler.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "affnet/likelihood.hpp"

namespace affnet {

RampHeight RampHeight::parse(const std::string& text) {
  if (text == "0" || text == "zero") return {Kind::Zero, 0.0};
  if (text == "loglog") return {Kind::LogLog, 0.0};
  if (text == "sqrtlog") return {Kind::SqrtLog, 0.0};
  if (text == "log") return {Kind::Log, 0.0};
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "unrecognised ramp height '" + text + "'");
  }
  return {Kind::Value, v};
}

double RampHeight::resolve(Index size) const {
  const double s = double(size);
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::LogLog: return std::log(std::log(s));
    case Kind::SqrtLog: return std::sqrt(std::log(s));
    case Kind::Log: return std::log(s);
    case Kind::Value: return value;
  }
  return 0.0;
}

std::string RampHeight::label() const {
  switch (kind) {
    case Kind::Zero: return "0";
    case Kind::LogLog: return "loglog";
    case Kind::SqrtLog: return "sqrtlog";
    case Kind::Log: return "log";
    case Kind::Value: break;
  }
  std::ostringstream os;
  os << value;
  return os.str();
}

Scenario make_scenario(Index m, Index n, RampHeight height) {
  if (m < 2 || n < 2) throw Error(ErrorKind::InvalidArgument, "scenario needs m, n >= 2");
  Scenario s;
  s.m = m;
  s.n = n;
  s.height = height;
  s.L_alpha = height.resolve(m);
  s.L_beta = height.resolve(n);
  s.theta_star = Parameters::Zero(m, n);
  for (Index i = 0; i < m; ++i) s.theta_star.alpha(i) = double(m - 1 - i) * s.L_alpha / double(m - 1);
  for (Index j = 0; j + 1 < n; ++j) s.theta_star.beta(j) = double(n - 1 - j) * s.L_beta / double(n - 1);
  return s;
}

BipartiteGraph sample_graph(const Parameters& theta, std::uint64_t seed) {
  if (!theta.all_finite()) throw Error(ErrorKind::InvalidArgument, "parameters must be finite");
  Rng rng(seed);
  const Index m = theta.m(), n = theta.n();
  AffiliationMatrix x(m, n);
  for (Index j = 0; j < n; ++j) {
    const double bj = theta.beta_at(j);
    for (Index i = 0; i < m; ++i) x(i, j) = rng.uniform() < edge_probability(theta.alpha(i), bj);
  }
  return BipartiteGraph(std::move(x));
}

}  // namespace affnet
