#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "affnet/io.hpp"
#include "affnet/sampler.hpp"
#include "oracles.hpp"

using namespace affnet;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

std::size_t line_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("dense input") {
  std::istringstream eye("1,0\n0,1\n");
  const auto r = parse_dense(eye);
  CHECK(r.graph.m() == 2);
  CHECK(r.graph(0, 0) == 1);
  CHECK(r.graph(0, 1) == 0);
  CHECK(r.graph(1, 1) == 1);

  std::istringstream blanks("\n1, 1 ,0\n\n0,0,1\r\n");
  CHECK(parse_dense(blanks).graph.n() == 3);

  auto parse = [](const char* text) {
    return [text] {
      std::istringstream is(text);
      parse_dense(is);
    };
  };
  CHECK(kind_of(parse("1,0\n0,2\n")) == ErrorKind::NonBinaryEntry);
  CHECK(line_of(parse("1,0\n0,2\n")) == 2);
  CHECK(kind_of(parse("1,0\n0,x\n")) == ErrorKind::ParseError);
  CHECK(kind_of(parse("1,0\n0\n")) == ErrorKind::ParseError);
  CHECK(line_of(parse("1,0\n\n0\n")) == 3);
  CHECK(kind_of(parse("\n\n")) == ErrorKind::EmptyInput);
}

TEST_CASE("edge-list input") {
  std::istringstream tsv("e1\ta1\ne1\ta2\ne2\ta1\n");
  const auto r = parse_edge_list(tsv);
  AffiliationMatrix expect(2, 2);
  expect << 1, 1, 1, 0;
  CHECK(r.graph.x() == expect);
  CHECK(r.graph.event_name(1) == "e2");
  CHECK(r.graph.actor_name(1) == "a2");
  CHECK(r.warnings.empty());

  std::istringstream csv("event,actor\n# comment\nSpanish.Club,122662\nChess.Club,122662\n"
                         "Spanish.Club,122662\nSpanish.Club,889103\n");
  const auto c = parse_edge_list(csv, true);
  CHECK(c.graph.m() == 2);
  CHECK(c.graph.n() == 2);
  CHECK(c.warnings.size() == 1);
  CHECK(degrees(c.graph).d(0) == 2);

  auto parse = [](const char* text) {
    return [text] {
      std::istringstream is(text);
      parse_edge_list(is);
    };
  };
  CHECK(kind_of(parse("e1\ta1\ne2\n")) == ErrorKind::ParseError);
  CHECK(line_of(parse("e1\ta1\ne2\n")) == 2);
  CHECK(kind_of(parse("# only comments\n")) == ErrorKind::EmptyInput);
  CHECK(kind_of([] { parse_input("/nonexistent/file", InputFormat::EdgeList); }) ==
        ErrorKind::ParseError);
}

TEST_CASE("format names") {
  CHECK(parse_format("edge_list") == InputFormat::EdgeList);
  CHECK(parse_format("dense") == InputFormat::DenseMatrix);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("round trips") {
  const Scenario s = make_scenario(12, 17, RampHeight::parse("loglog"));
  const BipartiteGraph g = sample_graph(s.theta_star, 42);

  std::stringstream dense;
  write_dense(dense, g);
  CHECK(parse_dense(dense).graph == g);

  // Edge lists drop isolated nodes, so compare after pruning.
  std::stringstream edges;
  write_edge_list(edges, g);
  const auto back = parse_edge_list(edges).graph;
  CHECK(back.edge_count() == g.edge_count());
  const auto pr = prune_zero_degree(g);
  CHECK(degrees(back).d.sum() == degrees(pr.graph).d.sum());

  std::stringstream theta;
  write_theta(theta, s.theta_star);
  const Parameters t = read_theta(theta);
  CHECK(t.stacked() == s.theta_star.stacked());

  const std::string path = "io_roundtrip_tmp.csv";
  {
    std::ofstream f(path);
    write_dense(f, g);
  }
  CHECK(parse_input(path, InputFormat::DenseMatrix).graph == g);
  std::remove(path.c_str());
}

TEST_CASE("theta parsing errors") {
  auto parse = [](const char* text) {
    return [text] {
      std::istringstream is(text);
      read_theta(is);
    };
  };
  CHECK(kind_of(parse("alpha,1,0.5\nalpha,3,1\n")) == ErrorKind::ParseError);
  CHECK(kind_of(parse("gamma,1,0.5\n")) == ErrorKind::ParseError);
  CHECK(kind_of(parse("alpha,1,abc\n")) == ErrorKind::ParseError);
  CHECK(kind_of(parse("alpha,1,0.5\nalpha,1,0.5\n")) == ErrorKind::ParseError);
  CHECK(kind_of(parse("beta,1,0.5\n")) == ErrorKind::EmptyInput);
}

TEST_CASE("fit report") {
  std::istringstream in(
      "e1\ta1\ne1\ta2\ne1\ta3\ne2\ta2\ne2\ta4\ne3\ta3\ne3\ta4\ne3\ta1\ne4\ta4\ne4\ta1\n");
  BipartiteGraph g = parse_edge_list(in).graph;
  FitReport rep{g, std::nullopt, g.m(), g.n(), FitConfig{}, fit(g), std::nullopt};
  REQUIRE(rep.result.exists());
  rep.inference = infer(rep.result.theta_hat);

  std::ostringstream a, b;
  write_fit_report(a, rep);
  write_fit_report(b, rep);
  const std::string text = a.str();
  CHECK(text == b.str());
  for (const char* section : {"[model]", "[config]", "[diagnostics]", "[events]", "[actors]", "[machine]"})
    CHECK(text.find(section) != std::string::npos);
  CHECK(text.find("existence = exists") != std::string::npos);
  CHECK(text.find("(reference)") != std::string::npos);

  // Rows are sorted by degree, highest first.
  const auto ev = text.find("[events]");
  const auto first_row = text.find('\n', text.find('\n', ev) + 1) + 1;
  CHECK(text.substr(first_row, 3) == "e1\t");

  // Human table layout: estimate[lo,hi](se).
  const double est = rep.inference->theta_hat.alpha(0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f[", est);
  CHECK(text.find(std::string("e1\t3\t") + buf) != std::string::npos);

  // Non-existence is a result: the report is still written.
  AffiliationMatrix sat(2, 2);
  sat << 1, 1, 1, 0;
  const BipartiteGraph gs(sat);
  FitReport bad{gs, std::nullopt, 2, 2, FitConfig{}, fit(gs), std::nullopt};
  std::ostringstream c;
  write_fit_report(c, bad);
  CHECK(c.str().find("existence = boundary_degree") != std::string::npos);
  CHECK(c.str().find("NA") != std::string::npos);
}
