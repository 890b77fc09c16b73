#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affnet/graph.hpp"
#include "affnet/inference.hpp"
#include "affnet/solver.hpp"

namespace affnet {

enum class InputFormat { EdgeList, DenseMatrix };

InputFormat parse_format(const std::string& text);

struct ParsedInput {
  BipartiteGraph graph;
  std::vector<std::string> warnings;
};

/// Dense: one event per line, comma-separated 0/1 entries.
/// Edge list: "event<TAB>actor" or "event,actor" per line; indices follow
/// first appearance, '#' lines and blank lines are skipped, duplicate pairs
/// collapse with a warning.
ParsedInput parse_input(const std::string& path, InputFormat format, bool has_header = false);
ParsedInput parse_dense(std::istream& is);
ParsedInput parse_edge_list(std::istream& is, bool has_header = false);

void write_dense(std::ostream& os, const BipartiteGraph& g);
void write_edge_list(std::ostream& os, const BipartiteGraph& g);

/// "side,index,value" rows, 1-based, beta_n omitted.
void write_theta(std::ostream& os, const Parameters& theta);
Parameters read_theta(std::istream& is);

struct FitReport {
  BipartiteGraph graph;  // the graph that was fitted (after pruning)
  std::optional<PruneResult> pruning;
  Index original_m = 0;
  Index original_n = 0;
  FitConfig config;
  FitResult result;
  std::optional<InferenceResult> inference;
};

/// Sectioned text report. The [events]/[actors] tables use the
/// "estimate[lo,hi](se)" layout with se = v_kk^{-1/2}, sorted by degree
/// (descending, ties by index); [machine] repeats everything at full
/// precision, including the full plug-in standard errors.
void write_fit_report(std::ostream& os, const FitReport& report);

}  // namespace affnet
