#include "affnet/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace affnet {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AllPruned: return "AllPruned";
    case ErrorKind::SingularAugmented: return "SingularAugmented";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NumericallySingular: return "NumericallySingular";
    case ErrorKind::SameIndex: return "SameIndex";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonBinaryEntry: return "NonBinaryEntry";
    case ErrorKind::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

namespace {

void check_labels(const std::vector<std::string>& labels, Index expected,
                  const char* side) {
  if (labels.empty()) return;
  if (static_cast<Index>(labels.size()) != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(side) + " label count " + std::to_string(labels.size()) +
                    " does not match dimension " + std::to_string(expected));
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("duplicate ") + side + " label '" + l + "'");
    }
  }
}

}  // namespace

BipartiteGraph::BipartiteGraph(AffiliationMatrix x,
                               std::vector<std::string> event_labels,
                               std::vector<std::string> actor_labels)
    : x_(std::move(x)),
      event_labels_(std::move(event_labels)),
      actor_labels_(std::move(actor_labels)) {
  for (Index j = 0; j < x_.cols(); ++j) {
    for (Index i = 0; i < x_.rows(); ++i) {
      if (x_(i, j) > 1) {
        throw Error(ErrorKind::NonBinaryEntry,
                    "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") is " + std::to_string(int(x_(i, j))));
      }
    }
  }
  check_labels(event_labels_, x_.rows(), "event");
  check_labels(actor_labels_, x_.cols(), "actor");
}

Index BipartiteGraph::edge_count() const {
  return x_.cast<Index>().sum();
}

std::string BipartiteGraph::event_name(Index i) const {
  return has_event_labels() ? event_labels_[i] : std::to_string(i + 1);
}

std::string BipartiteGraph::actor_name(Index j) const {
  return has_actor_labels() ? actor_labels_[j] : std::to_string(j + 1);
}

DegreeSequence degrees(const BipartiteGraph& g) {
  const auto xi = g.x().cast<Index>();
  return {xi.rowwise().sum(), xi.colwise().sum().transpose()};
}

PruneResult prune_zero_degree(const BipartiteGraph& g) {
  std::vector<Index> rows(g.m()), cols(g.n());
  for (Index i = 0; i < g.m(); ++i) rows[i] = i;
  for (Index j = 0; j < g.n(); ++j) cols[j] = j;

  PruneResult out;
  // Removing a column can empty a row and vice versa, so sweep until stable.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Index> next_rows;
    for (Index i : rows) {
      bool any = false;
      for (Index j : cols) any = any || g(i, j);
      if (any) {
        next_rows.push_back(i);
      } else {
        out.removed_events.push_back(i);
        changed = true;
      }
    }
    rows.swap(next_rows);
    std::vector<Index> next_cols;
    for (Index j : cols) {
      bool any = false;
      for (Index i : rows) any = any || g(i, j);
      if (any) {
        next_cols.push_back(j);
      } else {
        out.removed_actors.push_back(j);
        changed = true;
      }
    }
    cols.swap(next_cols);
  }
  if (rows.empty() || cols.empty()) {
    throw Error(ErrorKind::AllPruned, "every event or actor has zero degree");
  }
  std::sort(out.removed_events.begin(), out.removed_events.end());
  std::sort(out.removed_actors.begin(), out.removed_actors.end());

  AffiliationMatrix x(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) x(r, c) = g(rows[r], cols[c]);
  std::vector<std::string> el, al;
  if (g.has_event_labels())
    for (Index i : rows) el.push_back(g.event_labels()[i]);
  if (g.has_actor_labels())
    for (Index j : cols) al.push_back(g.actor_labels()[j]);

  out.graph = BipartiteGraph(std::move(x), std::move(el), std::move(al));
  out.kept_events = std::move(rows);
  out.kept_actors = std::move(cols);
  return out;
}

void check_dimensions(const BipartiteGraph& g, Index theta_m, Index theta_n) {
  if (g.m() != theta_m || g.n() != theta_n) {
    throw Error(ErrorKind::DimensionMismatch,
                "graph is " + std::to_string(g.m()) + "x" + std::to_string(g.n()) +
                    " but parameters describe " + std::to_string(theta_m) + "x" +
                    std::to_string(theta_n));
  }
}

}  // namespace affnet
