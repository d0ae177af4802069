#pragma once

#include <cstddef>
#include <vector>

#include "pwtree/graph.hpp"

namespace pwtree {

struct PathDecomposition {
  std::vector<std::vector<VertexId>> bags;

  /// Largest bag size minus one; -1 for an empty decomposition.
  int width() const;
  friend bool operator==(const PathDecomposition&, const PathDecomposition&) = default;
};

/// Incremental construction history: start from a k-window, then repeatedly
/// add a fresh vertex joined to the whole current window and keep k of the
/// k+1 vertices as the next window.
struct LinearCompositionSequence {
  struct Step {
    VertexId added = 0;
    std::vector<VertexId> window;
    friend bool operator==(const Step&, const Step&) = default;
  };

  int k = 0;
  std::vector<VertexId> initial;
  std::vector<Step> steps;

  /// Throws InvalidComposition on any structural violation.
  void validate() const;
  /// Initial window followed by the added vertices, in introduction order.
  std::vector<VertexId> vertices() const;
  /// Window before step `i` (0-based); window(0) is the initial window.
  const std::vector<VertexId>& window(std::size_t i) const { return i == 0 ? initial : steps[i - 1].window; }

  friend bool operator==(const LinearCompositionSequence&, const LinearCompositionSequence&) = default;
};

/// Returns the width. Checks vertex coverage, then intervals, then edges;
/// throws UncoveredVertex, BrokenInterval, UncoveredEdge or UnknownVertex.
int validate_path_decomposition(const MetricGraph& g, const PathDecomposition& pd);

PathDecomposition composition_to_decomposition(const LinearCompositionSequence& seq);

/// Every bag gets exactly width+1 vertices and consecutive bags differ by one
/// swap. Idempotent.
PathDecomposition normalize_decomposition(const PathDecomposition& pd, const MetricGraph& g);

LinearCompositionSequence decomposition_to_composition(const PathDecomposition& pd, const MetricGraph& g);

/// Edges of the composed graph: a clique on the initial window plus, for each
/// step, the new vertex joined to the window it was added to.
std::vector<VertexPair> composed_edges(const LinearCompositionSequence& seq);

/// The composed graph with every edge length set to d_G. `g` must live on the
/// same vertex set and use only composed edges (NotASubgraph); pairs in
/// different components of `g` raise InfiniteDistance.
MetricGraph composed_metric(const LinearCompositionSequence& seq, const MetricGraph& g);

constexpr std::size_t kExactPathwidthLimit = 20;

/// Vertex-separation dynamic program over vertex subsets. Throws TooLarge.
int exact_pathwidth(const MetricGraph& g, std::size_t limit = kExactPathwidthLimit);
PathDecomposition exact_path_decomposition(const MetricGraph& g, std::size_t limit = kExactPathwidthLimit);

/// Linear-time-ish pathwidth of a tree by rooted label propagation. Throws NotATree.
int tree_pathwidth(const MetricGraph& t);

struct PeeledPath {
  std::vector<VertexId> path;
  std::vector<MetricGraph> components;
};

/// A simple path whose removal leaves only components of pathwidth at most
/// pw(t) - 1. Throws NotATree, or PathwidthTooLow when pw(t) <= 1.
PeeledPath peel_path(const MetricGraph& t);

/// Optimal-width path decomposition of a tree, built by recursive peeling.
PathDecomposition tree_path_decomposition(const MetricGraph& t);

}  // namespace pwtree
