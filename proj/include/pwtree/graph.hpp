#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pwtree/rational.hpp"

namespace pwtree {

using VertexId = std::uint32_t;

/// Unordered vertex pair stored with u < v. Ordering is lexicographic, which
/// is the tie-break order used everywhere an edge "id" is needed.
struct VertexPair {
  VertexId u = 0;
  VertexId v = 0;

  static VertexPair of(VertexId a, VertexId b) { return a < b ? VertexPair{a, b} : VertexPair{b, a}; }
  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Rational length;

  VertexPair pair() const { return VertexPair::of(u, v); }
};

/// Shortest-path distance: either a finite exact rational or infinity.
class Distance {
 public:
  Distance() = default;  // zero
  Distance(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  static Distance infinity() {
    Distance d;
    d.infinite_ = true;
    return d;
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// Finite value; throws InfiniteDistance when infinite.
  const Rational& value() const;
  std::string to_string() const { return infinite_ ? "inf" : value_.to_string(); }

  Distance& operator+=(const Distance& rhs);
  friend Distance operator+(Distance lhs, const Distance& rhs) { return lhs += rhs; }
  friend bool operator==(const Distance& a, const Distance& b);
  friend std::strong_ordering operator<=>(const Distance& a, const Distance& b);

 private:
  Rational value_;
  bool infinite_ = false;
};

/// A finite, loop-free, simple, undirected graph with exact non-negative edge
/// lengths. Immutable after `build`.
class MetricGraph {
 public:
  struct Incidence {
    std::size_t to;    // neighbor vertex index
    std::size_t edge;  // index into edges()
  };

  MetricGraph() = default;

  /// Validates and builds. Throws LoopEdge, DuplicateEdge, NegativeLength,
  /// UnknownEndpoint or DuplicateVertex.
  static MetricGraph build(std::vector<VertexId> vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  /// Sorted ascending.
  std::span<const VertexId> vertices() const noexcept { return vertices_; }
  /// Sorted by (u, v); u < v in each edge.
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_vertex(VertexId id) const;
  /// Dense index of a vertex id; throws UnknownVertex.
  std::size_t index(VertexId id) const;
  VertexId id(std::size_t index) const { return vertices_[index]; }

  std::span<const Incidence> neighbors(std::size_t index) const noexcept { return adjacency_[index]; }
  std::size_t degree(std::size_t index) const noexcept { return adjacency_[index].size(); }

  /// Edge index between two vertex indices, if present.
  std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;
  std::optional<Rational> length(VertexId u, VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;

  MetricGraph induced(std::span<const VertexId> subset) const;
  MetricGraph with_lengths(std::vector<Rational> lengths) const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  static std::uint64_t key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(a) << 32) | std::uint64_t(b);
  }

  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<VertexId, std::size_t> index_of_;
  std::unordered_map<std::uint64_t, std::size_t> edge_of_;
};

/// All-pairs distances, indexed by the vertex order of the source graph.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<VertexId> vertices, std::vector<Distance> cells);

  std::size_t size() const noexcept { return vertices_.size(); }
  std::span<const VertexId> vertices() const noexcept { return vertices_; }
  const Distance& at_index(std::size_t i, std::size_t j) const { return cells_[i * vertices_.size() + j]; }
  const Distance& at(VertexId u, VertexId v) const;

 private:
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, std::size_t> index_of_;
  std::vector<Distance> cells_;
};

MetricGraph build_metric_graph(std::vector<VertexId> vertices, std::vector<Edge> edges);

/// Single-source shortest paths (Dijkstra over exact distances), by vertex index.
std::vector<Distance> shortest_paths_from(const MetricGraph& g, std::size_t source);
DistanceMatrix shortest_path_metric(const MetricGraph& g);

/// Replaces every edge length by the shortest-path distance between its endpoints.
MetricGraph reduce_lengths(const MetricGraph& g);
bool is_reduced(const MetricGraph& g);

bool is_connected(const MetricGraph& g);
bool is_tree(const MetricGraph& g);

/// Kruskal on the induced subgraph; ties broken by (length, u, v).
/// Throws DisconnectedSubset.
std::vector<Edge> minimum_spanning_tree(const MetricGraph& g, std::span<const VertexId> subset);

/// Adds every missing edge inside `s` with length d_G. Throws InfiniteDistance.
MetricGraph complete_on_clique(const MetricGraph& g, std::span<const VertexId> s);

/// Distances from `source` in a tree by a single traversal (index based).
std::vector<Rational> tree_distances_from(const MetricGraph& tree, std::size_t source);

/// Connected components as sorted vertex-id lists, ordered by smallest id.
std::vector<std::vector<VertexId>> connected_components(const MetricGraph& g);

Rational total_length(std::span<const Edge> edges);

}  // namespace pwtree
