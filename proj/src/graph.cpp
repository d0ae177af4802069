#include "pwtree/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "pwtree/error.hpp"

namespace pwtree {

// ---- Distance ---------------------------------------------------------------

const Rational& Distance::value() const {
  if (infinite_) throw Error(ErrorKind::InfiniteDistance, "distance is infinite");
  return value_;
}

Distance& Distance::operator+=(const Distance& rhs) {
  if (infinite_ || rhs.infinite_) {
    infinite_ = true;
    value_ = Rational();
  } else {
    value_ += rhs.value_;
  }
  return *this;
}

bool operator==(const Distance& a, const Distance& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Distance& a, const Distance& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.value_ <=> b.value_;
}

// ---- MetricGraph ------------------------------------------------------------

MetricGraph MetricGraph::build(std::vector<VertexId> vertices, std::vector<Edge> edges) {
  MetricGraph g;
  std::sort(vertices.begin(), vertices.end());
  if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
    throw Error(ErrorKind::DuplicateVertex, "vertex " + std::to_string(*dup) + " listed twice");
  g.vertices_ = std::move(vertices);
  g.index_of_.reserve(g.vertices_.size());
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) g.index_of_.emplace(g.vertices_[i], i);

  for (auto& e : edges) {
    if (e.u == e.v) throw Error(ErrorKind::LoopEdge, "loop at vertex " + std::to_string(e.u));
    if (e.length.sign() < 0)
      throw Error(ErrorKind::NegativeLength, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                                  ") has length " + e.length.to_string());
    for (VertexId x : {e.u, e.v})
      if (!g.index_of_.contains(x)) throw Error(ErrorKind::UnknownEndpoint, "endpoint " + std::to_string(x));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.pair() < b.pair(); });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].pair() == edges[i - 1].pair())
      throw Error(ErrorKind::DuplicateEdge,
                  "edge (" + std::to_string(edges[i].u) + "," + std::to_string(edges[i].v) + ") given twice");
  g.edges_ = std::move(edges);

  g.adjacency_.assign(g.vertices_.size(), {});
  g.edge_of_.reserve(g.edges_.size() * 2);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    std::size_t a = g.index_of_.at(g.edges_[i].u);
    std::size_t b = g.index_of_.at(g.edges_[i].v);
    g.adjacency_[a].push_back({b, i});
    g.adjacency_[b].push_back({a, i});
    g.edge_of_.emplace(key(a, b), i);
  }
  return g;
}

bool MetricGraph::has_vertex(VertexId id) const { return index_of_.contains(id); }

std::size_t MetricGraph::index(VertexId id) const {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(id));
  return it->second;
}

std::optional<std::size_t> MetricGraph::edge_between(std::size_t a, std::size_t b) const {
  auto it = edge_of_.find(key(a, b));
  if (it == edge_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<Rational> MetricGraph::length(VertexId u, VertexId v) const {
  auto iu = index_of_.find(u);
  auto iv = index_of_.find(v);
  if (iu == index_of_.end() || iv == index_of_.end()) return std::nullopt;
  auto e = edge_between(iu->second, iv->second);
  if (!e) return std::nullopt;
  return edges_[*e].length;
}

bool MetricGraph::has_edge(VertexId u, VertexId v) const {
  auto iu = index_of_.find(u);
  auto iv = index_of_.find(v);
  return iu != index_of_.end() && iv != index_of_.end() && edge_between(iu->second, iv->second).has_value();
}

MetricGraph MetricGraph::induced(std::span<const VertexId> subset) const {
  std::vector<VertexId> vs(subset.begin(), subset.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<char> in(vertices_.size(), 0);
  for (VertexId v : vs) in[index(v)] = 1;
  std::vector<Edge> es;
  for (const auto& e : edges_)
    if (in[index_of_.at(e.u)] && in[index_of_.at(e.v)]) es.push_back(e);
  return build(std::move(vs), std::move(es));
}

MetricGraph MetricGraph::with_lengths(std::vector<Rational> lengths) const {
  std::vector<Edge> es = edges_;
  for (std::size_t i = 0; i < es.size(); ++i) es[i].length = std::move(lengths[i]);
  return build(vertices_, std::move(es));
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices_ != b.vertices_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i)
    if (a.edges_[i].pair() != b.edges_[i].pair() || a.edges_[i].length != b.edges_[i].length) return false;
  return true;
}

// ---- DistanceMatrix ---------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::vector<VertexId> vertices, std::vector<Distance> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_of_.emplace(vertices_[i], i);
}

const Distance& DistanceMatrix::at(VertexId u, VertexId v) const {
  auto iu = index_of_.find(u);
  auto iv = index_of_.find(v);
  if (iu == index_of_.end() || iv == index_of_.end())
    throw Error(ErrorKind::UnknownVertex, "distance query for unknown vertex");
  return at_index(iu->second, iv->second);
}

// ---- operations -------------------------------------------------------------

MetricGraph build_metric_graph(std::vector<VertexId> vertices, std::vector<Edge> edges) {
  return MetricGraph::build(std::move(vertices), std::move(edges));
}

std::vector<Distance> shortest_paths_from(const MetricGraph& g, std::size_t source) {
  const std::size_t n = g.num_vertices();
  std::vector<Distance> dist(n, Distance::infinity());
  std::vector<char> done(n, 0);
  // Exact keys: a std::set doubles as a decrease-key priority queue.
  std::set<std::pair<Rational, std::size_t>> frontier;
  dist[source] = Distance(Rational(0));
  frontier.emplace(Rational(0), source);
  while (!frontier.empty()) {
    auto [d, x] = *frontier.begin();
    frontier.erase(frontier.begin());
    done[x] = 1;
    for (const auto& inc : g.neighbors(x)) {
      if (done[inc.to]) continue;
      Rational cand = d + g.edges()[inc.edge].length;
      if (dist[inc.to].is_infinite() || cand < dist[inc.to].value()) {
        if (dist[inc.to].is_finite()) frontier.erase({dist[inc.to].value(), inc.to});
        dist[inc.to] = Distance(cand);
        frontier.emplace(std::move(cand), inc.to);
      }
    }
  }
  return dist;
}

DistanceMatrix shortest_path_metric(const MetricGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<Distance> cells;
  cells.reserve(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    auto row = shortest_paths_from(g, s);
    for (auto& d : row) cells.push_back(std::move(d));
  }
  return DistanceMatrix(std::vector<VertexId>(g.vertices().begin(), g.vertices().end()), std::move(cells));
}

MetricGraph reduce_lengths(const MetricGraph& g) {
  std::vector<Rational> lengths;
  lengths.reserve(g.num_edges());
  // One Dijkstra per distinct left endpoint; edges are sorted by u.
  std::size_t current = g.num_vertices();
  std::vector<Distance> row;
  for (const auto& e : g.edges()) {
    std::size_t iu = g.index(e.u);
    if (iu != current) {
      row = shortest_paths_from(g, iu);
      current = iu;
    }
    lengths.push_back(row[g.index(e.v)].value());
  }
  return g.with_lengths(std::move(lengths));
}

bool is_reduced(const MetricGraph& g) { return reduce_lengths(g) == g; }

bool is_connected(const MetricGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (const auto& inc : g.neighbors(x))
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        ++count;
        stack.push_back(inc.to);
      }
  }
  return count == n;
}

bool is_tree(const MetricGraph& g) {
  return g.num_vertices() >= 1 && g.num_edges() + 1 == g.num_vertices() && is_connected(g);
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<Edge> minimum_spanning_tree(const MetricGraph& g, std::span<const VertexId> subset) {
  MetricGraph sub = g.induced(subset);
  std::vector<const Edge*> order;
  order.reserve(sub.num_edges());
  for (const auto& e : sub.edges()) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) {
    if (a->length != b->length) return a->length < b->length;
    return a->pair() < b->pair();
  });
  DisjointSets sets(sub.num_vertices());
  std::vector<Edge> out;
  for (const Edge* e : order)
    if (sets.unite(sub.index(e->u), sub.index(e->v))) out.push_back(*e);
  if (sub.num_vertices() > 0 && out.size() + 1 != sub.num_vertices())
    throw Error(ErrorKind::DisconnectedSubset, "subset does not induce a connected subgraph");
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.pair() < b.pair(); });
  return out;
}

MetricGraph complete_on_clique(const MetricGraph& g, std::span<const VertexId> s) {
  std::vector<VertexId> members(s.begin(), s.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto row = shortest_paths_from(g, g.index(members[i]));
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (g.has_edge(members[i], members[j])) continue;
      const Distance& d = row[g.index(members[j])];
      if (d.is_infinite())
        throw Error(ErrorKind::InfiniteDistance, "vertices " + std::to_string(members[i]) + " and " +
                                                     std::to_string(members[j]) + " are in different components");
      edges.push_back({members[i], members[j], d.value()});
    }
  }
  return MetricGraph::build(std::vector<VertexId>(g.vertices().begin(), g.vertices().end()), std::move(edges));
}

std::vector<Rational> tree_distances_from(const MetricGraph& tree, std::size_t source) {
  const std::size_t n = tree.num_vertices();
  std::vector<Rational> dist(n);
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> stack{source};
  parent[source] = source;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (const auto& inc : tree.neighbors(x)) {
      if (parent[inc.to] != n) continue;
      parent[inc.to] = x;
      dist[inc.to] = dist[x] + tree.edges()[inc.edge].length;
      stack.push_back(inc.to);
    }
  }
  return dist;
}

std::vector<std::vector<VertexId>> connected_components(const MetricGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<VertexId>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<VertexId> comp;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      comp.push_back(g.id(x));
      for (const auto& inc : g.neighbors(x))
        if (!seen[inc.to]) {
          seen[inc.to] = 1;
          stack.push_back(inc.to);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Rational total_length(std::span<const Edge> edges) {
  Rational sum;
  for (const auto& e : edges) sum += e.length;
  return sum;
}

}  // namespace pwtree
