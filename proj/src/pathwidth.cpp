#include "pwtree/pathwidth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

std::string pair_text(VertexId u, VertexId v) { return "(" + std::to_string(u) + "," + std::to_string(v) + ")"; }

std::vector<VertexId> sorted_unique(std::vector<VertexId> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

int PathDecomposition::width() const {
  int w = -1;
  for (const auto& bag : bags) w = std::max(w, static_cast<int>(sorted_unique(bag).size()) - 1);
  return w;
}

void LinearCompositionSequence::validate() const {
  if (k < 1) throw Error(ErrorKind::InvalidComposition, "k must be positive, got " + std::to_string(k));
  auto check_window = [this](const std::vector<VertexId>& w, const std::string& where) {
    if (w.size() != static_cast<std::size_t>(k) || sorted_unique(w).size() != w.size())
      throw Error(ErrorKind::InvalidComposition, where + " must hold " + std::to_string(k) + " distinct vertices");
  };
  check_window(initial, "initial window");
  std::unordered_set<VertexId> seen(initial.begin(), initial.end());
  std::set<VertexId> current(initial.begin(), initial.end());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const std::string where = "step " + std::to_string(i + 1);
    if (!seen.insert(s.added).second)
      throw Error(ErrorKind::InvalidComposition, where + " re-adds vertex " + std::to_string(s.added));
    check_window(s.window, where + " window");
    current.insert(s.added);
    for (VertexId x : s.window)
      if (!current.contains(x))
        throw Error(ErrorKind::InvalidComposition,
                    where + " window keeps vertex " + std::to_string(x) + " outside the previous window");
    current = std::set<VertexId>(s.window.begin(), s.window.end());
  }
}

std::vector<VertexId> LinearCompositionSequence::vertices() const {
  std::vector<VertexId> out = initial;
  for (const auto& s : steps) out.push_back(s.added);
  return out;
}

int validate_path_decomposition(const MetricGraph& g, const PathDecomposition& pd) {
  const std::size_t n = g.num_vertices();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> first(n, kNone), last(n, kNone), count(n, 0);
  int width = -1;
  for (std::size_t b = 0; b < pd.bags.size(); ++b) {
    auto bag = sorted_unique(pd.bags[b]);
    width = std::max(width, static_cast<int>(bag.size()) - 1);
    for (VertexId v : bag) {
      std::size_t i = g.index(v);
      if (first[i] == kNone) first[i] = b;
      last[i] = b;
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (first[i] == kNone) throw Error(ErrorKind::UncoveredVertex, "vertex " + std::to_string(g.id(i)));
  for (std::size_t i = 0; i < n; ++i)
    if (last[i] - first[i] + 1 != count[i])
      throw Error(ErrorKind::BrokenInterval, "vertex " + std::to_string(g.id(i)));
  for (const auto& e : g.edges()) {
    std::size_t a = g.index(e.u), b = g.index(e.v);
    if (std::max(first[a], first[b]) > std::min(last[a], last[b]))
      throw Error(ErrorKind::UncoveredEdge, "edge " + pair_text(e.u, e.v));
  }
  return width;
}

PathDecomposition composition_to_decomposition(const LinearCompositionSequence& seq) {
  seq.validate();
  PathDecomposition pd;
  if (seq.steps.empty()) {
    pd.bags.push_back(sorted_unique(seq.initial));
    return pd;
  }
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    std::vector<VertexId> bag = seq.window(i);
    bag.push_back(seq.steps[i].added);
    pd.bags.push_back(sorted_unique(std::move(bag)));
  }
  return pd;
}

PathDecomposition normalize_decomposition(const PathDecomposition& pd, const MetricGraph& g) {
  const int width = validate_path_decomposition(g, pd);
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> first(n, pd.bags.size()), last(n, 0);
  for (std::size_t b = 0; b < pd.bags.size(); ++b)
    for (VertexId v : pd.bags[b]) {
      std::size_t i = g.index(v);
      first[i] = std::min(first[i], b);
      last[i] = std::max(last[i], b);
    }

  // Introductions in bag order (ids ascending within a bag). A vertex counts
  // as forgotten once the bag after its last one has been reached.
  std::vector<std::size_t> intro_order(n);
  for (std::size_t i = 0; i < n; ++i) intro_order[i] = i;
  std::sort(intro_order.begin(), intro_order.end(),
            [&](std::size_t a, std::size_t b) { return std::pair(first[a], a) < std::pair(first[b], b); });

  const std::size_t bag_size = static_cast<std::size_t>(width) + 1;
  PathDecomposition out;
  std::vector<std::size_t> current(intro_order.begin(), intro_order.begin() + bag_size);
  auto emit = [&] {
    std::vector<VertexId> bag;
    for (std::size_t i : current) bag.push_back(g.id(i));
    out.bags.push_back(sorted_unique(std::move(bag)));
  };
  emit();
  for (std::size_t pos = bag_size; pos < n; ++pos) {
    std::size_t x = intro_order[pos];
    // Lowest-index member whose interval ended before x starts; at most
    // width vertices are alive when x is introduced, so one always exists.
    auto victim = current.end();
    for (auto it = current.begin(); it != current.end(); ++it)
      if (last[*it] < first[x] && (victim == current.end() || *it < *victim)) victim = it;
    if (victim == current.end())
      throw Error(ErrorKind::InvariantViolated, "normalization found no retirable vertex");
    *victim = x;
    emit();
  }
  return out;
}

LinearCompositionSequence decomposition_to_composition(const PathDecomposition& pd, const MetricGraph& g) {
  PathDecomposition norm = normalize_decomposition(pd, g);
  const auto& bags = norm.bags;
  LinearCompositionSequence seq;
  seq.k = norm.width();
  if (seq.k < 1) throw Error(ErrorKind::InvalidComposition, "decomposition of width 0 has no composition");

  auto minus = [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    std::vector<VertexId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  auto meet = [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    std::vector<VertexId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };

  VertexId v1 = bags.size() > 1 ? meet(bags[0], bags[1]).back() : bags[0].back();
  seq.initial = minus(bags[0], {v1});
  for (std::size_t i = 0; i < bags.size(); ++i) {
    LinearCompositionSequence::Step step;
    step.added = i == 0 ? v1 : minus(bags[i], bags[i - 1]).front();
    if (i + 1 < bags.size()) {
      step.window = meet(bags[i], bags[i + 1]);
    } else {
      // Last window is free; drop the vertex added last.
      step.window = minus(bags[i], {step.added});
    }
    seq.steps.push_back(std::move(step));
  }
  seq.validate();
  return seq;
}

std::vector<VertexPair> composed_edges(const LinearCompositionSequence& seq) {
  std::vector<VertexPair> out;
  for (std::size_t a = 0; a < seq.initial.size(); ++a)
    for (std::size_t b = a + 1; b < seq.initial.size(); ++b) out.push_back(VertexPair::of(seq.initial[a], seq.initial[b]));
  for (std::size_t i = 0; i < seq.steps.size(); ++i)
    for (VertexId u : seq.window(i)) out.push_back(VertexPair::of(u, seq.steps[i].added));
  std::sort(out.begin(), out.end());
  return out;
}

MetricGraph composed_metric(const LinearCompositionSequence& seq, const MetricGraph& g) {
  seq.validate();
  auto vs = sorted_unique(seq.vertices());
  if (!std::equal(vs.begin(), vs.end(), g.vertices().begin(), g.vertices().end()))
    throw Error(ErrorKind::NotASubgraph, "graph and composition have different vertex sets");
  auto pairs = composed_edges(seq);
  for (const auto& e : g.edges())
    if (!std::binary_search(pairs.begin(), pairs.end(), e.pair()))
      throw Error(ErrorKind::NotASubgraph, "edge " + pair_text(e.u, e.v) + " is not a composed edge");

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  std::size_t row_source = g.num_vertices();
  std::vector<Distance> row;
  for (const auto& p : pairs) {
    std::size_t iu = g.index(p.u);
    if (iu != row_source) {
      row = shortest_paths_from(g, iu);
      row_source = iu;
    }
    const Distance& d = row[g.index(p.v)];
    if (d.is_infinite())
      throw Error(ErrorKind::InfiniteDistance, "composed edge " + pair_text(p.u, p.v) + " joins two components");
    edges.push_back({p.u, p.v, d.value()});
  }
  return MetricGraph::build(std::move(vs), std::move(edges));
}

// ---- exact oracle -----------------------------------------------------------

namespace {

struct SeparationTable {
  std::vector<std::uint8_t> best;  // vertex separation number of each prefix set
  std::vector<std::uint32_t> adjacency;
};

SeparationTable separation_table(const MetricGraph& g, std::size_t limit) {
  const std::size_t n = g.num_vertices();
  if (n > limit)
    throw Error(ErrorKind::TooLarge,
                std::to_string(n) + " vertices exceeds the exact oracle limit of " + std::to_string(limit));
  if (n > 30) throw Error(ErrorKind::TooLarge, "exact oracle supports at most 30 vertices");
  SeparationTable t;
  t.adjacency.assign(n, 0);
  for (const auto& e : g.edges()) {
    std::size_t a = g.index(e.u), b = g.index(e.v);
    t.adjacency[a] |= 1u << b;
    t.adjacency[b] |= 1u << a;
  }
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  const std::size_t states = std::size_t(1) << n;
  // neighborhood[S] = union of neighbors of S, built incrementally.
  std::vector<std::uint32_t> neighborhood(states, 0);
  for (std::size_t s = 1; s < states; ++s) {
    std::uint32_t low = static_cast<std::uint32_t>(std::countr_zero(s));
    neighborhood[s] = neighborhood[s & (s - 1)] | t.adjacency[low];
  }
  t.best.assign(states, 0);
  for (std::size_t s = 1; s < states; ++s) {
    std::uint32_t outside = full & ~static_cast<std::uint32_t>(s);
    int boundary = std::popcount(static_cast<std::uint32_t>(s) & neighborhood[outside]);
    int best = 255;
    for (std::uint32_t rest = static_cast<std::uint32_t>(s); rest; rest &= rest - 1) {
      std::uint32_t bit = rest & (~rest + 1);
      best = std::min<int>(best, t.best[s ^ bit]);
    }
    t.best[s] = static_cast<std::uint8_t>(std::max(best, boundary));
  }
  return t;
}

}  // namespace

int exact_pathwidth(const MetricGraph& g, std::size_t limit) {
  if (g.num_vertices() == 0) return 0;
  auto t = separation_table(g, limit);
  return t.best.back();
}

PathDecomposition exact_path_decomposition(const MetricGraph& g, std::size_t limit) {
  const std::size_t n = g.num_vertices();
  PathDecomposition pd;
  if (n == 0) return pd;
  auto t = separation_table(g, limit);
  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;

  // Recover an optimal ordering backwards from the full set.
  std::vector<std::size_t> order(n);
  std::uint32_t s = full;
  const int target = t.best[s];
  for (std::size_t pos = n; pos-- > 0;) {
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t bit = 1u << v;
      if ((s & bit) && t.best[s ^ bit] <= target) {
        order[pos] = v;
        s ^= bit;
        break;
      }
    }
  }
  std::uint32_t prefix = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::vector<VertexId> bag{g.id(order[pos])};
    std::uint32_t outside = full & ~prefix;
    for (std::uint32_t rest = prefix; rest; rest &= rest - 1) {
      std::size_t u = std::countr_zero(rest);
      if (t.adjacency[u] & outside) bag.push_back(g.id(u));
    }
    pd.bags.push_back(sorted_unique(std::move(bag)));
    prefix |= 1u << order[pos];
  }
  return pd;
}

}  // namespace pwtree
