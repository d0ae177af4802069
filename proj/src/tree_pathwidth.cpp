#include <algorithm>
#include <cstdint>
#include <limits>

#include "pwtree/error.hpp"
#include "pwtree/pathwidth.hpp"

namespace pwtree {
namespace {

// A rooted-tree label is a strictly decreasing list of (value, critical)
// entries. The head value is the pathwidth of the rooted tree. A critical head
// means some vertex c has two branches of that pathwidth below it, so the tree
// cannot be extended upward without growing unless the rest stays smaller;
// the tail is then the label of the tree with c's subtree removed.
struct Entry {
  int value;
  bool critical;
};
using Label = std::vector<Entry>;

Label combine(std::vector<const Label*> children) {
  std::erase_if(children, [](const Label* l) { return l->empty(); });
  if (children.empty()) return {{0, false}};
  int m = 0;
  for (const Label* l : children) m = std::max(m, l->front().value);
  if (m == 0) return {{1, false}};

  int at_max = 0;
  const Label* critical = nullptr;
  for (const Label* l : children)
    if (l->front().value == m) {
      ++at_max;
      if (l->front().critical) critical = l;
    }
  if (at_max >= 3) return {{m + 1, false}};
  if (critical != nullptr) {
    if (at_max >= 2) return {{m + 1, false}};
    // The critical vertex must be an end of the layout; what remains is the
    // critical child's tail together with every other child.
    Label tail(critical->begin() + 1, critical->end());
    std::vector<const Label*> rest;
    for (const Label* l : children)
      if (l != critical) rest.push_back(l);
    rest.push_back(&tail);
    Label reduced = combine(std::move(rest));
    if (reduced.front().value >= m) return {{m + 1, false}};
    Label out{{m, true}};
    out.insert(out.end(), reduced.begin(), reduced.end());
    return out;
  }
  if (at_max == 2) return {{m, true}};
  return {{m, false}};
}

void require_tree(const MetricGraph& t) {
  if (!is_tree(t)) throw Error(ErrorKind::NotATree, "input is not a tree");
}

// Labels of every directed branch: branch[v][j] describes the component of
// t - v containing the j-th neighbor of v, rooted at that neighbor.
struct BranchLabels {
  std::vector<std::vector<Label>> branch;

  int pathwidth(std::size_t v, std::size_t j) const { return branch[v][j].front().value; }
};

BranchLabels branch_labels(const MetricGraph& t) {
  const std::size_t n = t.num_vertices();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kNone), order;
  order.reserve(n);
  std::vector<std::size_t> stack{0};
  parent[0] = 0;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    order.push_back(x);
    for (const auto& inc : t.neighbors(x))
      if (parent[inc.to] == kNone) {
        parent[inc.to] = x;
        stack.push_back(inc.to);
      }
  }
  // slot_of_parent[x] = position of parent[x] in x's neighbor list.
  std::vector<std::size_t> slot_of_parent(n, kNone);
  for (std::size_t x = 1; x < n; ++x) {
    auto nb = t.neighbors(x);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (nb[j].to == parent[x]) slot_of_parent[x] = j;
  }

  BranchLabels out;
  out.branch.resize(n);
  for (std::size_t x = 0; x < n; ++x) out.branch[x].resize(t.degree(x));
  // down[x] = label of x's subtree rooted at x.
  std::vector<Label> down(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t x = *it;
    std::vector<const Label*> kids;
    // parent[0] == 0 and there are no loops, so the root keeps every neighbor.
    for (const auto& inc : t.neighbors(x))
      if (inc.to != parent[x]) kids.push_back(&down[inc.to]);
    down[x] = combine(std::move(kids));
  }
  for (std::size_t x = 0; x < n; ++x) {
    auto nb = t.neighbors(x);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (nb[j].to != parent[x]) out.branch[x][j] = down[nb[j].to];
  }
  // Upward branches, top-down: the component of t - x containing parent p is
  // p with all its branches except the one through x.
  for (std::size_t x : order) {
    if (x == 0) continue;
    std::size_t p = parent[x];
    std::vector<const Label*> kids;
    auto nb = t.neighbors(p);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (nb[j].to != x) kids.push_back(&out.branch[p][j]);
    out.branch[x][slot_of_parent[x]] = combine(std::move(kids));
  }
  return out;
}

}  // namespace

int tree_pathwidth(const MetricGraph& t) {
  require_tree(t);
  const std::size_t n = t.num_vertices();
  std::vector<std::size_t> parent(n, n), order;
  std::vector<std::size_t> stack{0};
  parent[0] = 0;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    order.push_back(x);
    for (const auto& inc : t.neighbors(x))
      if (parent[inc.to] == n) {
        parent[inc.to] = x;
        stack.push_back(inc.to);
      }
  }
  std::vector<Label> down(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t x = *it;
    std::vector<const Label*> kids;
    for (const auto& inc : t.neighbors(x))
      if (inc.to != parent[x]) kids.push_back(&down[inc.to]);
    down[x] = combine(std::move(kids));
    for (const auto& inc : t.neighbors(x))
      if (inc.to != parent[x]) Label().swap(down[inc.to]);
  }
  return down[0].front().value;
}

PeeledPath peel_path(const MetricGraph& t) {
  require_tree(t);
  const int ell = tree_pathwidth(t);
  if (ell <= 1)
    throw Error(ErrorKind::PathwidthTooLow, "peeling needs pathwidth at least 2, got " + std::to_string(ell));
  const std::size_t n = t.num_vertices();
  BranchLabels labels = branch_labels(t);

  std::vector<int> alpha(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < t.degree(x); ++j)
      if (labels.pathwidth(x, j) == ell) ++alpha[x];

  // Neighbors of x whose branch reaches pathwidth ell, ascending by id.
  auto heavy_neighbors = [&](std::size_t x) {
    std::vector<std::size_t> out;
    auto nb = t.neighbors(x);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (labels.pathwidth(x, j) == ell) out.push_back(nb[j].to);
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<std::size_t> path;
  if (auto it = std::find(alpha.begin(), alpha.end(), 0); it != alpha.end()) {
    path.push_back(static_cast<std::size_t>(it - alpha.begin()));
  } else if (std::find(alpha.begin(), alpha.end(), 2) == alpha.end()) {
    std::size_t x = 0;
    while (t.degree(x) != 1) ++x;
    std::vector<char> visited(n, 0);
    while (true) {
      path.push_back(x);
      visited[x] = 1;
      std::size_t y = heavy_neighbors(x).front();
      if (visited[y]) break;
      x = y;
    }
  } else {
    std::vector<char> in_x(n, 0);
    for (std::size_t x = 0; x < n; ++x) in_x[x] = alpha[x] == 2;
    // Walk the induced path from its lowest-id endpoint.
    auto x_degree = [&](std::size_t x) {
      int d = 0;
      for (const auto& inc : t.neighbors(x)) d += in_x[inc.to];
      return d;
    };
    std::size_t start = 0;
    while (!in_x[start] || x_degree(start) > 1) ++start;
    std::vector<std::size_t> h{start};
    std::size_t prev = n;
    for (std::size_t cur = start;;) {
      std::size_t next = n;
      for (const auto& inc : t.neighbors(cur))
        if (in_x[inc.to] && inc.to != prev) next = inc.to;
      if (next == n) break;
      h.push_back(next);
      prev = cur;
      cur = next;
    }
    std::size_t members = static_cast<std::size_t>(std::count(in_x.begin(), in_x.end(), 1));
    if (h.size() != members) throw Error(ErrorKind::InvariantViolated, "vertices with two heavy branches do not form a path");

    auto outside_heavy = [&](std::size_t w) {
      for (std::size_t y : heavy_neighbors(w))
        if (!in_x[y]) return y;
      throw Error(ErrorKind::InvariantViolated, "path end has no heavy branch outside the path");
    };
    std::size_t w1, w2;
    if (h.size() == 1) {
      auto heavy = heavy_neighbors(h[0]);
      w1 = heavy[0];
      w2 = heavy[1];
    } else {
      w1 = outside_heavy(h.front());
      w2 = outside_heavy(h.back());
    }
    path.push_back(w1);
    path.insert(path.end(), h.begin(), h.end());
    path.push_back(w2);
  }

  PeeledPath out;
  std::vector<char> on_path(n, 0);
  for (std::size_t x : path) {
    out.path.push_back(t.id(x));
    on_path[x] = 1;
  }
  std::vector<VertexId> rest;
  for (std::size_t x = 0; x < n; ++x)
    if (!on_path[x]) rest.push_back(t.id(x));
  MetricGraph remainder = t.induced(rest);
  for (const auto& comp : connected_components(remainder)) out.components.push_back(remainder.induced(comp));
  return out;
}

namespace {

// Orders the vertices of a caterpillar's spine (all non-leaves) end to end.
std::vector<std::size_t> caterpillar_spine(const MetricGraph& t) {
  const std::size_t n = t.num_vertices();
  if (n <= 2) return {0};
  std::vector<char> inner(n, 0);
  for (std::size_t x = 0; x < n; ++x) inner[x] = t.degree(x) > 1;
  auto inner_degree = [&](std::size_t x) {
    int d = 0;
    for (const auto& inc : t.neighbors(x)) d += inner[inc.to];
    return d;
  };
  std::size_t start = 0;
  while (!inner[start] || inner_degree(start) > 1) ++start;
  std::vector<std::size_t> spine{start};
  std::size_t prev = n;
  for (std::size_t cur = start;;) {
    std::size_t next = n;
    for (const auto& inc : t.neighbors(cur))
      if (inner[inc.to] && inc.to != prev) next = inc.to;
    if (next == n) break;
    spine.push_back(next);
    prev = cur;
    cur = next;
  }
  return spine;
}

void decompose_into(const MetricGraph& t, std::vector<std::vector<VertexId>>& bags) {
  const std::size_t n = t.num_vertices();
  if (n == 1) {
    bags.push_back({t.id(0)});
    return;
  }
  const int ell = tree_pathwidth(t);
  std::vector<VertexId> spine;
  if (ell >= 2) {
    spine = peel_path(t).path;
  } else {
    for (std::size_t x : caterpillar_spine(t)) spine.push_back(t.id(x));
  }

  std::vector<char> on_spine(n, 0);
  for (VertexId v : spine) on_spine[t.index(v)] = 1;
  std::vector<VertexId> rest;
  for (std::size_t x = 0; x < n; ++x)
    if (!on_spine[x]) rest.push_back(t.id(x));
  MetricGraph remainder = t.induced(rest);
  auto comps = connected_components(remainder);

  // Each component hangs off exactly one spine vertex.
  std::vector<std::vector<std::size_t>> hanging(spine.size());
  std::vector<std::size_t> spine_pos(n, 0);
  for (std::size_t j = 0; j < spine.size(); ++j) spine_pos[t.index(spine[j])] = j;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool placed = false;
    for (VertexId v : comps[c]) {
      for (const auto& inc : t.neighbors(t.index(v)))
        if (on_spine[inc.to]) {
          hanging[spine_pos[inc.to]].push_back(c);
          placed = true;
          break;
        }
      if (placed) break;
    }
  }

  for (std::size_t j = 0; j < spine.size(); ++j) {
    for (std::size_t c : hanging[j]) {
      std::vector<std::vector<VertexId>> sub;
      decompose_into(remainder.induced(comps[c]), sub);
      for (auto& bag : sub) {
        bag.push_back(spine[j]);
        std::sort(bag.begin(), bag.end());
        bags.push_back(std::move(bag));
      }
    }
    if (j + 1 < spine.size()) {
      bags.push_back({std::min(spine[j], spine[j + 1]), std::max(spine[j], spine[j + 1])});
    } else if (hanging[j].empty() && spine.size() == 1) {
      bags.push_back({spine[j]});
    }
  }
}

}  // namespace

PathDecomposition tree_path_decomposition(const MetricGraph& t) {
  require_tree(t);
  PathDecomposition pd;
  decompose_into(t, pd.bags);
  return pd;
}

}  // namespace pwtree
