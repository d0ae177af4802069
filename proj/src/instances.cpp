#include "pwtree/instances.hpp"

#include <algorithm>
#include <limits>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

// c^(2^level), saturating at UINT64_MAX.
std::uint64_t power_of_two_power(std::uint64_t c, int level) {
  unsigned __int128 x = c;
  for (int j = 0; j < level; ++j) {
    x = x * x;
    if (x > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(x);
}

struct Builder {
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;

  VertexId fresh() {
    VertexId v = static_cast<VertexId>(vertices.size());
    vertices.push_back(v);
    return v;
  }

  // Nested spider of depth `depth` hanging from the existing vertex `root`;
  // `level` selects the branch count, `branches` how many of them to build.
  PsiStructure spider(VertexId root, int depth, std::uint64_t m, int level, std::uint64_t branches) {
    const std::uint64_t c = psi_branch_count(m, level);
    PsiStructure s;
    s.root = root;
    for (std::uint64_t b = 0; b < branches; ++b) {
      std::vector<VertexId> leg;
      VertexId prev = root;
      for (std::uint64_t j = 0; j < c; ++j) {
        VertexId x = fresh();
        edges.push_back({prev, x, Rational(1)});
        leg.push_back(x);
        prev = x;
      }
      s.legs.push_back(leg);
      if (depth > 1) s.copies.push_back(spider(leg.back(), depth - 1, m, level + 1, psi_branch_count(m, level + 1)));
    }
    return s;
  }
};

}  // namespace

MetricGraph phi(int i) {
  if (i < 1) throw Error(ErrorKind::BadSpec, "phi needs i >= 1, got " + std::to_string(i));
  // Phi_i is the depth-1 spider whose branch count is i.
  Builder b;
  b.fresh();
  const std::uint64_t c = static_cast<std::uint64_t>(i);
  b.spider(0, 1, c * c, 1, c);
  return MetricGraph::build(std::move(b.vertices), std::move(b.edges));
}

std::uint64_t psi_branch_count(std::uint64_t m, int level) {
  if (m <= 1) return 1;
  // Binary search for the smallest c with c^(2^level) >= m.
  std::uint64_t lo = 1, hi = m;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (power_of_two_power(mid, level) >= m)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

PsiInstance psi_truncated(int i, std::uint64_t m, std::uint64_t branches) {
  if (i < 1 || m < 1) throw Error(ErrorKind::BadSpec, "psi needs i >= 1 and m >= 1");
  const std::uint64_t c = psi_branch_count(m, 1);
  if (branches < 1 || branches > c)
    throw Error(ErrorKind::BadTruncation,
                "branch count " + std::to_string(branches) + " outside [1, " + std::to_string(c) + "]");
  Builder b;
  b.fresh();
  PsiStructure s = b.spider(0, i, m, 1, branches);
  return {MetricGraph::build(std::move(b.vertices), std::move(b.edges)), std::move(s)};
}

PsiInstance psi(int i, std::uint64_t m) {
  if (i < 1 || m < 1) throw Error(ErrorKind::BadSpec, "psi needs i >= 1 and m >= 1");
  return psi_truncated(i, m, psi_branch_count(m, 1));
}

std::uint64_t psi_vertex_count(int i, std::uint64_t m) {
  // N(1) = 1 + c^2 and N(i) = 1 + c^2 + c * (N'(i-1) - 1) with the nested
  // counts taken one level deeper.
  std::uint64_t inner = 1;
  for (int level = i; level >= 1; --level) {
    std::uint64_t c = psi_branch_count(m, level);
    inner = 1 + c * c + c * (inner - 1);
  }
  return inner;
}

ComposedInstance cycle(int n, std::span<const Rational> lengths) {
  if (n < 3) throw Error(ErrorKind::BadSpec, "cycle needs n >= 3, got " + std::to_string(n));
  if (!lengths.empty() && lengths.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::BadSpec, "cycle needs one length per edge");
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  for (int j = 0; j < n; ++j) {
    vertices.push_back(static_cast<VertexId>(j));
    VertexId a = static_cast<VertexId>(j), b = static_cast<VertexId>((j + 1) % n);
    edges.push_back({a, b, lengths.empty() ? Rational(1) : lengths[static_cast<std::size_t>(j)]});
  }
  LinearCompositionSequence seq;
  seq.k = 2;
  seq.initial = {0, 1};
  for (int j = 2; j < n; ++j) seq.steps.push_back({static_cast<VertexId>(j), {0, static_cast<VertexId>(j)}});
  return {MetricGraph::build(std::move(vertices), std::move(edges)), std::move(seq)};
}

Rational default_length(RandomStream& rng) {
  auto p = static_cast<std::int64_t>(1 + rng.below(16));
  auto q = static_cast<std::int64_t>(1 + rng.below(4));
  return Rational(p, q);
}

ComposedInstance random_pathwidth_graph(int k, int n, RandomStream& rng, const LengthSampler& sampler) {
  if (k < 1 || n < k) throw Error(ErrorKind::BadSpec, "random-pw needs 1 <= k <= n");
  LinearCompositionSequence seq;
  seq.k = k;
  for (int j = 0; j < k; ++j) seq.initial.push_back(static_cast<VertexId>(j));
  std::vector<VertexId> window = seq.initial;
  std::vector<VertexPair> kept;
  for (int j = 0; j + 1 < k; ++j) kept.push_back(VertexPair::of(static_cast<VertexId>(j), static_cast<VertexId>(j + 1)));
  for (int a = 0; a < k; ++a)
    for (int b = a + 2; b < k; ++b)
      if (rng.below(2)) kept.push_back(VertexPair::of(static_cast<VertexId>(a), static_cast<VertexId>(b)));

  for (int j = k; j < n; ++j) {
    const VertexId v = static_cast<VertexId>(j);
    const std::size_t forced = rng.below(window.size());
    for (std::size_t a = 0; a < window.size(); ++a)
      if (a == forced || rng.below(2)) kept.push_back(VertexPair::of(window[a], v));
    window.push_back(v);
    window.erase(window.begin() + static_cast<std::ptrdiff_t>(rng.below(window.size())));
    std::vector<VertexId> next = window;
    std::sort(next.begin(), next.end());
    seq.steps.push_back({v, next});
  }

  std::vector<VertexId> vertices;
  for (int j = 0; j < n; ++j) vertices.push_back(static_cast<VertexId>(j));
  std::vector<Edge> edges;
  for (const auto& p : kept) edges.push_back({p.u, p.v, sampler(rng)});
  MetricGraph g = reduce_lengths(MetricGraph::build(std::move(vertices), std::move(edges)));
  return {std::move(g), std::move(seq)};
}

}  // namespace pwtree
