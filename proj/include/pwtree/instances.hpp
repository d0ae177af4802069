#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pwtree/graph.hpp"
#include "pwtree/pathwidth.hpp"
#include "pwtree/random.hpp"

namespace pwtree {

/// Spider: a root joined to i disjoint unit paths of length i. Root is 0 and
/// ids follow DFS preorder. Throws BadSpec for i < 1.
MetricGraph phi(int i);

/// Shape of a generated nested spider, for tests and witness constructions.
struct PsiStructure {
  VertexId root = 0;
  /// legs[b] lists the vertices of branch b from the root's child to the leaf.
  std::vector<std::vector<VertexId>> legs;
  /// copies[b] is the nested spider rooted at legs[b].back(); empty at depth 1.
  std::vector<PsiStructure> copies;
};

struct PsiInstance {
  MetricGraph graph;
  PsiStructure structure;
};

/// Branch count used at the given nesting level: the smallest c with
/// c^(2^level) >= m, i.e. the ceiling of the 2^level-th root of m.
std::uint64_t psi_branch_count(std::uint64_t m, int level);

/// Depth-i nested spider on parameter m. Throws BadSpec for i < 1 or m < 1.
PsiInstance psi(int i, std::uint64_t m);

/// Same, keeping only the first `branches` children of the root.
/// Throws BadTruncation unless 1 <= branches <= psi_branch_count(m, 1).
PsiInstance psi_truncated(int i, std::uint64_t m, std::uint64_t branches);

/// Closed-form vertex count of psi(i, m).
std::uint64_t psi_vertex_count(int i, std::uint64_t m);

struct ComposedInstance {
  MetricGraph graph;
  LinearCompositionSequence composition;
};

/// n-cycle 0-1-...-(n-1)-0 with the width-2 fan composition: V_0 = {0,1},
/// step j adds j and keeps {0, j}. `lengths[j]` is the length of edge
/// (j, j+1 mod n); empty means unit lengths. Throws BadSpec for n < 3.
ComposedInstance cycle(int n, std::span<const Rational> lengths = {});

using LengthSampler = std::function<Rational(RandomStream&)>;

/// p/q with p uniform in [1, 16] and q uniform in [1, 4].
Rational default_length(RandomStream& rng);

/// Random width-k composition on vertices 0..n-1 with random retained
/// windows; each composed edge is kept with probability 1/2, except that a
/// path through V_0 and one edge from every new vertex are always kept, so the
/// result is connected. Lengths are sampled and then reduced.
ComposedInstance random_pathwidth_graph(int k, int n, RandomStream& rng, const LengthSampler& sampler = default_length);

}  // namespace pwtree
