#pragma once

#include <cstddef>
#include <vector>

#include "pwtree/graph.hpp"

namespace pwtree {

/// One support point of an exactly enumerated tree distribution.
struct WeightedTree {
  MetricGraph tree;
  Rational probability;
};

using TreeDistribution = std::vector<WeightedTree>;

constexpr std::size_t kDefaultOutcomeLimit = std::size_t(1) << 20;

/// Exact E[d_T(u, v)] under the distribution.
Rational expected_tree_distance(const TreeDistribution& dist, VertexId u, VertexId v);

/// Sum of all probabilities (1 for a well-formed distribution).
Rational total_probability(const TreeDistribution& dist);

}  // namespace pwtree
