#include "pwtree/distribution.hpp"

namespace pwtree {

Rational expected_tree_distance(const TreeDistribution& dist, VertexId u, VertexId v) {
  Rational sum;
  for (const auto& outcome : dist) {
    auto row = tree_distances_from(outcome.tree, outcome.tree.index(u));
    sum += outcome.probability * row[outcome.tree.index(v)];
  }
  return sum;
}

Rational total_probability(const TreeDistribution& dist) {
  Rational sum;
  for (const auto& outcome : dist) sum += outcome.probability;
  return sum;
}

}  // namespace pwtree
