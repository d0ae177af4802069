#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pwtree/distribution.hpp"
#include "pwtree/graph.hpp"
#include "pwtree/pathwidth.hpp"
#include "pwtree/random.hpp"

namespace pwtree {

/// C(k+1, 2): the largest edge rank any reachable state may hold.
int rank_bound(int k);

/// The evolving subgraph H: a forest hanging off a (k+1)-clique on the
/// current window. Ranks are kept per pair of clique vertices as the maximum
/// rank over all vertex pairs attached to those two clique vertices, which is
/// exactly the edge rank of the clique edge between them.
class EmbeddingState {
 public:
  /// H on the first window: the clique on V_0 plus v_1 (or on V_0 alone for a
  /// sequence without steps). Throws MissingLength. `lengths` is referenced,
  /// not copied, and must outlive the state.
  static EmbeddingState initial(const LinearCompositionSequence& seq, const MetricGraph& lengths);

  int k() const noexcept { return k_; }
  /// Sorted clique vertices.
  const std::vector<VertexId>& window() const noexcept { return window_; }
  bool contains(VertexId v) const;
  std::vector<VertexId> vertices() const;
  /// Forest edges followed by clique edges.
  std::vector<Edge> edges() const;
  MetricGraph graph() const;

  /// Length of a composed edge. Throws MissingLength.
  Rational length(VertexId a, VertexId b) const;
  /// Clique vertex through which `v` attaches. Throws VertexAbsent.
  VertexId attachment(VertexId v) const;
  /// The unique u-v path in H with at most one clique edge. Throws VertexAbsent.
  std::vector<Edge> canonical_path(VertexId u, VertexId v) const;
  /// Throws NotACliqueEdge.
  int edge_rank(VertexPair e) const;
  int max_edge_rank() const;

 private:
  friend struct TransitionAccess;

  std::size_t find(std::size_t i) const;
  std::size_t slot(VertexId v) const;
  static VertexPair key(VertexId a, VertexId b) { return VertexPair::of(a, b); }

  int k_ = 0;
  const MetricGraph* lengths_ = nullptr;
  std::vector<VertexId> window_;
  std::vector<Edge> forest_;
  // Union-find over vertex indices of `lengths`; roots are clique vertices.
  mutable std::vector<std::size_t> parent_;
  std::vector<char> present_;
  std::map<VertexPair, int> rank_;  // absent pairs read as 0
};

/// Sampled eligible prefix of the length-sorted edges e_1..e_k.
struct EligibleDraw {
  std::vector<bool> sigma;  // k - 1 draws
  std::size_t prefix = 1;   // |E|, always >= 1
};

/// P[sigma_j = 1] = min{1, tau * len(e_j) / len(e_{j+1})}, exact; a zero
/// next length saturates to 1.
std::vector<Rational> sigma_probabilities(std::span<const Rational> sorted_lengths, const Rational& tau);

/// Draws all k - 1 sigmas (one uniform each) and cuts at the first zero.
EligibleDraw eligible_set(std::span<const Rational> sorted_lengths, const Rational& tau, RandomStream& rng);

/// Edges from the departing window vertex to the retained window, sorted by
/// (length, pair). Throws IllegalWindow or MissingLength.
std::vector<Edge> departing_edges(const EmbeddingState& state, std::span<const VertexId> retained);

struct TransitionInfo {
  std::vector<Edge> sorted;  // e_1..e_k
  std::size_t eligible = 0;  // prefix length of E
  Edge kept;                 // e*
};

/// Applies one transition with a fixed eligible prefix length. `retained` is
/// the k-subset of the window that stays, `added` the next vertex.
TransitionInfo apply_transition(EmbeddingState& state, VertexId added, std::span<const VertexId> retained,
                                std::size_t eligible_prefix);

/// Random transition: draws the eligible set, then applies it.
TransitionInfo step_transition(EmbeddingState& state, VertexId added, std::span<const VertexId> retained,
                               const Rational& tau, RandomStream& rng);

struct PwkOptions {
  std::optional<Rational> tau;  // defaults to 4k
};

struct PwkStats {
  int max_edge_rank = 0;
  std::size_t transitions = 0;
};

Rational default_tau(int k);

/// H after all transitions with the final clique replaced by its MST.
MetricGraph finish_tree(const EmbeddingState& state);

/// Random tree on the composed vertex set; every edge is a composed edge with
/// its length from `lengths`. Throws RankBoundExceeded if a rank passes C(k+1,2).
MetricGraph embed_pathwidthk(const LinearCompositionSequence& seq, const MetricGraph& lengths, RandomStream& rng,
                             const PwkOptions& options = {}, PwkStats* stats = nullptr);

TreeDistribution enumerate_pwk_distribution(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                                            const PwkOptions& options = {},
                                            std::size_t limit = kDefaultOutcomeLimit);

}  // namespace pwtree
