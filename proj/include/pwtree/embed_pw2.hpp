#pragma once

#include "pwtree/distribution.hpp"
#include "pwtree/graph.hpp"
#include "pwtree/pathwidth.hpp"
#include "pwtree/random.hpp"

namespace pwtree {

enum class Pw2Case {
  SameWindow,   // e_{i+1} = e_i
  MovedWindow,  // e_{i+1} contains the new vertex
};

inline const Rational kPw2Tau{12};

/// Probability of deleting {u,w*}.
///   SameWindow:  len_uw / (len_uw + len_vw)
///   MovedWindow: min{1, tau * len_uw / (len_uw + len_uv)}, u being the vertex that leaves the window.
/// Throws NegativeLength, or DegenerateZero when the denominator vanishes.
Rational pw2_deletion_probability(Pw2Case which, const Rational& len_uw, const Rational& len_vw,
                                  const Rational& len_uv, const Rational& tau = kPw2Tau);

/// Random spanning tree of the composed graph. `lengths` must contain every
/// composed edge (MissingLength otherwise); one uniform draw is consumed per
/// step. Throws WrongWidth unless seq.k == 2.
MetricGraph embed_pathwidth2(const LinearCompositionSequence& seq, const MetricGraph& lengths, RandomStream& rng,
                             const Rational& tau = kPw2Tau);

/// Full output distribution with exact probabilities; identical trees are
/// merged. Throws TooManyOutcomes when the branching exceeds `limit`.
TreeDistribution enumerate_pw2_distribution(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                                            const Rational& tau = kPw2Tau,
                                            std::size_t limit = kDefaultOutcomeLimit);

}  // namespace pwtree
