#include "pwtree/embed_pw2.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

// The random choice of one step: with probability `p` delete `if_yes`,
// otherwise delete `if_no`. Probabilities depend only on the sequence and the
// lengths, never on earlier choices.
struct StepPlan {
  VertexId added;
  VertexPair if_yes;
  VertexPair if_no;
  Rational p;
};

Rational required_length(const MetricGraph& lengths, VertexId a, VertexId b) {
  auto len = lengths.length(a, b);
  if (!len)
    throw Error(ErrorKind::MissingLength,
                "no length for composed edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  return *len;
}

std::vector<StepPlan> plan_steps(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                                 const Rational& tau) {
  if (seq.k != 2) throw Error(ErrorKind::WrongWidth, "the width-2 embedder needs k = 2, got " + std::to_string(seq.k));
  seq.validate();
  const Rational half(1, 2);
  std::vector<StepPlan> plans;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& cur = seq.window(i);
    const VertexId u = std::min(cur[0], cur[1]);
    const VertexId v = std::max(cur[0], cur[1]);
    const VertexId w = seq.steps[i].added;
    const auto& next = seq.steps[i].window;
    const bool same = std::is_permutation(next.begin(), next.end(), cur.begin());
    StepPlan plan{w, {}, {}, Rational()};
    if (same) {
      Rational uw = required_length(lengths, u, w), vw = required_length(lengths, v, w);
      plan.if_yes = VertexPair::of(u, w);
      plan.if_no = VertexPair::of(v, w);
      plan.p = (uw + vw).is_zero() ? half : pw2_deletion_probability(Pw2Case::SameWindow, uw, vw, Rational(), tau);
    } else {
      // The window keeps `stay` and the new vertex; `leave` drops out.
      const VertexId stay = std::find(next.begin(), next.end(), u) != next.end() ? u : v;
      const VertexId leave = stay == u ? v : u;
      Rational lw = required_length(lengths, leave, w), ls = required_length(lengths, leave, stay);
      required_length(lengths, stay, w);
      plan.if_yes = VertexPair::of(leave, w);
      plan.if_no = VertexPair::of(u, v);
      plan.p = (lw + ls).is_zero() ? half : pw2_deletion_probability(Pw2Case::MovedWindow, lw, Rational(), ls, tau);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

MetricGraph tree_from_pairs(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                            const std::set<VertexPair>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) edges.push_back({p.u, p.v, required_length(lengths, p.u, p.v)});
  return MetricGraph::build(seq.vertices(), std::move(edges));
}

void check_window_edge(const std::set<VertexPair>& tree, const std::vector<VertexId>& window) {
  if (!tree.contains(VertexPair::of(window[0], window[1])))
    throw Error(ErrorKind::InvariantViolated, "window edge missing from the tree");
}

}  // namespace

Rational pw2_deletion_probability(Pw2Case which, const Rational& len_uw, const Rational& len_vw,
                                  const Rational& len_uv, const Rational& tau) {
  if (len_uw.sign() < 0 || len_vw.sign() < 0 || len_uv.sign() < 0)
    throw Error(ErrorKind::NegativeLength, "deletion probability needs non-negative lengths");
  if (which == Pw2Case::SameWindow) {
    Rational den = len_uw + len_vw;
    if (den.is_zero()) throw Error(ErrorKind::DegenerateZero, "len(u,w*) + len(v,w*) = 0");
    return len_uw / den;
  }
  Rational den = len_uw + len_uv;
  if (den.is_zero()) throw Error(ErrorKind::DegenerateZero, "len(u,w*) + len(u,v) = 0");
  return min(Rational(1), tau * len_uw / den);
}

MetricGraph embed_pathwidth2(const LinearCompositionSequence& seq, const MetricGraph& lengths, RandomStream& rng,
                             const Rational& tau) {
  auto plans = plan_steps(seq, lengths, tau);
  std::set<VertexPair> tree{VertexPair::of(seq.initial[0], seq.initial[1])};
  required_length(lengths, seq.initial[0], seq.initial[1]);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    for (VertexId x : seq.window(i)) tree.insert(VertexPair::of(x, plan.added));
    const bool yes = rng.uniform() < plan.p.to_double();
    tree.erase(yes ? plan.if_yes : plan.if_no);
    check_window_edge(tree, seq.steps[i].window);
  }
  return tree_from_pairs(seq, lengths, tree);
}

TreeDistribution enumerate_pw2_distribution(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                                            const Rational& tau, std::size_t limit) {
  auto plans = plan_steps(seq, lengths, tau);
  std::size_t branching = 1;
  for (const auto& plan : plans)
    if (!plan.p.is_zero() && plan.p != Rational(1)) {
      if (branching > limit / 2)
        throw Error(ErrorKind::TooManyOutcomes, "more than " + std::to_string(limit) + " outcomes");
      branching *= 2;
    }
  if (branching > limit) throw Error(ErrorKind::TooManyOutcomes, "more than " + std::to_string(limit) + " outcomes");

  required_length(lengths, seq.initial[0], seq.initial[1]);
  std::map<std::set<VertexPair>, Rational> layer{{{VertexPair::of(seq.initial[0], seq.initial[1])}, Rational(1)}};
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    std::map<std::set<VertexPair>, Rational> next;
    for (const auto& [tree, prob] : layer) {
      std::set<VertexPair> grown = tree;
      for (VertexId x : seq.window(i)) grown.insert(VertexPair::of(x, plan.added));
      for (bool yes : {true, false}) {
        Rational q = yes ? plan.p : Rational(1) - plan.p;
        if (q.is_zero()) continue;
        std::set<VertexPair> t = grown;
        t.erase(yes ? plan.if_yes : plan.if_no);
        check_window_edge(t, seq.steps[i].window);
        next[std::move(t)] += prob * q;
      }
    }
    layer = std::move(next);
  }
  TreeDistribution out;
  for (const auto& [tree, prob] : layer) out.push_back({tree_from_pairs(seq, lengths, tree), prob});
  return out;
}

}  // namespace pwtree
