#include "pwtree/embed_pwk.hpp"

#include <algorithm>
#include <functional>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

Rational required_length(const MetricGraph& lengths, VertexId a, VertexId b) {
  auto len = lengths.length(a, b);
  if (!len)
    throw Error(ErrorKind::MissingLength, "no length for edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  return *len;
}

bool edge_order(const Edge& a, const Edge& b) {
  if (a.length != b.length) return a.length < b.length;
  return a.pair() < b.pair();
}

std::vector<VertexId> sorted_copy(std::span<const VertexId> xs) {
  std::vector<VertexId> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int rank_bound(int k) { return k * (k + 1) / 2; }

Rational default_tau(int k) { return Rational(4 * k); }

// Private-state access for the transition functions.
struct TransitionAccess {
  static EmbeddingState& fresh(EmbeddingState& s, int k, const MetricGraph& lengths) {
    s.k_ = k;
    s.lengths_ = &lengths;
    s.parent_.resize(lengths.num_vertices());
    for (std::size_t i = 0; i < s.parent_.size(); ++i) s.parent_[i] = i;
    s.present_.assign(lengths.num_vertices(), 0);
    return s;
  }

  static void add_window_vertex(EmbeddingState& s, VertexId v) {
    std::size_t i = s.lengths_->index(v);
    s.present_[i] = 1;
    s.parent_[i] = i;
    for (VertexId y : s.window_) required_length(*s.lengths_, v, y);
    s.window_.insert(std::upper_bound(s.window_.begin(), s.window_.end(), v), v);
  }

  static TransitionInfo apply(EmbeddingState& s, VertexId added, std::span<const VertexId> retained,
                              std::size_t prefix) {
    TransitionInfo info;
    info.sorted = departing_edges(s, retained);
    if (prefix < 1 || prefix > info.sorted.size())
      throw Error(ErrorKind::InvariantViolated, "eligible prefix out of range");
    if (!s.lengths_->has_vertex(added) || s.present_[s.lengths_->index(added)])
      throw Error(ErrorKind::IllegalWindow, "vertex " + std::to_string(added) + " is not a fresh vertex");
    info.eligible = prefix;
    const std::vector<VertexId> keep = sorted_copy(retained);
    VertexId w = 0;
    for (VertexId x : s.window_)
      if (!std::binary_search(keep.begin(), keep.end(), x)) w = x;

    // e*: maximum edge rank over the eligible prefix; the prefix is already in
    // (length, pair) order so the first maximum is the shortest one.
    std::size_t best = 0;
    int best_rank = -1;
    for (std::size_t j = 0; j < prefix; ++j) {
      int r = s.edge_rank(info.sorted[j].pair());
      if (r > best_rank) {
        best_rank = r;
        best = j;
      }
    }
    info.kept = info.sorted[best];
    const VertexId x_star = info.kept.u == w ? info.kept.v : info.kept.u;

    for (std::size_t j = 0; j < prefix; ++j) ++s.rank_[info.sorted[j].pair()];

    // Pairs attached through w now route through e* and then x*.
    for (VertexId y : keep) {
      if (y == x_star) continue;
      auto from = s.rank_.find(EmbeddingState::key(w, y));
      if (from == s.rank_.end()) continue;
      int& into = s.rank_[EmbeddingState::key(x_star, y)];
      into = std::max(into, from->second);
    }
    for (auto it = s.rank_.begin(); it != s.rank_.end();) {
      if (it->first.u == w || it->first.v == w)
        it = s.rank_.erase(it);
      else
        ++it;
    }

    s.forest_.push_back(info.kept);
    s.parent_[s.lengths_->index(w)] = s.lengths_->index(x_star);
    s.window_ = keep;
    add_window_vertex(s, added);

    const int bound = rank_bound(s.k_);
    for (const auto& [pair, r] : s.rank_)
      if (r > bound)
        throw Error(ErrorKind::RankBoundExceeded, "edge (" + std::to_string(pair.u) + "," + std::to_string(pair.v) +
                                                      ") has rank " + std::to_string(r) + " > " +
                                                      std::to_string(bound));
    return info;
  }
};

EmbeddingState EmbeddingState::initial(const LinearCompositionSequence& seq, const MetricGraph& lengths) {
  seq.validate();
  EmbeddingState s;
  TransitionAccess::fresh(s, seq.k, lengths);
  std::vector<VertexId> first = seq.initial;
  if (!seq.steps.empty()) first.push_back(seq.steps.front().added);
  for (VertexId v : first) {
    if (!lengths.has_vertex(v))
      throw Error(ErrorKind::MissingLength, "vertex " + std::to_string(v) + " missing from the length graph");
    TransitionAccess::add_window_vertex(s, v);
  }
  return s;
}

std::size_t EmbeddingState::slot(VertexId v) const {
  if (!lengths_->has_vertex(v) || !present_[lengths_->index(v)])
    throw Error(ErrorKind::VertexAbsent, "vertex " + std::to_string(v) + " is not in H");
  return lengths_->index(v);
}

std::size_t EmbeddingState::find(std::size_t i) const {
  while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
  return i;
}

bool EmbeddingState::contains(VertexId v) const {
  return lengths_->has_vertex(v) && present_[lengths_->index(v)];
}

std::vector<VertexId> EmbeddingState::vertices() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < present_.size(); ++i)
    if (present_[i]) out.push_back(lengths_->id(i));
  return out;
}

std::vector<Edge> EmbeddingState::edges() const {
  std::vector<Edge> out = forest_;
  for (std::size_t a = 0; a < window_.size(); ++a)
    for (std::size_t b = a + 1; b < window_.size(); ++b)
      out.push_back({window_[a], window_[b], required_length(*lengths_, window_[a], window_[b])});
  return out;
}

MetricGraph EmbeddingState::graph() const { return MetricGraph::build(vertices(), edges()); }

Rational EmbeddingState::length(VertexId a, VertexId b) const { return required_length(*lengths_, a, b); }

VertexId EmbeddingState::attachment(VertexId v) const { return lengths_->id(find(slot(v))); }

std::vector<Edge> EmbeddingState::canonical_path(VertexId u, VertexId v) const {
  slot(u);
  slot(v);
  // Path between two vertices of the same pendant tree, by BFS over forest edges.
  auto forest_path = [this](VertexId from, VertexId to) {
    std::map<VertexId, std::vector<const Edge*>> adj;
    for (const auto& e : forest_) {
      adj[e.u].push_back(&e);
      adj[e.v].push_back(&e);
    }
    std::map<VertexId, const Edge*> via{{from, nullptr}};
    std::vector<VertexId> queue{from};
    for (std::size_t h = 0; h < queue.size() && !via.contains(to); ++h)
      for (const Edge* e : adj[queue[h]]) {
        VertexId y = e->u == queue[h] ? e->v : e->u;
        if (via.emplace(y, e).second) queue.push_back(y);
      }
    std::vector<Edge> path;
    for (VertexId x = to; x != from;) {
      const Edge* e = via.at(x);
      path.push_back(*e);
      x = e->u == x ? e->v : e->u;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  const VertexId a = attachment(u), b = attachment(v);
  if (a == b) return forest_path(u, v);
  std::vector<Edge> path = forest_path(u, a);
  path.push_back({std::min(a, b), std::max(a, b), required_length(*lengths_, a, b)});
  for (auto& e : forest_path(b, v)) path.push_back(std::move(e));
  return path;
}

int EmbeddingState::edge_rank(VertexPair e) const {
  if (e.u == e.v || !std::binary_search(window_.begin(), window_.end(), e.u) ||
      !std::binary_search(window_.begin(), window_.end(), e.v))
    throw Error(ErrorKind::NotACliqueEdge,
                "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not inside the window");
  auto it = rank_.find(e);
  return it == rank_.end() ? 0 : it->second;
}

int EmbeddingState::max_edge_rank() const {
  int m = 0;
  for (const auto& [pair, r] : rank_) m = std::max(m, r);
  return m;
}

std::vector<Rational> sigma_probabilities(std::span<const Rational> sorted_lengths, const Rational& tau) {
  std::vector<Rational> out;
  for (std::size_t j = 0; j + 1 < sorted_lengths.size(); ++j) {
    const Rational& next = sorted_lengths[j + 1];
    out.push_back(next.is_zero() ? Rational(1) : min(Rational(1), tau * sorted_lengths[j] / next));
  }
  return out;
}

EligibleDraw eligible_set(std::span<const Rational> sorted_lengths, const Rational& tau, RandomStream& rng) {
  EligibleDraw draw;
  auto probs = sigma_probabilities(sorted_lengths, tau);
  bool open = true;
  for (const auto& p : probs) {
    bool sigma = rng.uniform() < p.to_double();
    draw.sigma.push_back(sigma);
    open = open && sigma;
    if (open) ++draw.prefix;
  }
  return draw;
}

std::vector<Edge> departing_edges(const EmbeddingState& state, std::span<const VertexId> retained) {
  const auto& window = state.window();
  std::vector<VertexId> keep = sorted_copy(retained);
  if (keep.size() != static_cast<std::size_t>(state.k()) || std::adjacent_find(keep.begin(), keep.end()) != keep.end() ||
      !std::includes(window.begin(), window.end(), keep.begin(), keep.end()))
    throw Error(ErrorKind::IllegalWindow, "retained window must be a " + std::to_string(state.k()) +
                                              "-subset of the current window");
  VertexId w = 0;
  for (VertexId x : window)
    if (!std::binary_search(keep.begin(), keep.end(), x)) w = x;
  std::vector<Edge> out;
  for (VertexId y : keep) out.push_back({std::min(w, y), std::max(w, y), state.length(w, y)});
  std::sort(out.begin(), out.end(), edge_order);
  return out;
}

TransitionInfo apply_transition(EmbeddingState& state, VertexId added, std::span<const VertexId> retained,
                                std::size_t eligible_prefix) {
  return TransitionAccess::apply(state, added, retained, eligible_prefix);
}

TransitionInfo step_transition(EmbeddingState& state, VertexId added, std::span<const VertexId> retained,
                               const Rational& tau, RandomStream& rng) {
  auto sorted = departing_edges(state, retained);
  std::vector<Rational> lens;
  for (const auto& e : sorted) lens.push_back(e.length);
  EligibleDraw draw = eligible_set(lens, tau, rng);
  return apply_transition(state, added, retained, draw.prefix);
}

MetricGraph finish_tree(const EmbeddingState& state) {
  auto all = state.edges();
  std::vector<Edge> tree(all.begin(), all.end() - static_cast<std::ptrdiff_t>(state.window().size() *
                                                                              (state.window().size() - 1) / 2));
  MetricGraph clique = MetricGraph::build(state.window(), std::vector<Edge>(all.begin() + tree.size(), all.end()));
  for (auto& e : minimum_spanning_tree(clique, state.window())) tree.push_back(std::move(e));
  return MetricGraph::build(state.vertices(), std::move(tree));
}

MetricGraph embed_pathwidthk(const LinearCompositionSequence& seq, const MetricGraph& lengths, RandomStream& rng,
                             const PwkOptions& options, PwkStats* stats) {
  const Rational tau = options.tau.value_or(default_tau(seq.k));
  EmbeddingState state = EmbeddingState::initial(seq, lengths);
  int max_rank = 0;
  for (std::size_t i = 1; i < seq.steps.size(); ++i) {
    step_transition(state, seq.steps[i].added, seq.steps[i - 1].window, tau, rng);
    max_rank = std::max(max_rank, state.max_edge_rank());
  }
  if (stats != nullptr) {
    stats->max_edge_rank = max_rank;
    stats->transitions = seq.steps.empty() ? 0 : seq.steps.size() - 1;
  }
  return finish_tree(state);
}

TreeDistribution enumerate_pwk_distribution(const LinearCompositionSequence& seq, const MetricGraph& lengths,
                                            const PwkOptions& options, std::size_t limit) {
  const Rational tau = options.tau.value_or(default_tau(seq.k));
  EmbeddingState start = EmbeddingState::initial(seq, lengths);

  // Prefix-length distributions depend only on the windows and lengths, so
  // they are computed up front from a throwaway replay.
  std::vector<std::vector<Rational>> prefix_probs;
  std::size_t outcomes = 1;
  {
    EmbeddingState replay = start;
    for (std::size_t i = 1; i < seq.steps.size(); ++i) {
      auto sorted = departing_edges(replay, seq.steps[i - 1].window);
      std::vector<Rational> lens;
      for (const auto& e : sorted) lens.push_back(e.length);
      auto sigma = sigma_probabilities(lens, tau);
      std::vector<Rational> probs(lens.size() + 1);  // index = prefix length
      Rational open(1);
      for (std::size_t j = 1; j <= lens.size(); ++j) {
        if (j == lens.size()) {
          probs[j] = open;
        } else {
          probs[j] = open * (Rational(1) - sigma[j - 1]);
          open *= sigma[j - 1];
        }
      }
      std::size_t support = static_cast<std::size_t>(
          std::count_if(probs.begin() + 1, probs.end(), [](const Rational& p) { return !p.is_zero(); }));
      if (outcomes > limit / support)
        throw Error(ErrorKind::TooManyOutcomes, "more than " + std::to_string(limit) + " outcomes");
      outcomes *= support;
      prefix_probs.push_back(std::move(probs));
      apply_transition(replay, seq.steps[i].added, seq.steps[i - 1].window, 1);
    }
  }

  std::map<std::vector<VertexPair>, std::pair<MetricGraph, Rational>> merged;
  std::function<void(const EmbeddingState&, std::size_t, const Rational&)> walk =
      [&](const EmbeddingState& state, std::size_t i, const Rational& prob) {
        if (i >= seq.steps.size()) {
          MetricGraph tree = finish_tree(state);
          std::vector<VertexPair> key;
          for (const auto& e : tree.edges()) key.push_back(e.pair());
          auto [it, inserted] = merged.try_emplace(std::move(key), tree, prob);
          if (!inserted) it->second.second += prob;
          return;
        }
        const auto& probs = prefix_probs[i - 1];
        for (std::size_t j = 1; j < probs.size(); ++j) {
          if (probs[j].is_zero()) continue;
          EmbeddingState next = state;
          apply_transition(next, seq.steps[i].added, seq.steps[i - 1].window, j);
          walk(next, i + 1, prob * probs[j]);
        }
      };
  walk(start, 1, Rational(1));

  TreeDistribution out;
  for (auto& [key, value] : merged) out.push_back({std::move(value.first), std::move(value.second)});
  return out;
}

}  // namespace pwtree
