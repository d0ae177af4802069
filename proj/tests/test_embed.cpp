#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pwtree/embed_pw2.hpp"
#include "pwtree/embed_pwk.hpp"
#include "pwtree/error.hpp"
#include "pwtree/instances.hpp"

using namespace pwtree;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ParseError;
}

LinearCompositionSequence seq_of(int k, std::vector<VertexId> initial, std::vector<LinearCompositionSequence::Step> steps) {
  LinearCompositionSequence s;
  s.k = k;
  s.initial = std::move(initial);
  s.steps = std::move(steps);
  return s;
}

std::set<VertexPair> pairs_of(const MetricGraph& g) {
  std::set<VertexPair> out;
  for (const auto& e : g.edges()) out.insert(e.pair());
  return out;
}

std::set<VertexPair> pairs_of(const std::vector<Edge>& es) {
  std::set<VertexPair> out;
  for (const auto& e : es) out.insert(e.pair());
  return out;
}

bool is_spanning_subtree(const MetricGraph& tree, const MetricGraph& composed) {
  if (!std::equal(tree.vertices().begin(), tree.vertices().end(), composed.vertices().begin(),
                  composed.vertices().end()))
    return false;
  if (!is_tree(tree)) return false;
  for (const auto& e : tree.edges()) {
    auto len = composed.length(e.u, e.v);
    if (!len || *len != e.length) return false;
  }
  return true;
}

// Empirical outcome frequencies against exact probabilities, 5 sigma.
template <typename Sampler>
void check_sampling_matches(const TreeDistribution& dist, Sampler sample, int draws) {
  std::map<std::set<VertexPair>, int> seen;
  for (int i = 0; i < draws; ++i) ++seen[pairs_of(sample(i))];
  std::size_t matched = 0;
  for (const auto& o : dist) {
    double p = o.probability.to_double();
    double freq = seen.count(pairs_of(o.tree)) ? seen[pairs_of(o.tree)] / double(draws) : 0.0;
    double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
    CHECK(std::abs(freq - p) <= 5 * sigma + 1e-9);
    matched += seen.count(pairs_of(o.tree));
  }
  CHECK(matched == seen.size());  // nothing sampled outside the support
}

// Canonical path by exhaustive search: all simple paths in H with at most one
// edge inside the window; exactly one must exist.
std::set<VertexPair> searched_canonical_path(const MetricGraph& h, const std::vector<VertexId>& window, VertexId a,
                                             VertexId b) {
  std::set<VertexId> w(window.begin(), window.end());
  std::vector<std::set<VertexPair>> found;
  for (const auto& p : oracle::simple_paths(h, h.index(a), h.index(b))) {
    std::set<VertexPair> es;
    int inside = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      VertexPair e = VertexPair::of(h.id(p[i - 1]), h.id(p[i]));
      es.insert(e);
      inside += w.contains(e.u) && w.contains(e.v);
    }
    if (inside <= 1) found.push_back(es);
  }
  REQUIRE(found.size() == 1);
  return found[0];
}

// H minus the clique is a forest whose components each meet one clique vertex.
void check_structure(const EmbeddingState& s) {
  const auto& win = s.window();
  std::set<VertexId> w(win.begin(), win.end());
  auto h = s.graph();
  for (std::size_t a = 0; a < win.size(); ++a)
    for (std::size_t b = a + 1; b < win.size(); ++b) REQUIRE(h.has_edge(win[a], win[b]));
  std::vector<Edge> rest;
  for (const auto& e : h.edges())
    if (!(w.contains(e.u) && w.contains(e.v))) rest.push_back(e);
  auto forest = MetricGraph::build(std::vector<VertexId>(h.vertices().begin(), h.vertices().end()), rest);
  for (const auto& comp : connected_components(forest)) {
    auto sub = forest.induced(comp);
    REQUIRE(is_tree(sub));
    int touches = 0;
    for (VertexId v : comp) touches += w.contains(v);
    REQUIRE(touches == 1);
  }
}

// Replays embed_pathwidthk transition by transition, recomputing ranks per
// vertex pair by brute force and checking the state against them.
void replay_with_rank_oracle(const LinearCompositionSequence& seq, const MetricGraph& lengths, RandomStream& rng) {
  EmbeddingState s = EmbeddingState::initial(seq, lengths);
  std::map<VertexPair, int> rank;
  const Rational tau = default_tau(seq.k);
  for (std::size_t i = 1; i < seq.steps.size(); ++i) {
    check_structure(s);
    const auto verts = s.vertices();
    const auto h = s.graph();
    const auto win = s.window();
    std::map<VertexPair, std::set<VertexPair>> path;
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = a + 1; b < verts.size(); ++b) {
        auto p = searched_canonical_path(h, win, verts[a], verts[b]);
        REQUIRE(pairs_of(s.canonical_path(verts[a], verts[b])) == p);
        path[{verts[a], verts[b]}] = p;
      }
    auto brute_edge_rank = [&](VertexPair e) {
      int best = 0;
      for (const auto& [pr, p] : path)
        if (p.contains(e) && rank.count(pr)) best = std::max(best, rank[pr]);
      return best;
    };
    for (std::size_t a = 0; a < win.size(); ++a)
      for (std::size_t b = a + 1; b < win.size(); ++b)
        REQUIRE(s.edge_rank({win[a], win[b]}) == brute_edge_rank({win[a], win[b]}));

    const auto& retained = seq.steps[i - 1].window;
    VertexId w = 0;
    for (VertexId x : win)
      if (std::find(retained.begin(), retained.end(), x) == retained.end()) w = x;
    std::vector<Edge> sorted;
    for (VertexId y : retained) sorted.push_back({std::min(w, y), std::max(w, y), *lengths.length(w, y)});
    std::sort(sorted.begin(), sorted.end(), [](const Edge& x, const Edge& y) {
      return x.length != y.length ? x.length < y.length : x.pair() < y.pair();
    });
    std::vector<Rational> lens;
    for (const auto& e : sorted) lens.push_back(e.length);
    const std::size_t prefix = eligible_set(lens, tau, rng).prefix;

    std::size_t expect_kept = 0;
    for (std::size_t j = 1; j < prefix; ++j)
      if (brute_edge_rank(sorted[j].pair()) > brute_edge_rank(sorted[expect_kept].pair())) expect_kept = j;

    auto info = apply_transition(s, seq.steps[i].added, retained, prefix);
    REQUIRE(info.sorted.size() == sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) REQUIRE(info.sorted[j].pair() == sorted[j].pair());
    REQUIRE(info.kept.pair() == sorted[expect_kept].pair());

    std::set<VertexPair> eligible;
    for (std::size_t j = 0; j < prefix; ++j) eligible.insert(sorted[j].pair());
    for (const auto& [pr, p] : path)
      for (const auto& e : p)
        if (eligible.contains(e)) {
          ++rank[pr];
          break;
        }
    for (const auto& [pr, r] : rank) REQUIRE(r <= rank_bound(seq.k));
    REQUIRE(s.max_edge_rank() <= rank_bound(seq.k));
  }
  check_structure(s);
}

}  // namespace

TEST_CASE("pw2 deletion probability") {
  CHECK(pw2_deletion_probability(Pw2Case::SameWindow, 1, 1, 0) == Rational(1, 2));
  CHECK(pw2_deletion_probability(Pw2Case::MovedWindow, 1, 0, 100) == Rational(12, 101));
  CHECK(pw2_deletion_probability(Pw2Case::MovedWindow, 1, 0, 1) == Rational(1));
  CHECK(pw2_deletion_probability(Pw2Case::SameWindow, 3, 2, 0) == Rational(3, 5));
  CHECK(kind_of([] { pw2_deletion_probability(Pw2Case::SameWindow, 0, 0, 1); }) == ErrorKind::DegenerateZero);
  CHECK(kind_of([] { pw2_deletion_probability(Pw2Case::MovedWindow, 0, 1, 0); }) == ErrorKind::DegenerateZero);
  CHECK(kind_of([] { pw2_deletion_probability(Pw2Case::SameWindow, -1, 2, 0); }) == ErrorKind::NegativeLength);
}

TEST_CASE("pw2 on the unit triangle") {
  auto seq = seq_of(2, {0, 1}, {{2, {0, 1}}});
  auto tri = oracle::unit_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  auto dist = enumerate_pw2_distribution(seq, tri);
  REQUIRE(dist.size() == 2);
  for (const auto& o : dist) CHECK(o.probability == Rational(1, 2));
  CHECK(expected_tree_distance(dist, 0, 2) == Rational(3, 2));
  for (const auto& o : dist) CHECK(o.tree.has_edge(0, 1));
}

TEST_CASE("pw2 on a weighted triangle deletes the longer edge more often") {
  auto seq = seq_of(2, {0, 1}, {{2, {0, 1}}});
  auto tri = MetricGraph::build({0, 1, 2}, {{0, 1, 1}, {1, 2, 2}, {0, 2, 3}});
  auto dist = enumerate_pw2_distribution(seq, tri);
  // delete (0,2) w.p. 3/5, else (1,2): E[d_T(0,2)] = 3/5 * 3 + 2/5 * 3
  CHECK(expected_tree_distance(dist, 0, 2) == Rational(3));
  CHECK(expected_tree_distance(dist, 1, 2) == Rational(3, 5) * 2 + Rational(2, 5) * 4);
}

TEST_CASE("pw2 on the unit 4-cycle") {
  auto c = cycle(4);
  auto lengths = composed_metric(c.composition, c.graph);
  auto dist = enumerate_pw2_distribution(c.composition, lengths);
  CHECK(dist.size() <= 4);
  CHECK(total_probability(dist) == Rational(1));
  // Both moves saturate (12 * 1/2 and 12 * 1/3 exceed 1), so the outcome is the star at 0.
  REQUIRE(dist.size() == 1);
  CHECK(pairs_of(dist[0].tree) == std::set<VertexPair>{{0, 1}, {0, 2}, {0, 3}});
  for (const auto& e : c.graph.edges())
    CHECK(expected_tree_distance(dist, e.u, e.v) <= Rational(108) * e.length);
}

TEST_CASE("pw2 mirrored move when the surviving window edge is the deletion candidate") {
  // window {0,1}, add 2, keep {1,2}: vertex 0 leaves, so {0,2} is the candidate
  auto seq = seq_of(2, {0, 1}, {{2, {1, 2}}});
  auto g = MetricGraph::build({0, 1, 2}, {{0, 1, 10}, {1, 2, 1}, {0, 2, 10}});
  auto dist = enumerate_pw2_distribution(seq, g);
  // P[delete {0,2}] = min{1, 12 * 10 / (10 + 10)} = 1
  REQUIRE(dist.size() == 1);
  CHECK(pairs_of(dist[0].tree) == std::set<VertexPair>{{0, 1}, {1, 2}});

  auto g2 = MetricGraph::build({0, 1, 2}, {{0, 1, 100}, {1, 2, 100}, {0, 2, 1}});
  auto d2 = enumerate_pw2_distribution(seq, g2);
  // P[delete {0,2}] = 12/101, otherwise {0,1} goes
  REQUIRE(d2.size() == 2);
  for (const auto& o : d2) {
    if (o.tree.has_edge(0, 2))
      CHECK(o.probability == Rational(89, 101));
    else
      CHECK(o.probability == Rational(12, 101));
    CHECK(o.tree.has_edge(1, 2));
  }
}

TEST_CASE("pw2 zero lengths split evenly") {
  auto seq = seq_of(2, {0, 1}, {{2, {0, 1}}});
  auto g = MetricGraph::build({0, 1, 2}, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}});
  auto dist = enumerate_pw2_distribution(seq, g);
  REQUIRE(dist.size() == 2);
  for (const auto& o : dist) CHECK(o.probability == Rational(1, 2));
}

TEST_CASE("pw2 rejects other widths and missing lengths") {
  auto seq = seq_of(1, {0}, {{1, {1}}});
  RandomStream rng(1);
  CHECK(kind_of([&] { embed_pathwidth2(seq, oracle::unit_graph(2, {{0, 1}}), rng); }) == ErrorKind::WrongWidth);
  auto tri = seq_of(2, {0, 1}, {{2, {0, 1}}});
  CHECK(kind_of([&] { embed_pathwidth2(tri, oracle::unit_graph(3, {{0, 1}, {1, 2}}), rng); }) ==
        ErrorKind::MissingLength);
  auto zero = seq_of(2, {0, 1}, {});
  auto one = enumerate_pw2_distribution(zero, oracle::unit_graph(2, {{0, 1}}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].probability == Rational(1));
}

TEST_CASE("pw2 samples follow the enumerated distribution") {
  RandomStream gen(41);
  for (int trial = 0; trial < 6; ++trial) {
    auto inst = random_pathwidth_graph(2, 7 + trial, gen);
    auto lengths = composed_metric(inst.composition, inst.graph);
    auto dist = enumerate_pw2_distribution(inst.composition, lengths);
    CHECK(total_probability(dist) == Rational(1));
    for (const auto& o : dist) CHECK(is_spanning_subtree(o.tree, lengths));
    for (const auto& e : inst.graph.edges())
      CHECK(expected_tree_distance(dist, e.u, e.v) <= Rational(108) * e.length);
    check_sampling_matches(
        dist,
        [&](int i) {
          auto rng = RandomStream::for_sample(trial, i);
          return embed_pathwidth2(inst.composition, lengths, rng);
        },
        4000);
  }
}

TEST_CASE("sigma probabilities and eligible sets") {
  std::vector<Rational> flat{1, 1, 1};
  auto p = sigma_probabilities(flat, Rational(8));
  REQUIRE(p.size() == 2);
  CHECK(p[0] == Rational(1));
  CHECK(p[1] == Rational(1));
  RandomStream rng(2);
  for (int i = 0; i < 50; ++i) CHECK(eligible_set(flat, Rational(8), rng).prefix == 3);

  std::vector<Rational> spread{1, 100};
  CHECK(sigma_probabilities(spread, Rational(8))[0] == Rational(8, 100));
  int two = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) two += eligible_set(spread, Rational(8), rng).prefix == 2;
  CHECK(std::abs(two / double(draws) - 0.08) < 5 * std::sqrt(0.08 * 0.92 / draws));

  std::vector<Rational> zero_first{0, 5};
  CHECK(sigma_probabilities(zero_first, Rational(8))[0] == Rational(0));
  for (int i = 0; i < 50; ++i) CHECK(eligible_set(zero_first, Rational(8), rng).prefix == 1);

  std::vector<Rational> zeros{0, 0};
  CHECK(sigma_probabilities(zeros, Rational(8))[0] == Rational(1));

  std::vector<Rational> single{3};
  auto draw = eligible_set(single, Rational(4), rng);
  CHECK(draw.prefix == 1);
  CHECK(draw.sigma.empty());
}

TEST_CASE("embedding state basics") {
  // composed edges 01 02 12 13 23, all unit
  auto seq = seq_of(2, {0, 1}, {{2, {1, 2}}, {3, {2, 3}}});
  auto lengths = oracle::unit_graph(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
  auto s = EmbeddingState::initial(seq, lengths);
  CHECK(s.window() == std::vector<VertexId>{0, 1, 2});
  CHECK(s.canonical_path(1, 1).empty());
  CHECK(pairs_of(s.canonical_path(0, 2)) == std::set<VertexPair>{{0, 2}});
  for (auto e : {VertexPair{0, 1}, VertexPair{0, 2}, VertexPair{1, 2}}) CHECK(s.edge_rank(e) == 0);
  CHECK(kind_of([&] { s.canonical_path(0, 3); }) == ErrorKind::VertexAbsent);
  CHECK(kind_of([&] { s.edge_rank({0, 3}); }) == ErrorKind::NotACliqueEdge);

  // all unit, fresh ranks: both edges eligible, e* = e_1 = (0,1), (0,2) deleted
  auto info = apply_transition(s, 3, seq.steps[0].window, 2);
  CHECK(info.kept.pair() == VertexPair{0, 1});
  CHECK(info.eligible == 2);
  CHECK(pairs_of(s.graph()) == std::set<VertexPair>{{0, 1}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(s.window() == std::vector<VertexId>{1, 2, 3});
  CHECK(s.attachment(0) == 1);
  // pair (0,2) used (0,2), an eligible edge; its path now uses (1,2)
  CHECK(s.edge_rank({1, 2}) >= 1);
  CHECK(pairs_of(s.canonical_path(0, 2)) == std::set<VertexPair>{{0, 1}, {1, 2}});
  CHECK(s.max_edge_rank() <= rank_bound(2));

  auto illegal = EmbeddingState::initial(seq, lengths);
  std::vector<VertexId> bad{0, 3};
  CHECK(kind_of([&] { departing_edges(illegal, bad); }) == ErrorKind::IllegalWindow);
}

TEST_CASE("k = 1 transitions only grow a path") {
  auto seq = seq_of(1, {0}, {{1, {1}}, {2, {2}}, {3, {3}}});
  auto lengths = oracle::unit_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  RandomStream rng(4);
  PwkStats stats;
  auto t = embed_pathwidthk(seq, lengths, rng, {}, &stats);
  CHECK(t == lengths);
  CHECK(stats.transitions == 2);
  CHECK(stats.max_edge_rank <= 1);
}

TEST_CASE("pwk zero transitions give the clique MST") {
  auto seq = seq_of(2, {0, 1}, {{2, {0, 1}}});
  auto tri = oracle::unit_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  auto dist = enumerate_pwk_distribution(seq, tri);
  REQUIRE(dist.size() == 1);
  CHECK(dist[0].probability == Rational(1));
  CHECK(dist[0].tree.num_edges() == 2);
  auto m = shortest_path_metric(dist[0].tree);
  for (VertexId a = 0; a < 3; ++a)
    for (VertexId b = a + 1; b < 3; ++b) CHECK(m.at(a, b) <= Distance(Rational(2)));
}

TEST_CASE("pwk on the unit 4-cycle") {
  auto c = cycle(4);
  auto lengths = composed_metric(c.composition, c.graph);
  auto dist = enumerate_pwk_distribution(c.composition, lengths);
  CHECK(total_probability(dist) == Rational(1));
  for (const auto& o : dist) {
    CHECK(is_spanning_subtree(o.tree, lengths));
    auto m = shortest_path_metric(o.tree);
    for (VertexId a = 0; a < 4; ++a)
      for (VertexId b = a + 1; b < 4; ++b) CHECK(m.at(a, b) <= Distance(Rational(3)));
  }
  check_sampling_matches(
      dist,
      [&](int i) {
        auto rng = RandomStream::for_sample(99, i);
        return embed_pathwidthk(c.composition, lengths, rng);
      },
      2000);
}

TEST_CASE("pwk ranks agree with a per-pair replay") {
  RandomStream gen(57);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 8; ++trial) {
      auto inst = random_pathwidth_graph(k, 6 + trial % 5, gen);
      auto lengths = composed_metric(inst.composition, inst.graph);
      replay_with_rank_oracle(inst.composition, lengths, gen);
    }
  for (int n = 5; n <= 10; ++n) {
    auto c = cycle(n);
    replay_with_rank_oracle(c.composition, composed_metric(c.composition, c.graph), gen);
  }
}

TEST_CASE("pwk samples follow the enumerated distribution and stay in the target family") {
  RandomStream gen(63);
  for (int k = 2; k <= 3; ++k)
    for (int trial = 0; trial < 4; ++trial) {
      auto inst = random_pathwidth_graph(k, 7 + trial, gen);
      auto lengths = composed_metric(inst.composition, inst.graph);
      auto dist = enumerate_pwk_distribution(inst.composition, lengths);
      CHECK(total_probability(dist) == Rational(1));
      for (const auto& o : dist) {
        CHECK(is_spanning_subtree(o.tree, lengths));
        CHECK(tree_pathwidth(o.tree) <= k);
      }
      check_sampling_matches(
          dist,
          [&](int i) {
            auto rng = RandomStream::for_sample(1000 + trial, i);
            return embed_pathwidthk(inst.composition, lengths, rng);
          },
          3000);
    }
}

TEST_CASE("enumeration refuses oversized outcome spaces") {
  auto c = cycle(40, std::vector<Rational>(40, Rational(1)));
  std::vector<Rational> lens;
  for (int i = 0; i < 40; ++i) lens.push_back(Rational(1 + i % 7, 1 + i % 3));
  auto w = cycle(40, lens);
  auto lengths = composed_metric(w.composition, w.graph);
  CHECK(kind_of([&] { enumerate_pw2_distribution(w.composition, lengths, kPw2Tau, 4); }) ==
        ErrorKind::TooManyOutcomes);
  // chords longer than tau make every later step branch
  CHECK(kind_of([&] { enumerate_pwk_distribution(c.composition, composed_metric(c.composition, c.graph)); }) ==
        ErrorKind::TooManyOutcomes);
  auto small = cycle(12);
  CHECK_NOTHROW(enumerate_pwk_distribution(small.composition, composed_metric(small.composition, small.graph)));
}
