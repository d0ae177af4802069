#include "doctest.h"
#include "oracles.hpp"
#include "pwtree/error.hpp"
#include "pwtree/graph.hpp"
#include "pwtree/json_io.hpp"
#include "pwtree/rational.hpp"

using namespace pwtree;

namespace {

MetricGraph triangle(Rational ab, Rational bc, Rational ac) {
  return MetricGraph::build({0, 1, 2}, {{0, 1, ab}, {1, 2, bc}, {0, 2, ac}});
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ParseError;
}

MetricGraph random_graph(int n, double p, RandomStream& rng) {
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) vs.push_back(static_cast<VertexId>(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p))
        es.push_back({VertexId(i), VertexId(j),
                      Rational(static_cast<std::int64_t>(rng.below(12)), 1 + static_cast<std::int64_t>(rng.below(3)))});
  return MetricGraph::build(vs, es);
}

}  // namespace

TEST_CASE("rational arithmetic stays exact across the small and big paths") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational::parse("-6/4") == Rational(-3, 2));
  CHECK(Rational::parse("7").to_string() == "7");
  Rational big(INT64_MAX);
  Rational sq = big * big;
  CHECK_FALSE(sq.is_small());
  CHECK(sq / big == big);
  CHECK((sq - sq).is_zero());
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("x"));
}

TEST_CASE("build rejects malformed graphs") {
  CHECK(MetricGraph::build({0, 1}, {{0, 1, Rational(1)}}).num_edges() == 1);
  CHECK(kind_of([] { MetricGraph::build({0}, {{0, 0, Rational(1)}}); }) == ErrorKind::LoopEdge);
  CHECK(kind_of([] { MetricGraph::build({0, 1}, {{0, 1, Rational(1)}, {1, 0, Rational(2)}}); }) ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { MetricGraph::build({0, 1}, {{0, 1, Rational(-1)}}); }) == ErrorKind::NegativeLength);
  CHECK(kind_of([] { MetricGraph::build({0, 1}, {{0, 5, Rational(1)}}); }) == ErrorKind::UnknownEndpoint);
  CHECK(kind_of([] { MetricGraph::build({0, 0}, {}); }) == ErrorKind::DuplicateVertex);
  // non-reduced input is accepted as is
  CHECK(*triangle(1, 2, 5).length(0, 2) == Rational(5));
}

TEST_CASE("shortest path metric") {
  auto path = oracle::unit_graph(3, {{0, 1}, {1, 2}});
  CHECK(shortest_path_metric(path).at(0, 2) == Distance(Rational(2)));
  auto isolated = oracle::unit_graph(2, {});
  CHECK(shortest_path_metric(isolated).at(0, 1).is_infinite());

  auto tri = triangle(1, 2, 5);
  Rational best;
  bool first = true;
  for (const auto& p : oracle::simple_paths(tri, 0, 2)) {
    Rational len = oracle::path_length(tri, p);
    if (first || len < best) best = len;
    first = false;
  }
  CHECK(best == Rational(3));
  CHECK(shortest_path_metric(tri).at(0, 2) == Distance(best));
}

TEST_CASE("shortest path metric matches Floyd-Warshall and is a pseudometric") {
  RandomStream rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(5 + trial % 20, 0.25, rng);
    auto d = shortest_path_metric(g);
    auto f = oracle::floyd(g);
    const std::size_t n = g.num_vertices();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d.at_index(i, i) == Distance());
      for (std::size_t j = 0; j < n; ++j) {
        if (f[i][j])
          REQUIRE(d.at_index(i, j) == Distance(*f[i][j]));
        else
          REQUIRE(d.at_index(i, j).is_infinite());
        REQUIRE(d.at_index(i, j) == d.at_index(j, i));
        for (std::size_t k = 0; k < n; ++k)
          REQUIRE(d.at_index(i, k) <= d.at_index(i, j) + d.at_index(j, k));
      }
    }
  }
}

TEST_CASE("reduce lengths") {
  CHECK(reduce_lengths(triangle(1, 2, 5)) == triangle(1, 2, 3));
  CHECK(reduce_lengths(triangle(1, 2, 3)) == triangle(1, 2, 3));
  auto zero = MetricGraph::build({0, 1}, {{0, 1, Rational(0)}});
  CHECK(reduce_lengths(zero) == zero);

  RandomStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(10, 0.4, rng);
    auto r = reduce_lengths(g);
    CHECK(reduce_lengths(r) == r);
    CHECK(is_reduced(r));
    auto before = oracle::floyd(g);
    auto after = oracle::floyd(r);
    for (std::size_t i = 0; i < g.num_vertices(); ++i)
      for (std::size_t j = 0; j < g.num_vertices(); ++j) CHECK(before[i][j] == after[i][j]);
  }
}

TEST_CASE("tree predicate") {
  CHECK(is_tree(oracle::unit_graph(3, {{0, 1}, {1, 2}})));
  CHECK_FALSE(is_tree(triangle(1, 1, 1)));
  CHECK_FALSE(is_tree(oracle::unit_graph(4, {{0, 1}, {2, 3}})));
  CHECK(is_tree(oracle::unit_graph(1, {})));
}

TEST_CASE("minimum spanning tree") {
  std::vector<VertexId> all{0, 1, 2};
  auto unit = minimum_spanning_tree(triangle(1, 1, 1), all);
  REQUIRE(unit.size() == 2);
  CHECK(unit[0].pair() == VertexPair{0, 1});
  CHECK(unit[1].pair() == VertexPair{0, 2});

  auto mst = minimum_spanning_tree(triangle(1, 2, 3), all);
  CHECK(total_length(mst) == Rational(3));
  CHECK(*oracle::brute_mst_weight(triangle(1, 2, 3)) == Rational(3));

  std::vector<VertexId> one{1};
  CHECK(minimum_spanning_tree(triangle(1, 2, 3), one).empty());
  std::vector<VertexId> split{0, 2};
  CHECK(kind_of([&] { minimum_spanning_tree(oracle::unit_graph(3, {{0, 1}, {1, 2}}), split); }) ==
        ErrorKind::DisconnectedSubset);

  RandomStream rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_graph(4 + trial % 5, 0.6, rng);
    if (!is_connected(g) || g.num_edges() > 16) continue;
    std::vector<VertexId> vs(g.vertices().begin(), g.vertices().end());
    auto t = minimum_spanning_tree(g, vs);
    CHECK(is_tree(MetricGraph::build(vs, t)));
    CHECK(total_length(t) == *oracle::brute_mst_weight(g));
  }
}

TEST_CASE("complete on clique") {
  auto c4 = oracle::unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  std::vector<VertexId> ac{0, 2};
  auto done = complete_on_clique(c4, ac);
  CHECK(*done.length(0, 2) == Rational(2));
  CHECK(done.num_edges() == 5);
  std::vector<VertexId> ab{0, 1};
  CHECK(complete_on_clique(c4, ab) == c4);
  std::vector<VertexId> across{0, 3};
  CHECK(kind_of([&] { complete_on_clique(oracle::unit_graph(4, {{0, 1}, {2, 3}}), across); }) ==
        ErrorKind::InfiniteDistance);
}

TEST_CASE("graph json round trip") {
  auto g = triangle(Rational(1, 2), 2, 5);
  auto j = graph_to_json(g);
  CHECK(j["edges"][0][2] == "1/2");
  CHECK(graph_from_json(j) == g);
  auto parsed = graph_from_json(Json::parse(R"({"vertices":[0,1],"edges":[[0,1,3]]})"));
  CHECK(*parsed.length(0, 1) == Rational(3));
  CHECK(kind_of([] { graph_from_json(Json::parse(R"({"vertices":[0,1]})")); }) == ErrorKind::ParseError);
  CHECK(instance_hash(g) == instance_hash(graph_from_json(j)));
  CHECK(instance_hash(g) != instance_hash(triangle(1, 2, 5)));
}
