#include "pwtree/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

// Rows of target distances from the image of every source vertex.
std::vector<std::vector<Distance>> image_distance_rows(const MetricGraph& source, const EmbeddingSample& sample) {
  const bool tree = is_tree(sample.target);
  std::vector<std::vector<Distance>> rows;
  rows.reserve(source.num_vertices());
  for (std::size_t i = 0; i < source.num_vertices(); ++i) {
    std::size_t from = sample.target.index(sample.image[i]);
    std::vector<Distance> row;
    if (tree) {
      auto d = tree_distances_from(sample.target, from);
      row.assign(d.begin(), d.end());
    } else {
      row = shortest_paths_from(sample.target, from);
    }
    std::vector<Distance> mapped;
    mapped.reserve(source.num_vertices());
    for (std::size_t j = 0; j < source.num_vertices(); ++j) mapped.push_back(row[sample.target.index(sample.image[j])]);
    rows.push_back(std::move(mapped));
  }
  return rows;
}

// Parent pointers and root distances for O(depth) distance queries.
struct RootedTree {
  explicit RootedTree(const MetricGraph& t) : parent(t.num_vertices()), depth(t.num_vertices(), 0),
                                              to_root(t.num_vertices()) {
    const std::size_t n = t.num_vertices();
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    parent[0] = 0;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (const auto& inc : t.neighbors(x))
        if (!seen[inc.to]) {
          seen[inc.to] = 1;
          parent[inc.to] = x;
          depth[inc.to] = depth[x] + 1;
          to_root[inc.to] = to_root[x] + t.edges()[inc.edge].length;
          stack.push_back(inc.to);
        }
    }
  }

  Rational distance(std::size_t a, std::size_t b) const {
    std::size_t x = a, y = b;
    while (depth[x] > depth[y]) x = parent[x];
    while (depth[y] > depth[x]) y = parent[y];
    while (x != y) {
      x = parent[x];
      y = parent[y];
    }
    return to_root[a] + to_root[b] - to_root[x] - to_root[x];
  }

  std::vector<std::size_t> parent;
  std::vector<std::size_t> depth;
  std::vector<Rational> to_root;
};

struct Measured {
  std::size_t a, b;  // source indices
  Rational d;
};

struct BlockResult {
  std::vector<double> sum, sumsq, zero_sum;
  std::size_t violations = 0;
  std::vector<Violation> first;
};

Json violation_json(const Violation& v) {
  return Json{{"u", v.u}, {"v", v.v}, {"source", v.source_distance.to_string()},
              {"target", v.target_distance.to_string()}};
}

}  // namespace

EmbeddingSample EmbeddingSample::identity(const MetricGraph& source, MetricGraph target) {
  EmbeddingSample s{std::move(target), {}};
  for (VertexId v : source.vertices()) {
    if (!s.target.has_vertex(v))
      throw Error(ErrorKind::UnknownVertex, "target lacks source vertex " + std::to_string(v));
    s.image.push_back(v);
  }
  return s;
}

NonContractionVerdict check_noncontraction(const MetricGraph& source, const EmbeddingSample& sample) {
  return check_noncontraction(source, shortest_path_metric(source), sample);
}

NonContractionVerdict check_noncontraction(const MetricGraph& source, const DistanceMatrix& source_metric,
                                           const EmbeddingSample& sample) {
  NonContractionVerdict verdict;
  auto rows = image_distance_rows(source, sample);
  const std::size_t n = source.num_vertices();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rows[i][j] < source_metric.at_index(i, j)) {
        verdict.passed = false;
        verdict.violations.push_back({source.id(i), source.id(j), source_metric.at_index(i, j), rows[i][j]});
      }
  return verdict;
}

StretchReport estimate_distortion(const MetricGraph& g, const Embedder& embedder, std::size_t num_samples,
                                  std::uint64_t seed, const HarnessOptions& options) {
  if (num_samples == 0) throw Error(ErrorKind::BadSpec, "need at least one sample");
  const std::size_t n = g.num_vertices();
  const DistanceMatrix metric = shortest_path_metric(g);

  std::vector<Measured> measured;
  std::vector<std::pair<std::size_t, std::size_t>> zero_pairs;
  if (options.mode == StretchMode::Edges) {
    for (const auto& e : g.edges()) {
      std::size_t a = g.index(e.u), b = g.index(e.v);
      const Distance& d = metric.at_index(a, b);
      if (d.value().is_zero())
        zero_pairs.emplace_back(a, b);
      else
        measured.push_back({a, b, d.value()});
    }
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const Distance& d = metric.at_index(a, b);
        if (d.is_infinite()) continue;
        if (d.value().is_zero())
          zero_pairs.emplace_back(a, b);
        else
          measured.push_back({a, b, d.value()});
      }
  }

  const bool need_rows = options.check_noncontraction || options.mode == StretchMode::AllPairs;
  auto run_sample = [&](std::size_t index, BlockResult& out) {
    RandomStream rng = RandomStream::for_sample(seed, index);
    MetricGraph tree = embedder(rng);
    if (!std::equal(tree.vertices().begin(), tree.vertices().end(), g.vertices().begin(), g.vertices().end()) ||
        !is_tree(tree))
      throw Error(ErrorKind::InvariantViolated, "embedder did not return a spanning tree on the source vertices");
    if (need_rows) {
      std::vector<std::vector<Rational>> rows(n);
      for (std::size_t a = 0; a < n; ++a) rows[a] = tree_distances_from(tree, a);
      if (options.check_noncontraction)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b)
            if (Distance(rows[a][b]) < metric.at_index(a, b)) {
              ++out.violations;
              if (out.first.size() < options.max_reported_violations)
                out.first.push_back({g.id(a), g.id(b), metric.at_index(a, b), rows[a][b]});
            }
      for (std::size_t p = 0; p < measured.size(); ++p) {
        double r = (rows[measured[p].a][measured[p].b] / measured[p].d).to_double();
        out.sum[p] += r;
        out.sumsq[p] += r * r;
      }
      for (std::size_t p = 0; p < zero_pairs.size(); ++p)
        out.zero_sum[p] += rows[zero_pairs[p].first][zero_pairs[p].second].to_double();
    } else {
      RootedTree rooted(tree);
      for (std::size_t p = 0; p < measured.size(); ++p) {
        double r = (rooted.distance(measured[p].a, measured[p].b) / measured[p].d).to_double();
        out.sum[p] += r;
        out.sumsq[p] += r * r;
      }
      for (std::size_t p = 0; p < zero_pairs.size(); ++p)
        out.zero_sum[p] += rooted.distance(zero_pairs[p].first, zero_pairs[p].second).to_double();
    }
  };

  const std::size_t block = std::max<std::size_t>(1, options.block_size);
  const std::size_t num_blocks = (num_samples + block - 1) / block;
  std::vector<BlockResult> blocks(num_blocks);
  auto run_block = [&](std::size_t b) {
    BlockResult& out = blocks[b];
    out.sum.assign(measured.size(), 0.0);
    out.sumsq.assign(measured.size(), 0.0);
    out.zero_sum.assign(zero_pairs.size(), 0.0);
    for (std::size_t s = b * block; s < std::min(num_samples, (b + 1) * block); ++s) run_sample(s, out);
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, num_blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t b = t; b < num_blocks; b += threads) run_block(b);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  StretchReport report;
  report.seed = seed;
  report.samples = num_samples;
  report.mode = options.mode == StretchMode::Edges ? "edges" : "all_pairs";
  report.noncontraction_checked = options.check_noncontraction;
  std::vector<double> sum(measured.size(), 0.0), sumsq(measured.size(), 0.0), zero(zero_pairs.size(), 0.0);
  for (const auto& b : blocks) {
    for (std::size_t p = 0; p < measured.size(); ++p) {
      sum[p] += b.sum[p];
      sumsq[p] += b.sumsq[p];
    }
    for (std::size_t p = 0; p < zero_pairs.size(); ++p) zero[p] += b.zero_sum[p];
    report.noncontraction_violations += b.violations;
    for (const auto& v : b.first)
      if (report.first_violations.size() < options.max_reported_violations) report.first_violations.push_back(v);
  }
  const double count = static_cast<double>(num_samples);
  for (std::size_t p = 0; p < measured.size(); ++p) {
    PairStretch ps{g.id(measured[p].a), g.id(measured[p].b), measured[p].d, sum[p] / count, 0.0};
    if (num_samples > 1) {
      double var = std::max(0.0, (sumsq[p] - sum[p] * sum[p] / count) / (count - 1));
      ps.std_error = std::sqrt(var / count);
    }
    report.pairs.push_back(std::move(ps));
  }
  for (std::size_t p = 0; p < zero_pairs.size(); ++p)
    report.zero_distance_pairs.push_back({g.id(zero_pairs[p].first), g.id(zero_pairs[p].second), zero[p] / count});
  for (std::size_t p = 0; p < report.pairs.size(); ++p)
    if (report.pairs[p].mean > report.d_hat) {
      report.d_hat = report.pairs[p].mean;
      report.d_hat_pair = p;
    }
  report.instance_hash = instance_hash(g);
  return report;
}

Json StretchReport::to_json() const {
  Json j;
  j["instance_hash"] = instance_hash;
  j["seed"] = seed;
  j["samples"] = samples;
  j["mode"] = mode;
  j["d_hat"] = d_hat;
  if (!pairs.empty()) {
    j["d_hat_pair"] = Json::array({pairs[d_hat_pair].u, pairs[d_hat_pair].v});
    j["d_hat_stderr"] = d_hat_stderr();
  }
  j["bound"] = bound ? Json(*bound) : Json(nullptr);
  j["tolerance"] = "3 standard errors";
  Json nc;
  nc["checked"] = noncontraction_checked;
  nc["violations"] = noncontraction_violations;
  nc["examples"] = Json::array();
  for (const auto& v : first_violations) nc["examples"].push_back(violation_json(v));
  j["noncontraction"] = std::move(nc);
  j["pairs"] = Json::array();
  for (const auto& p : pairs)
    j["pairs"].push_back(Json{{"u", p.u}, {"v", p.v}, {"d_G", p.source_distance.to_string()}, {"mean", p.mean},
                              {"stderr", p.std_error}});
  j["zero_distance_pairs"] = Json::array();
  for (const auto& z : zero_distance_pairs)
    j["zero_distance_pairs"].push_back(Json{{"u", z.u}, {"v", z.v}, {"mean_d_T", z.mean_target_distance}});
  Json crit = Json::object();
  for (const auto& [name, ok] : criteria) crit[name] = ok;
  j["criteria"] = std::move(crit);
  return j;
}

AverageStretch average_edge_stretch(const MetricGraph& g, const EmbeddingSample& sample) {
  if (g.num_edges() == 0) throw Error(ErrorKind::EmptyEdgeSet, "graph has no edges");
  RootedTree rooted(sample.target);
  const bool tree = is_tree(sample.target);
  Rational total, ratio_total;
  std::int64_t positive = 0;
  for (const auto& e : g.edges()) {
    std::size_t a = sample.target.index(sample.image[g.index(e.u)]);
    std::size_t b = sample.target.index(sample.image[g.index(e.v)]);
    Rational d = tree ? rooted.distance(a, b) : shortest_paths_from(sample.target, a)[b].value();
    total += d;
    if (!e.length.is_zero()) {
      ratio_total += d / e.length;
      ++positive;
    }
  }
  AverageStretch out;
  out.mean_distance = total / Rational(static_cast<std::int64_t>(g.num_edges()));
  if (positive > 0) out.mean_ratio = ratio_total / Rational(positive);
  return out;
}

std::vector<std::pair<VertexPair, Rational>> exact_edge_stretch(const MetricGraph& g, const TreeDistribution& dist) {
  std::vector<std::pair<VertexPair, Rational>> out;
  for (const auto& e : g.edges())
    if (!e.length.is_zero()) out.emplace_back(e.pair(), Rational());
  for (const auto& outcome : dist) {
    RootedTree rooted(outcome.tree);
    for (auto& [pair, value] : out)
      value += outcome.probability * rooted.distance(outcome.tree.index(pair.u), outcome.tree.index(pair.v));
  }
  std::size_t i = 0;
  for (const auto& e : g.edges())
    if (!e.length.is_zero()) out[i++].second /= e.length;
  return out;
}

}  // namespace pwtree

namespace pwtree {

Rational pw2_stretch_bound(const Rational& tau) { return Rational(9) * tau; }

Rational pwk_stretch_bound(int k) {
  if (k < 1) throw Error(ErrorKind::BadDomain, "k must be positive");
  Rational base(1);
  for (int i = 0; i < k; ++i) base *= Rational(4 * k);
  Rational out(k + 1);
  for (int i = 0; i < k * (k + 1) / 2 + 1; ++i) out *= base;
  return out;
}

}  // namespace pwtree
