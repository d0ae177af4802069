#include <algorithm>
#include <set>
#include <sstream>

#include "pwtree/error.hpp"
#include "pwtree/harness.hpp"
#include "pwtree/instances.hpp"
#include "pwtree/pathwidth.hpp"

namespace pwtree {
namespace {

Rational power_of_two(int e) {
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= Rational(2);
  return out;
}

// Target distance between images, by source index.
Rational image_distance(const EmbeddingSample& sample, const std::vector<std::vector<Distance>>& rows_by_target,
                        std::size_t a, std::size_t b) {
  return rows_by_target[sample.target.index(sample.image[a])][sample.target.index(sample.image[b])].value();
}

std::vector<std::vector<Distance>> all_target_rows(const MetricGraph& target) {
  std::vector<std::vector<Distance>> rows;
  for (std::size_t i = 0; i < target.num_vertices(); ++i) rows.push_back(shortest_paths_from(target, i));
  return rows;
}

Rational sum_over_edges(const MetricGraph& source, const EmbeddingSample& sample,
                        const std::vector<std::vector<Distance>>& rows) {
  Rational sum;
  for (const auto& e : source.edges()) sum += image_distance(sample, rows, source.index(e.u), source.index(e.v));
  return sum;
}

void require_image(const MetricGraph& source, const EmbeddingSample& sample) {
  if (sample.image.size() != source.num_vertices())
    throw Error(ErrorKind::PreconditionFailed, "vertex map does not cover the source");
  for (VertexId x : sample.image)
    if (!sample.target.has_vertex(x))
      throw Error(ErrorKind::PreconditionFailed, "vertex map leaves the target at " + std::to_string(x));
}

}  // namespace

Rational lower_bound_threshold(int k, std::uint64_t m) {
  if (k < 1 || k > 5) throw Error(ErrorKind::BadDomain, "k must be in [1, 5], got " + std::to_string(k));
  const std::uint64_t r = psi_branch_count(m, k);
  std::uint64_t check = r;
  bool exact = true;
  for (int j = 0; j < k && exact; ++j) {
    if (check > UINT32_MAX) exact = false;
    check *= check;
  }
  if (!exact || check != m || r < 2 || r % 2 != 0)
    throw Error(ErrorKind::BadDomain, "m = " + std::to_string(m) + " is not (2a)^(2^" + std::to_string(k) + ")");
  return Rational(static_cast<std::int64_t>(r)) / (power_of_two(8 + 2 * k) * Rational(k));
}

WitnessVerdict verify_lower_bound_witness(int k, std::uint64_t m, const MetricGraph& source,
                                          const EmbeddingSample& sample) {
  WitnessVerdict v;
  v.threshold = lower_bound_threshold(k, m);
  const std::uint64_t root_m = psi_branch_count(m, 1);
  if (!(source == psi_truncated(k, m, root_m / 2).graph))
    throw Error(ErrorKind::PreconditionFailed, "source is not the truncated nested spider for k=" + std::to_string(k) +
                                                   ", m=" + std::to_string(m));
  require_image(source, sample);
  if (!is_tree(sample.target)) throw Error(ErrorKind::PreconditionFailed, "target is not a tree");
  v.target_pathwidth = tree_pathwidth(sample.target);
  if (v.target_pathwidth > k)
    throw Error(ErrorKind::PreconditionFailed, "target pathwidth " + std::to_string(v.target_pathwidth) + " exceeds " +
                                                   std::to_string(k));
  if (!check_noncontraction(source, sample).passed)
    throw Error(ErrorKind::PreconditionFailed, "embedding contracts some pair");

  auto rows = all_target_rows(sample.target);
  v.edge_sum = sum_over_edges(source, sample, rows);
  v.edges = source.num_edges();
  v.average = v.edge_sum / Rational(static_cast<std::int64_t>(v.edges));
  v.average_km = v.edge_sum / (Rational(k) * Rational(static_cast<std::int64_t>(m)));
  v.consistent = v.average >= v.threshold;
  std::ostringstream os;
  os << (v.consistent ? "consistent" : "FALSIFIED") << ": k=" << k << " m=" << m << " |E|=" << v.edges
     << " sum=" << v.edge_sum << " average=" << v.average << " average_km=" << v.average_km
     << " threshold=" << v.threshold << " target_pw=" << v.target_pathwidth;
  v.summary = os.str();
  return v;
}

CloseToPathVerdict check_close_to_P(const MetricGraph& source, const CloseToPathInput& input,
                                    const EmbeddingSample& sample) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::HypothesisViolation, why); };
  if (!is_tree(source)) fail("source is not a tree");
  if (!source.has_vertex(input.root)) fail("root is not a source vertex");
  if (input.subtrees.size() != input.paths.size()) fail("need one connecting path per subtree");
  if (input.min_length.sign() < 0) fail("L must be non-negative");

  std::set<VertexId> used_subtree;
  for (const auto& s : input.subtrees) {
    if (s.empty()) fail("empty subtree");
    for (VertexId x : s) {
      if (!source.has_vertex(x)) fail("subtree vertex " + std::to_string(x) + " not in source");
      if (x == input.root) fail("subtree contains the root");
      if (!used_subtree.insert(x).second) fail("subtrees overlap at " + std::to_string(x));
    }
    if (!is_connected(source.induced(s))) fail("subtree is not connected");
  }
  std::set<VertexId> used_path;
  for (std::size_t i = 0; i < input.paths.size(); ++i) {
    const auto& q = input.paths[i];
    if (q.size() < 2 || q.front() != input.root) fail("path " + std::to_string(i) + " must start at the root");
    const auto& s = input.subtrees[i];
    if (std::find(s.begin(), s.end(), q.back()) == s.end()) fail("path " + std::to_string(i) + " must end in its subtree");
    Rational len;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (j > 0) {
        auto e = source.length(q[j - 1], q[j]);
        if (!e) fail("path " + std::to_string(i) + " is not a path in the source");
        len += *e;
      }
      if (j > 0 && !used_path.insert(q[j]).second) fail("paths share vertex " + std::to_string(q[j]));
      if (j + 1 < q.size() && used_subtree.contains(q[j])) fail("path " + std::to_string(i) + " crosses a subtree");
    }
    if (len < input.min_length) fail("path " + std::to_string(i) + " is shorter than L");
  }
  const auto& p = input.target_path;
  if (p.empty()) fail("target path is empty");
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!sample.target.has_vertex(p[j])) fail("target path leaves the target");
    if (j > 0 && !sample.target.has_edge(p[j - 1], p[j])) fail("target path is not a path");
  }
  if (std::set<VertexId>(p.begin(), p.end()).size() != p.size()) fail("target path is not simple");

  require_image(source, sample);
  if (!check_noncontraction(source, sample).passed)
    throw Error(ErrorKind::PreconditionFailed, "embedding contracts some pair");

  auto rows = all_target_rows(sample.target);
  std::vector<Distance> to_path(sample.target.num_vertices(), Distance::infinity());
  for (VertexId x : p) {
    const auto& row = rows[sample.target.index(x)];
    for (std::size_t t = 0; t < row.size(); ++t) to_path[t] = std::min(to_path[t], row[t]);
  }

  CloseToPathVerdict v;
  const Rational half_l = input.min_length / Rational(2);
  for (std::size_t i = 0; i < input.subtrees.size(); ++i) {
    Distance best = Distance::infinity();
    for (VertexId x : input.subtrees[i])
      best = std::min(best, to_path[sample.target.index(sample.image[source.index(x)])]);
    if (best < Distance(half_l)) v.close.push_back(i);
  }
  v.edge_sum = sum_over_edges(source, sample, rows);
  const auto count = static_cast<std::int64_t>(v.close.size());
  v.required = Rational(count * count) * input.min_length / Rational(16);
  v.holds = v.edge_sum >= v.required;
  return v;
}

}  // namespace pwtree
