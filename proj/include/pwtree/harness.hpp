#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwtree/distribution.hpp"
#include "pwtree/graph.hpp"
#include "pwtree/json_io.hpp"
#include "pwtree/random.hpp"

namespace pwtree {

/// A target graph together with the vertex map F; image[i] is the target
/// vertex of the i-th source vertex (ascending id order).
struct EmbeddingSample {
  MetricGraph target;
  std::vector<VertexId> image;

  /// F = identity; the target must contain every source vertex.
  static EmbeddingSample identity(const MetricGraph& source, MetricGraph target);
};

struct Violation {
  VertexId u = 0;
  VertexId v = 0;
  Distance source_distance;
  Distance target_distance;
};

struct NonContractionVerdict {
  bool passed = true;
  std::vector<Violation> violations;
};

/// Exact check of d_T(F(x), F(y)) >= d_G(x, y) over all pairs.
NonContractionVerdict check_noncontraction(const MetricGraph& source, const EmbeddingSample& sample);
NonContractionVerdict check_noncontraction(const MetricGraph& source, const DistanceMatrix& source_metric,
                                           const EmbeddingSample& sample);

struct PairStretch {
  VertexId u = 0;
  VertexId v = 0;
  Rational source_distance;
  double mean = 0;       // sample mean of d_T / d_G
  double std_error = 0;  // standard error of that mean
};

struct ZeroDistancePair {
  VertexId u = 0;
  VertexId v = 0;
  double mean_target_distance = 0;
};

struct StretchReport {
  std::string instance_hash;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string mode;
  std::vector<PairStretch> pairs;
  std::vector<ZeroDistancePair> zero_distance_pairs;
  double d_hat = 0;
  std::size_t d_hat_pair = 0;  // index into pairs
  bool noncontraction_checked = false;
  std::size_t noncontraction_violations = 0;
  std::vector<Violation> first_violations;
  std::optional<std::string> bound;  // exact text of the proven bound, if any
  std::vector<std::pair<std::string, bool>> criteria;

  double d_hat_stderr() const { return pairs.empty() ? 0.0 : pairs[d_hat_pair].std_error; }
  Json to_json() const;
};

enum class StretchMode {
  Edges,     // original edges only; the maximum equals the all-pairs maximum for reduced lengths
  AllPairs,
};

struct HarnessOptions {
  StretchMode mode = StretchMode::Edges;
  bool check_noncontraction = true;  // exact all-pairs check on every sample
  unsigned threads = 1;              // 0 = hardware concurrency
  std::size_t block_size = 64;       // samples per reduction block
  std::size_t max_reported_violations = 16;
};

/// Produces one random tree on the vertex set of the source graph.
using Embedder = std::function<MetricGraph(RandomStream&)>;

/// Sample i draws from RandomStream::for_sample(seed, i). Sums are formed per
/// fixed-size block and reduced in block order, so the report does not depend
/// on the thread count.
StretchReport estimate_distortion(const MetricGraph& g, const Embedder& embedder, std::size_t num_samples,
                                  std::uint64_t seed, const HarnessOptions& options = {});

struct AverageStretch {
  Rational mean_distance;  // (1/|E|) * sum of d_T(F(u),F(v))
  Rational mean_ratio;     // average of d_T(F(u),F(v)) / len(u,v) over positive-length edges
};

/// Throws EmptyEdgeSet. Non-contraction is a precondition, not checked here.
AverageStretch average_edge_stretch(const MetricGraph& g, const EmbeddingSample& sample);

/// Exact E[d_T(u,v)] / len(u,v) for every positive-length edge, in edge order.
std::vector<std::pair<VertexPair, Rational>> exact_edge_stretch(const MetricGraph& g, const TreeDistribution& dist);

/// 9 * tau: per-edge expected stretch bound of the width-2 embedder.
Rational pw2_stretch_bound(const Rational& tau);
/// ((4k)^k)^(C(k+1,2)+1) * (k+1): per-edge expected stretch bound of the width-k embedder.
Rational pwk_stretch_bound(int k);

/// m^(2^-k) / (2^(8+2k) * k). Throws BadDomain unless m = (2a)^(2^k), a >= 1.
Rational lower_bound_threshold(int k, std::uint64_t m);

struct WitnessVerdict {
  bool consistent = false;    // average >= threshold
  Rational average;           // sum over edges / |E|
  Rational average_km;        // sum over edges / (k * m)
  Rational edge_sum;
  std::size_t edges = 0;
  Rational threshold;
  int target_pathwidth = 0;
  std::string summary;
};

/// Checks one non-contractive embedding of psi_truncated(k, m, sqrt(m)/2)
/// into a tree of pathwidth <= k against the threshold. Throws
/// PreconditionFailed when the source is not that instance, the target is not
/// a tree of pathwidth <= k, or the map contracts a pair.
WitnessVerdict verify_lower_bound_witness(int k, std::uint64_t m, const MetricGraph& source,
                                          const EmbeddingSample& sample);

struct CloseToPathInput {
  VertexId root = 0;
  std::vector<std::vector<VertexId>> subtrees;  // S_i
  std::vector<std::vector<VertexId>> paths;     // Q_i, from the root to a vertex of S_i
  Rational min_length;                          // L
  std::vector<VertexId> target_path;            // P, consecutive vertices adjacent in the target
};

struct CloseToPathVerdict {
  bool holds = false;
  std::vector<std::size_t> close;  // I
  Rational edge_sum;               // sum over source edges of d_T
  Rational required;               // |I|^2 L / 16
};

/// Throws HypothesisViolation when the subtrees or paths do not have the
/// required shape, PreconditionFailed when the sample contracts a pair.
CloseToPathVerdict check_close_to_P(const MetricGraph& source, const CloseToPathInput& input,
                                    const EmbeddingSample& sample);

}  // namespace pwtree
