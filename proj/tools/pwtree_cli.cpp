// pwtree: generate instances, compute path decompositions, sample tree embeddings.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pwtree/embed_pw2.hpp"
#include "pwtree/embed_pwk.hpp"
#include "pwtree/error.hpp"
#include "pwtree/harness.hpp"
#include "pwtree/instances.hpp"
#include "pwtree/json_io.hpp"
#include "pwtree/pathwidth.hpp"

namespace {

using namespace pwtree;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct GenerateArgs {
  std::string family;
  int i = 1;
  std::uint64_t m = 9;
  std::uint64_t branches = 0;
  int n = 4;
  int k = 2;
  std::uint64_t seed = 0;
  std::string out;
};

struct PathwidthArgs {
  std::string file;
  std::string mode = "exact";
};

struct EmbedArgs {
  std::string file;
  std::string composition;
  std::string decomposition;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::string tau;
  bool warmup = false;
  bool all_pairs = false;
  bool skip_check = false;
  unsigned threads = 1;
  std::string out;
};

void emit(const std::string& path, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

Json with_composition(const MetricGraph& g, const LinearCompositionSequence& seq) {
  Json j = graph_to_json(g);
  j["composition"] = composition_to_json(seq);
  return j;
}

Json tree_document(const MetricGraph& t) {
  return with_composition(t, decomposition_to_composition(tree_path_decomposition(t), t));
}

int run_generate(const GenerateArgs& a) {
  Json doc;
  if (a.family == "phi") {
    doc = tree_document(phi(a.i));
  } else if (a.family == "psi") {
    doc = tree_document(psi(a.i, a.m).graph);
  } else if (a.family == "psi-trunc") {
    doc = tree_document(psi_truncated(a.i, a.m, a.branches).graph);
  } else if (a.family == "cycle") {
    auto c = cycle(a.n);
    doc = with_composition(c.graph, c.composition);
  } else if (a.family == "random-pw") {
    RandomStream rng(a.seed);
    auto r = random_pathwidth_graph(a.k, a.n, rng);
    doc = with_composition(r.graph, r.composition);
  } else {
    throw Error(ErrorKind::BadSpec, "unknown generator '" + a.family + "'");
  }
  emit(a.out, doc);
  return kExitOk;
}

int run_pathwidth(const PathwidthArgs& a) {
  MetricGraph g = graph_from_json(read_json_file(a.file));
  Json out;
  if (a.mode == "exact") {
    auto pd = exact_path_decomposition(g);
    out["pathwidth"] = pd.width();
    out["decomposition"] = decomposition_to_json(pd);
  } else if (a.mode == "tree") {
    auto pd = tree_path_decomposition(g);
    out["pathwidth"] = tree_pathwidth(g);
    out["decomposition"] = decomposition_to_json(pd);
  } else if (a.mode == "peel") {
    auto peeled = peel_path(g);
    out["pathwidth"] = tree_pathwidth(g);
    out["path"] = peeled.path;
    out["components"] = Json::array();
    for (const auto& c : peeled.components)
      out["components"].push_back(Json{{"vertices", c.vertices()}, {"pathwidth", tree_pathwidth(c)}});
  } else {
    throw Error(ErrorKind::BadSpec, "unknown mode '" + a.mode + "'");
  }
  emit("", out);
  return kExitOk;
}

LinearCompositionSequence composition_for(const EmbedArgs& a, const GraphDocument& doc) {
  if (!a.composition.empty()) return composition_from_json(read_json_file(a.composition));
  if (!a.decomposition.empty())
    return decomposition_to_composition(decomposition_from_json(read_json_file(a.decomposition)), doc.graph);
  if (doc.composition) return *doc.composition;
  if (doc.graph.num_vertices() > kExactPathwidthLimit)
    throw Error(ErrorKind::TooLarge, std::to_string(doc.graph.num_vertices()) +
                                         " vertices and no composition; pass --composition or --decomposition");
  return decomposition_to_composition(exact_path_decomposition(doc.graph), doc.graph);
}

int run_embed(const EmbedArgs& a) {
  GraphDocument doc = document_from_json(read_json_file(a.file));
  const MetricGraph& g = doc.graph;
  LinearCompositionSequence seq = composition_for(a, doc);
  seq.validate();
  const MetricGraph lengths = composed_metric(seq, g);
  const int k = seq.k;

  Embedder embedder;
  Rational bound;
  if (a.warmup) {
    if (k != 2) throw Error(ErrorKind::WrongWidth, "--warmup needs a width-2 composition, got " + std::to_string(k));
    Rational tau = a.tau.empty() ? kPw2Tau : Rational::parse(a.tau);
    bound = pw2_stretch_bound(tau);
    embedder = [&seq, &lengths, tau](RandomStream& rng) { return embed_pathwidth2(seq, lengths, rng, tau); };
  } else {
    PwkOptions opts;
    if (!a.tau.empty()) opts.tau = Rational::parse(a.tau);
    bound = pwk_stretch_bound(k);
    embedder = [&seq, &lengths, opts](RandomStream& rng) { return embed_pathwidthk(seq, lengths, rng, opts); };
  }

  HarnessOptions options;
  options.mode = a.all_pairs ? StretchMode::AllPairs : StretchMode::Edges;
  options.threads = a.threads;
  options.check_noncontraction = !a.skip_check;
  std::cerr << "embedding " << g.num_vertices() << " vertices, width " << k << ", " << a.samples << " samples\n";
  StretchReport report = estimate_distortion(g, embedder, a.samples, a.seed, options);
  report.bound = bound.to_string();
  const double bound_value = bound.to_double();
  bool within = true;
  for (const auto& p : report.pairs)
    if (p.mean > bound_value) within = false;
  if (report.noncontraction_checked)
    report.criteria.emplace_back("noncontraction", report.noncontraction_violations == 0);
  report.criteria.emplace_back("stretch_bound", within);
  emit(a.out, report.to_json());
  return report.noncontraction_violations == 0 && within ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic embeddings of bounded-pathwidth graphs into trees"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a generated instance with its composition");
  generate->add_option("family", gen.family, "phi | psi | psi-trunc | cycle | random-pw")->required();
  generate->add_option("--i", gen.i, "Depth for phi/psi");
  generate->add_option("--m", gen.m, "Size parameter for psi");
  generate->add_option("--branches", gen.branches, "Root children kept by psi-trunc");
  generate->add_option("--n", gen.n, "Vertex count for cycle/random-pw");
  generate->add_option("--k", gen.k, "Width for random-pw");
  generate->add_option("--seed", gen.seed, "Seed for random-pw");
  generate->add_option("--out", gen.out, "Output file (default stdout)");

  PathwidthArgs pw;
  auto* pathwidth = app.add_subcommand("pathwidth", "Pathwidth and a matching decomposition");
  pathwidth->add_option("file", pw.file, "Graph JSON")->required()->check(CLI::ExistingFile);
  pathwidth->add_option("--mode", pw.mode, "exact | tree | peel")->check(CLI::IsMember({"exact", "tree", "peel"}));

  EmbedArgs emb;
  auto* embed = app.add_subcommand("embed", "Sample tree embeddings and report stretch");
  embed->add_option("file", emb.file, "Graph JSON, optionally with a composition")->required()->check(CLI::ExistingFile);
  embed->add_option("--composition", emb.composition, "Composition JSON")->check(CLI::ExistingFile);
  embed->add_option("--decomposition", emb.decomposition, "Path decomposition JSON")->check(CLI::ExistingFile);
  embed->add_option("--seed", emb.seed, "Seed");
  embed->add_option("--samples", emb.samples, "Number of sampled trees")->check(CLI::PositiveNumber);
  embed->add_option("--tau", emb.tau, "Override tau, as p/q");
  embed->add_flag("--warmup", emb.warmup, "Use the width-2 embedder");
  embed->add_flag("--all-pairs", emb.all_pairs, "Measure every pair instead of the edges");
  embed->add_flag("--skip-noncontraction", emb.skip_check, "Do not run the exact all-pairs check");
  embed->add_option("--threads", emb.threads, "Worker threads, 0 = all cores");
  embed->add_option("--out", emb.out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*pathwidth) return run_pathwidth(pw);
    return run_embed(emb);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
