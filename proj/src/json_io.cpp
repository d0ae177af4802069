#include "pwtree/json_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pwtree/error.hpp"

namespace pwtree {
namespace {

Rational length_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw Error(ErrorKind::ParseError, "edge length must be an integer or a \"p/q\" string, got " + j.dump());
}

VertexId vertex_from_json(const Json& j) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0 || j.get<std::int64_t>() > UINT32_MAX)
    throw Error(ErrorKind::ParseError, "vertex id must be a non-negative 32-bit integer, got " + j.dump());
  return static_cast<VertexId>(j.get<std::int64_t>());
}

std::vector<VertexId> ids_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, std::string(what) + " must be an array");
  std::vector<VertexId> out;
  for (const auto& x : j) out.push_back(vertex_from_json(x));
  return out;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::ParseError, std::string("missing field \"") + name + "\"");
  return j.at(name);
}

}  // namespace

Json graph_to_json(const MetricGraph& g) {
  Json out;
  out["vertices"] = Json::array();
  for (VertexId v : g.vertices()) out["vertices"].push_back(v);
  out["edges"] = Json::array();
  for (const auto& e : g.edges()) out["edges"].push_back(Json::array({e.u, e.v, e.length.to_string()}));
  return out;
}

MetricGraph graph_from_json(const Json& j) {
  std::vector<VertexId> vertices = ids_from_json(field(j, "vertices"), "vertices");
  const Json& edges_json = field(j, "edges");
  if (!edges_json.is_array()) throw Error(ErrorKind::ParseError, "edges must be an array");
  std::vector<Edge> edges;
  for (const auto& e : edges_json) {
    if (!e.is_array() || e.size() != 3) throw Error(ErrorKind::ParseError, "edge must be [u, v, length], got " + e.dump());
    edges.push_back({vertex_from_json(e[0]), vertex_from_json(e[1]), length_from_json(e[2])});
  }
  return MetricGraph::build(std::move(vertices), std::move(edges));
}

Json decomposition_to_json(const PathDecomposition& pd) {
  Json out;
  out["bags"] = Json::array();
  for (const auto& bag : pd.bags) out["bags"].push_back(bag);
  return out;
}

PathDecomposition decomposition_from_json(const Json& j) {
  const Json& bags = field(j, "bags");
  if (!bags.is_array()) throw Error(ErrorKind::ParseError, "bags must be an array");
  PathDecomposition pd;
  for (const auto& bag : bags) pd.bags.push_back(ids_from_json(bag, "bag"));
  return pd;
}

Json composition_to_json(const LinearCompositionSequence& seq) {
  Json out;
  out["k"] = seq.k;
  out["initial"] = seq.initial;
  out["steps"] = Json::array();
  for (const auto& s : seq.steps) {
    Json step;
    step["new"] = s.added;
    step["window"] = s.window;
    out["steps"].push_back(std::move(step));
  }
  return out;
}

LinearCompositionSequence composition_from_json(const Json& j) {
  LinearCompositionSequence seq;
  const Json& k = field(j, "k");
  if (!k.is_number_integer()) throw Error(ErrorKind::ParseError, "k must be an integer");
  seq.k = k.get<int>();
  seq.initial = ids_from_json(field(j, "initial"), "initial");
  const Json& steps = field(j, "steps");
  if (!steps.is_array()) throw Error(ErrorKind::ParseError, "steps must be an array");
  for (const auto& s : steps)
    seq.steps.push_back({vertex_from_json(field(s, "new")), ids_from_json(field(s, "window"), "window")});
  seq.validate();
  return seq;
}

GraphDocument document_from_json(const Json& j) {
  GraphDocument doc{graph_from_json(j), std::nullopt};
  if (j.contains("composition")) doc.composition = composition_from_json(j.at("composition"));
  return doc;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

std::string instance_hash(const MetricGraph& g) {
  const std::string text = graph_to_json(g).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pwtree
