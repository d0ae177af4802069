#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pwtree/graph.hpp"
#include "pwtree/pathwidth.hpp"

namespace pwtree {

using Json = nlohmann::ordered_json;

/// {"vertices":[...],"edges":[[u,v,"p/q"],...]}; integer lengths are accepted
/// on input, output always uses canonical strings.
Json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const Json& j);

/// {"bags":[[...],...]}
Json decomposition_to_json(const PathDecomposition& pd);
PathDecomposition decomposition_from_json(const Json& j);

/// {"k":k,"initial":[...],"steps":[{"new":v,"window":[...]},...]}
Json composition_to_json(const LinearCompositionSequence& seq);
LinearCompositionSequence composition_from_json(const Json& j);

/// Graph file that may carry an embedded "composition" object.
struct GraphDocument {
  MetricGraph graph;
  std::optional<LinearCompositionSequence> composition;
};
GraphDocument document_from_json(const Json& j);

/// Reads and parses a JSON file; throws ParseError with the path on failure.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// FNV-1a over the canonical compact graph JSON, as 16 hex digits.
std::string instance_hash(const MetricGraph& g);

}  // namespace pwtree
