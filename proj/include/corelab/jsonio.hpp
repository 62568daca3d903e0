#pragma once

#include <string>

#include <json.hpp>

#include "corelab/reps.hpp"

namespace corelab {

using Json = nlohmann::ordered_json;

enum class RepKind { Graph, SingleVertexKGraph };

// A parsed rep-spec file. Exactly one of graph_rep / kgraph_rep is
// meaningful, selected by kind.
struct LoadedRep {
  RepKind kind = RepKind::Graph;
  GraphRep graph_rep;
  KGraphRep kgraph_rep;
  Json expect = Json::object();
  std::string path;
  std::string digest;
};

// Shape and schema errors throw ParseError with a field path diagnostic.
// Residual-style violations (e.g. sigma not a projection) parse fine and are
// left to the analyses to report.
LoadedRep parse_rep(const Json& j, const std::string& source);
LoadedRep load_rep_file(const std::string& path);

Json matrix_to_json(const ComplexMatrix& m);
Json rep_to_json(const GraphRep& rep);
Json rep_to_json(const KGraphRep& rep);
void save_rep_file(const std::string& path, const Json& j);

// 16 hex digits, FNV-1a over the raw bytes.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace corelab
