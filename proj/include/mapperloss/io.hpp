#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mapperloss/assignment.hpp"
#include "mapperloss/cosheaf.hpp"
#include "mapperloss/grid.hpp"
#include "mapperloss/ingest.hpp"

// JSON and DOT encodings. Parse errors surface as std::invalid_argument.
namespace mapperloss::io {

using Json = nlohmann::json;

Json cell_to_json(const Cell& c);
Cell cell_from_json(const Json& j);

Json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j);

// {"grid": ..., "nodes": [{"id", "cell"}], "links": [[child, parent]]}
Json cosheaf_to_json(const CosheafGraph& F);
CosheafGraph cosheaf_from_json(const Json& j);

// {"d": int, "vertices": [{"id", "f": [..]}], "edges": [[u, v]]}
Json graph_to_json(const GeometricGraph& g);
GeometricGraph graph_from_json(const Json& j);

// {"n": int, "phi": {F id: G id}, "psi": {G id: F id}}. Missing entries stay kNoNode.
Json assignment_to_json(const Assignment& a, const CosheafGraph& F, const CosheafGraph& G);
Assignment assignment_from_json(const Json& j, const CosheafGraph& F, const CosheafGraph& G);

Json extended_to_json(ExtendedNat v);  // integer or "inf"
Json witness_to_json(const Witness& w);
// Keys sort as L_B, bound, n, reeb_bound, witnesses.
Json loss_result_to_json(const LossResult& r);

// Pretty-printed with sorted keys and a trailing newline.
std::string dump(const Json& j);

// One node per cosheaf node labeled id@cell, one undirected edge per link.
std::string to_dot(const CosheafGraph& F);

Json read_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

}  // namespace mapperloss::io
