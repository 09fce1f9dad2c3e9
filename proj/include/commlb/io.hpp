#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "commlb/bounds.hpp"
#include "commlb/constructions.hpp"
#include "commlb/core.hpp"
#include "commlb/protocols.hpp"
#include "commlb/pseudotranscript.hpp"

namespace commlb::io {

using json = nlohmann::json;

/// A relation document, with its optional error function ("error" for a
/// constant, "error_matrix" for per-cell values).
struct RelationFile {
  Relation relation;
  std::optional<ErrorFn> error;
};

/// Reads and parses a JSON file; ParseError carries the path and the byte
/// offset of a syntax error.
json load_file(const std::string& path);
void save_file(const std::string& path, const json& doc);

RelationFile read_relation(const json& doc);
json relation_json(const Relation& rel, const std::optional<ErrorFn>& err = std::nullopt);

/// { "tiles": [ { "xs": [...], "ys": [...], "z": k, "w": "p/q" }, ... ] }
TileWeighting read_certificate(const json& doc);
json certificate_json(const TileWeighting& w);

/// { "x_size", "y_size", "z_size", "outcomes": [ { "z", "matrix" } ] }
Pseudotranscript read_pseudotranscript(const json& doc);
json pseudotranscript_json(const Pseudotranscript& q);

/// { "probs": [["1/4", ...], ...] }
InputDistribution read_distribution(const json& doc);
json distribution_json(const InputDistribution& mu);

/// Nested { "speaker": "A"|"B", "msg": [...], "children": [zero, one] }
/// nodes with { "z": k } leaves. A wrapper object
/// { "x_size", "y_size", "z_size", "tree": node } is also accepted, in which
/// case its sizes must agree with the ones passed in.
ProtocolTree read_protocol(const json& doc, std::size_t x_size, std::size_t y_size, std::size_t z_size);
json protocol_json(const ProtocolTree& tree);

json grid_json(const RationalGrid& grid);
json prune_report_json(const PruneResult& r);

}  // namespace commlb::io
