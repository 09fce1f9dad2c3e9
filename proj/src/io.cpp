#include "commlb/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "commlb/errors.hpp"

namespace commlb::io {

namespace {

const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(ctx + ": missing field '" + key + "'");
  return *it;
}

std::string join(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }
std::string index(const std::string& ctx, std::size_t i) { return ctx + "[" + std::to_string(i) + "]"; }

const json& array_of(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ParseError(ctx + ": expected an array");
  return v;
}

long long as_integer(const json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ParseError(ctx + ": expected an integer");
  return v.get<long long>();
}

std::size_t as_size(const json& v, const std::string& ctx) {
  const long long n = as_integer(v, ctx);
  if (n < 1) throw ParseError(ctx + ": expected a positive integer");
  return static_cast<std::size_t>(n);
}

Rational as_rational(const json& v, const std::string& ctx) {
  if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
  if (!v.is_string()) throw ParseError(ctx + ": expected a rational string \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

RationalGrid as_grid(const json& v, std::size_t rows, std::size_t cols, const std::string& ctx) {
  array_of(v, ctx);
  if (v.size() != rows)
    throw ParseError(ctx + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
  RationalGrid g(rows, cols, Rational(0));
  for (std::size_t x = 0; x < rows; ++x) {
    const json& row = array_of(v[x], index(ctx, x));
    if (row.size() != cols)
      throw ParseError(index(ctx, x) + ": expected " + std::to_string(cols) + " entries, got " +
                       std::to_string(row.size()));
    for (std::size_t y = 0; y < cols; ++y) g.at(x, y) = as_rational(row[y], index(index(ctx, x), y));
  }
  return g;
}

std::vector<int> as_int_list(const json& v, const std::string& ctx) {
  array_of(v, ctx);
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(static_cast<int>(as_integer(v[i], index(ctx, i))));
  return out;
}

json rational_json(const Rational& r) { return to_string(r); }

// Infinite or NaN doubles become null in JSON.
json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open file for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw Error(path + ": write failed");
}

RelationFile read_relation(const json& doc) {
  const std::size_t nx = as_size(field(doc, "x_size", "relation"), "x_size");
  const std::size_t ny = as_size(field(doc, "y_size", "relation"), "y_size");
  const std::size_t nz = as_size(field(doc, "z_size", "relation"), "z_size");
  const json& acc = array_of(field(doc, "accept", "relation"), "accept");
  if (acc.size() != nx) throw ParseError("accept: expected " + std::to_string(nx) + " rows");
  std::vector<std::vector<std::vector<int>>> accept(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const json& row = array_of(acc[x], index("accept", x));
    if (row.size() != ny) throw ParseError(index("accept", x) + ": expected " + std::to_string(ny) + " entries");
    for (std::size_t y = 0; y < ny; ++y) accept[x].push_back(as_int_list(row[y], index(index("accept", x), y)));
  }
  RelationFile out{Relation(nx, ny, nz, accept), std::nullopt};
  const bool has_const = doc.contains("error");
  const bool has_matrix = doc.contains("error_matrix");
  if (has_const && has_matrix) throw ParseError("relation: give either 'error' or 'error_matrix', not both");
  if (has_const) out.error = ErrorFn::constant(nx, ny, as_rational(doc["error"], "error"));
  if (has_matrix) out.error = ErrorFn(as_grid(doc["error_matrix"], nx, ny, "error_matrix"));
  return out;
}

json relation_json(const Relation& rel, const std::optional<ErrorFn>& err) {
  json doc;
  doc["x_size"] = rel.x_size();
  doc["y_size"] = rel.y_size();
  doc["z_size"] = rel.z_size();
  json acc = json::array();
  for (std::size_t x = 0; x < rel.x_size(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < rel.y_size(); ++y) row.push_back(rel.accept_set(x, y));
    acc.push_back(std::move(row));
  }
  doc["accept"] = std::move(acc);
  if (err) doc["error_matrix"] = grid_json(err->values());
  return doc;
}

TileWeighting read_certificate(const json& doc) {
  const json& tiles = array_of(field(doc, "tiles", "certificate"), "tiles");
  TileWeighting w;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const std::string ctx = index("tiles", i);
    const json& t = tiles[i];
    const Tile tile = make_tile(as_int_list(field(t, "xs", ctx), join(ctx, "xs")),
                                as_int_list(field(t, "ys", ctx), join(ctx, "ys")),
                                static_cast<int>(as_integer(field(t, "z", ctx), join(ctx, "z"))));
    const Rational weight = as_rational(field(t, "w", ctx), join(ctx, "w"));
    if (w.entries().count(tile) != 0) throw ParseError(ctx + ": duplicate tile");
    if (sgn(weight) < 0) throw ParseError(join(ctx, "w") + ": negative weight " + to_string(weight));
    w.set(tile, weight);
  }
  return w;
}

json certificate_json(const TileWeighting& w) {
  json tiles = json::array();
  for (const auto& [tile, weight] : w.entries())
    tiles.push_back({{"xs", members(tile.xs)}, {"ys", members(tile.ys)}, {"z", tile.z}, {"w", rational_json(weight)}});
  return json{{"tiles", std::move(tiles)}};
}

Pseudotranscript read_pseudotranscript(const json& doc) {
  const std::size_t nx = as_size(field(doc, "x_size", "pseudotranscript"), "x_size");
  const std::size_t ny = as_size(field(doc, "y_size", "pseudotranscript"), "y_size");
  const std::size_t nz = as_size(field(doc, "z_size", "pseudotranscript"), "z_size");
  const json& outs = array_of(field(doc, "outcomes", "pseudotranscript"), "outcomes");
  std::vector<Outcome> outcomes;
  for (std::size_t q = 0; q < outs.size(); ++q) {
    const std::string ctx = index("outcomes", q);
    Outcome o;
    o.z = static_cast<int>(as_integer(field(outs[q], "z", ctx), join(ctx, "z")));
    o.matrix = as_grid(field(outs[q], "matrix", ctx), nx, ny, join(ctx, "matrix"));
    outcomes.push_back(std::move(o));
  }
  return Pseudotranscript(nx, ny, nz, std::move(outcomes));
}

json pseudotranscript_json(const Pseudotranscript& q) {
  json outs = json::array();
  for (const Outcome& o : q.outcomes()) outs.push_back({{"z", o.z}, {"matrix", grid_json(o.matrix)}});
  return json{{"x_size", q.x_size()}, {"y_size", q.y_size()}, {"z_size", q.z_size()}, {"outcomes", std::move(outs)}};
}

InputDistribution read_distribution(const json& doc) {
  const json& probs = array_of(field(doc, "probs", "distribution"), "probs");
  if (probs.empty()) throw ParseError("probs: expected at least one row");
  const std::size_t rows = probs.size();
  const std::size_t cols = array_of(probs[0], "probs[0]").size();
  if (doc.contains("x_size") && as_size(doc["x_size"], "x_size") != rows)
    throw ParseError("distribution: x_size does not match the number of rows");
  if (doc.contains("y_size") && as_size(doc["y_size"], "y_size") != cols)
    throw ParseError("distribution: y_size does not match the row length");
  return InputDistribution(as_grid(probs, rows, cols, "probs"));
}

json distribution_json(const InputDistribution& mu) {
  return json{{"x_size", mu.x_size()}, {"y_size", mu.y_size()}, {"probs", grid_json(mu.probs())}};
}

namespace {

ProtocolTree read_node(const json& node, std::size_t nx, std::size_t ny, std::size_t nz, const std::string& ctx) {
  if (!node.is_object()) throw ParseError(ctx + ": expected an object");
  if (node.contains("z")) return ProtocolTree::leaf(nx, ny, nz, static_cast<int>(as_integer(node["z"], join(ctx, "z"))));
  const json& sp = field(node, "speaker", ctx);
  if (!sp.is_string() || (sp != "A" && sp != "B")) throw ParseError(join(ctx, "speaker") + ": expected \"A\" or \"B\"");
  const Party party = sp == "A" ? Party::Alice : Party::Bob;
  std::vector<std::uint8_t> msg;
  for (int b : as_int_list(field(node, "msg", ctx), join(ctx, "msg"))) {
    if (b != 0 && b != 1) throw ParseError(join(ctx, "msg") + ": bits must be 0 or 1");
    msg.push_back(static_cast<std::uint8_t>(b));
  }
  const json& kids = array_of(field(node, "children", ctx), join(ctx, "children"));
  if (kids.size() != 2) throw ParseError(join(ctx, "children") + ": expected exactly two children");
  return ProtocolTree::speak(party, std::move(msg), read_node(kids[0], nx, ny, nz, index(join(ctx, "children"), 0)),
                             read_node(kids[1], nx, ny, nz, index(join(ctx, "children"), 1)));
}

json write_node(const ProtocolTree& tree, std::size_t id) {
  const auto& n = tree.node(id);
  if (n.leaf) return json{{"z", n.z}};
  json msg = json::array();
  for (std::uint8_t b : n.msg) msg.push_back(static_cast<int>(b));
  return json{{"speaker", n.speaker == Party::Alice ? "A" : "B"},
              {"msg", std::move(msg)},
              {"children", json::array({write_node(tree, n.child[0]), write_node(tree, n.child[1])})}};
}

}  // namespace

ProtocolTree read_protocol(const json& doc, std::size_t x_size, std::size_t y_size, std::size_t z_size) {
  if (doc.is_object() && doc.contains("tree")) {
    for (const auto& [key, expected] : {std::pair{"x_size", x_size}, {"y_size", y_size}, {"z_size", z_size}})
      if (doc.contains(key) && as_size(doc[key], key) != expected)
        throw ParseError(std::string(key) + ": protocol alphabet does not match");
    return read_node(doc["tree"], x_size, y_size, z_size, "tree");
  }
  return read_node(doc, x_size, y_size, z_size, "tree");
}

json protocol_json(const ProtocolTree& tree) { return write_node(tree, 0); }

json grid_json(const RationalGrid& grid) {
  json rows = json::array();
  for (std::size_t x = 0; x < grid.rows(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < grid.cols(); ++y) row.push_back(rational_json(grid.at(x, y)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json prune_report_json(const PruneResult& r) {
  json per_outcome = json::array();
  for (const auto& a : r.tile_bound.per_outcome)
    per_outcome.push_back({{"outcome", a.outcome},
                           {"theta", number_json(a.theta)},
                           {"surviving", rational_json(a.surviving)},
                           {"area_bound", number_json(a.area_bound)},
                           {"pass", a.passed}});
  json doc;
  doc["delta"] = rational_json(r.delta);
  doc["Delta"] = number_json(r.Delta);
  doc["epsilon"] = rational_json(r.epsilon);
  doc["information"] = number_json(r.information);
  doc["removed_mass"] = rational_json(r.removed_mass);
  doc["trivial_domain"] = r.trivial;
  doc["claim_missingmass"] = {{"pass", r.missing_mass.passed},
                              {"removed_mass", rational_json(r.missing_mass.removed_mass)},
                              {"delta", rational_json(r.missing_mass.delta)}};
  doc["claim_tilebound"] = {{"pass", r.tile_bound.passed},
                            {"surviving_mass", rational_json(r.tile_bound.surviving_mass)},
                            {"log2_surviving", number_json(r.tile_bound.log2_surviving)},
                            {"bound", number_json(r.tile_bound.bound)},
                            {"per_outcome", std::move(per_outcome)}};
  doc["certificate_check"] = {{"pass", r.certificate.passed},
                              {"allowed_error", rational_json(r.certificate.allowed_error)},
                              {"average_error", rational_json(r.certificate.report.average_error)},
                              {"total_weight", rational_json(r.certificate.report.total_weight)},
                              {"failures", r.certificate.report.failures}};
  doc["final_inequality"] = {{"pass", r.final_inequality.passed},
                             {"information", number_json(r.final_inequality.information)},
                             {"relaxed_eps", rational_json(r.final_inequality.relaxed_eps)},
                             {"relaxed_prt_mu", rational_json(r.final_inequality.relaxed_value)},
                             {"log2_relaxed_prt_mu", number_json(r.final_inequality.log2_relaxed)},
                             {"rhs", number_json(r.final_inequality.rhs)}};
  doc["markov_decomposition"] = {{"pass", r.markov.passed},
                                 {"positive_part", number_json(r.markov.positive_part)},
                                 {"bound", number_json(r.markov.bound)}};
  doc["certificate"] = certificate_json(r.pruned);
  return doc;
}

}  // namespace commlb::io
