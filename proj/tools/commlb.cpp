#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "commlb/bounds.hpp"
#include "commlb/constructions.hpp"
#include "commlb/errors.hpp"
#include "commlb/io.hpp"
#include "commlb/measures.hpp"
#include "commlb/protocols.hpp"

using namespace commlb;
using io::json;

namespace {

std::string bits(double v, int decimals = 6) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string set_string(std::uint64_t mask) {
  std::string out = "{";
  for (int m : members(mask)) out += (out.size() > 1 ? "," : "") + std::to_string(m);
  return out + "}";
}

std::string tile_string(const Tile& t) {
  return set_string(t.xs) + " x " + set_string(t.ys) + " z=" + std::to_string(t.z);
}

std::optional<Rational> constant_of(const ErrorFn& err) {
  const auto& d = err.values().data();
  for (const Rational& v : d)
    if (v != d.front()) return std::nullopt;
  return d.front();
}

struct Inputs {
  std::string relation;
  std::string eps;
  std::string mu = "uniform";
  bool json_out = false;
};

// Field-level parse errors get the file name in front.
template <class Reader>
auto read_file(const std::string& path, Reader reader) {
  const json doc = io::load_file(path);
  try {
    return reader(doc);
  } catch (const ParseError& e) {
    throw ParseError(path + ", field " + e.what());
  }
}

io::RelationFile load_relation(const std::string& path) { return read_file(path, io::read_relation); }
Pseudotranscript load_pseudotranscript(const std::string& path) { return read_file(path, io::read_pseudotranscript); }
TileWeighting load_certificate(const std::string& path) { return read_file(path, io::read_certificate); }

std::string count(std::size_t n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

Rational parse_field(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ParseError(flag + ": " + e.what());
  }
}

// --eps wins; otherwise the file's constant error; otherwise 0.
Rational constant_eps(const Inputs& in, const io::RelationFile& f) {
  if (!in.eps.empty()) return parse_field("--eps", in.eps);
  if (!f.error) return 0;
  if (auto c = constant_of(*f.error)) return *c;
  throw PreconditionError("the relation's error matrix is not constant; pass --eps");
}

ErrorFn error_fn(const Inputs& in, const io::RelationFile& f) {
  if (!in.eps.empty())
    return ErrorFn::constant(f.relation.x_size(), f.relation.y_size(), parse_field("--eps", in.eps));
  if (f.error) return *f.error;
  return ErrorFn::constant(f.relation.x_size(), f.relation.y_size(), 0);
}

InputDistribution distribution(const std::string& source, std::size_t x_size, std::size_t y_size) {
  if (source == "uniform") return InputDistribution::uniform(x_size, y_size);
  InputDistribution mu = read_file(source, io::read_distribution);
  if (mu.x_size() != x_size || mu.y_size() != y_size)
    throw ValidationError("--mu: distribution is " + std::to_string(mu.x_size()) + "x" +
                          std::to_string(mu.y_size()) + ", expected " + std::to_string(x_size) + "x" +
                          std::to_string(y_size));
  return mu;
}

int emit_bound(const char* name, const BoundResult& r, const Relation& rel, const CertificateMode& mode,
               const json& params, const std::string& cert_path, bool json_out) {
  if (r.status != LpStatus::Optimal) {
    if (json_out) {
      std::cout << json{{"bound", name}, {"status", to_string(r.status)}, {"params", params}}.dump(2) << "\n";
    } else {
      std::cout << name << ": program is " << to_string(r.status) << "\n";
    }
    return 1;
  }
  const CertificateReport check = verify_certificate(rel, r.certificate, mode);
  if (!cert_path.empty()) io::save_file(cert_path, io::certificate_json(r.certificate));
  if (json_out) {
    std::cout << json{{"bound", name},
                      {"params", params},
                      {"value", to_string(r.value)},
                      {"log2", number(r.log2_value)},
                      {"tiles", r.certificate.size()},
                      {"certificate_verified", check.passed()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << name << " = " << to_string(r.value) << "\n";
    std::cout << "log2 " << name << " = " << bits(r.log2_value) << " bits\n";
    std::cout << "certificate: " << count(r.certificate.size(), "tile") << ", " << (check.passed() ? "verified" : "FAILED")
              << "\n";
    for (const std::string& f : check.failures) std::cout << "  " << f << "\n";
  }
  return check.passed() ? 0 : 1;
}

int cmd_prt(const Inputs& in, const std::string& cert_path) {
  const io::RelationFile f = load_relation(in.relation);
  const ErrorFn err = error_fn(in, f);
  json params;
  if (auto c = constant_of(err)) params["eps"] = to_string(*c);
  else params["error_matrix"] = io::grid_json(err.values());
  return emit_bound("prt", prt(f.relation, err), f.relation, PrtMode{err}, params, cert_path, in.json_out);
}

int cmd_relaxed(const Inputs& in, const std::string& cert_path) {
  const io::RelationFile f = load_relation(in.relation);
  const Rational eps = constant_eps(in, f);
  return emit_bound("relaxed-prt", relaxed_prt(f.relation, eps), f.relation, RelaxedMode{eps},
                    json{{"eps", to_string(eps)}}, cert_path, in.json_out);
}

int cmd_relaxed_mu(const Inputs& in, const std::string& cert_path) {
  const io::RelationFile f = load_relation(in.relation);
  const Rational eps = constant_eps(in, f);
  const InputDistribution mu = distribution(in.mu, f.relation.x_size(), f.relation.y_size());
  return emit_bound("relaxed-prt-mu", relaxed_prt_mu(f.relation, eps, mu), f.relation, RelaxedMuMode{eps, mu},
                    json{{"eps", to_string(eps)}, {"mu", io::grid_json(mu.probs())}}, cert_path, in.json_out);
}

Relation relation_or_constant(const std::string& path, const Pseudotranscript& q) {
  if (!path.empty()) return load_relation(path).relation;
  std::vector<int> all;
  for (std::size_t z = 0; z < q.z_size(); ++z) all.push_back(static_cast<int>(z));
  return Relation(q.x_size(), q.y_size(), q.z_size(),
                  std::vector<std::vector<std::vector<int>>>(q.x_size(), std::vector<std::vector<int>>(q.y_size(), all)));
}

int cmd_slice(const std::string& rel_path, const std::string& pt_path, const std::string& out, bool json_out) {
  const Pseudotranscript q = load_pseudotranscript(pt_path);
  const Relation rel = relation_or_constant(rel_path, q);
  const SliceResult s = slice(rel, q);
  const bool cover = cover_mass(rel, s.weighting) == RationalGrid(q.x_size(), q.y_size(), Rational(1));
  const bool error_kept = tiling_error(rel, s.weighting) == pseudotranscript_error(rel, q);
  const Rational argument = q.renyi_argument();
  const bool total_ok = s.total == argument;
  if (!out.empty()) io::save_file(out, io::certificate_json(s.weighting));
  if (json_out) {
    json outcomes = json::array();
    for (const OutcomeSlice& os : s.outcomes) {
      json tiles = json::array();
      for (const SlicedTile& t : os.tiles)
        tiles.push_back({{"xs", members(t.tile.xs)},
                         {"ys", members(t.tile.ys)},
                         {"z", t.tile.z},
                         {"i", t.i},
                         {"j", t.j},
                         {"sigma", to_string(t.sigma)},
                         {"tau", to_string(t.tau)},
                         {"omega", to_string(t.omega)}});
      outcomes.push_back({{"outcome", os.outcome}, {"tiles", std::move(tiles)}});
    }
    std::cout << json{{"outcomes", std::move(outcomes)},
                      {"certificate", io::certificate_json(s.weighting)},
                      {"total", to_string(s.total)},
                      {"renyi_argument", to_string(argument)},
                      {"log2", number(log2_of(argument))},
                      {"exact_cover", cover},
                      {"error_preserved", error_kept}}
                     .dump(2)
              << "\n";
  } else {
    for (const OutcomeSlice& os : s.outcomes) {
      std::cout << "outcome " << os.outcome << " (z=" << q.outcome(os.outcome).z << "): " << count(os.tiles.size(), "tile")
                << "\n";
      for (const SlicedTile& t : os.tiles)
        std::cout << "  " << tile_string(t.tile) << "  sigma=" << to_string(t.sigma) << " tau=" << to_string(t.tau)
                  << " omega=" << to_string(t.omega) << "\n";
    }
 std::cout << "certificate: " << count(s.weighting.size(), "tile") << ", total weight " << to_string(s.total) << "\n";
    std::cout << "exact cover: " << (cover ? "yes" : "NO") << "\n";
    std::cout << "error preserved: " << (error_kept ? "yes" : "NO") << "\n";
    std::cout << "order-infinity argument = " << to_string(argument) << "\n";
    std::cout << "log2 = " << bits(log2_of(argument)) << " bits\n";
  }
  return cover && error_kept && total_ok ? 0 : 1;
}

int cmd_lift(const std::string& rel_path, const std::string& cert_path, const std::string& out, bool json_out) {
  const Relation rel = load_relation(rel_path).relation;
  const TileWeighting w = load_certificate(cert_path);
  const Pseudotranscript q = lift(rel, w);
  const Rational argument = q.renyi_argument();
  const bool matches = argument == w.total();
  if (!out.empty()) io::save_file(out, io::pseudotranscript_json(q));
  if (json_out) {
    std::cout << json{{"pseudotranscript", io::pseudotranscript_json(q)},
                      {"certificate_weight", to_string(w.total())},
                      {"renyi_argument", to_string(argument)},
                      {"log2", number(log2_of(argument))}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "outcomes: " << q.size() << "\n";
    std::cout << "certificate weight = " << to_string(w.total()) << "\n";
    std::cout << "order-infinity argument = " << to_string(argument) << "\n";
    std::cout << "log2 = " << bits(log2_of(argument)) << " bits\n";
  }
  return matches ? 0 : 1;
}

std::string verdict(bool ok) { return ok ? "[pass] " : "[FAIL] "; }

int cmd_prune(const Inputs& in, const std::string& pt_path, const std::string& delta_text, const std::string& out) {
  const Relation rel = load_relation(in.relation).relation;
  const Pseudotranscript q = load_pseudotranscript(pt_path);
  const InputDistribution mu = distribution(in.mu, q.x_size(), q.y_size());
  const Rational delta = parse_field("--delta", delta_text);
  const PruneResult r = prune(rel, q, mu, delta);
  const json report = io::prune_report_json(r);
  if (!out.empty()) io::save_file(out, report);
  if (in.json_out) {
    std::cout << report.dump(2) << "\n";
    return r.passed() ? 0 : 1;
  }
  std::size_t bad = 0;
  for (const auto& flags : r.bad)
    for (bool b : flags) bad += b ? 1 : 0;
  std::cout << "delta = " << to_string(r.delta) << "\n";
  std::cout << "epsilon = " << to_string(r.epsilon) << "\n";
  std::cout << "I(XY;Q) = " << bits(r.information) << " bits\n";
  std::cout << "Delta = " << bits(r.Delta) << "\n";
  std::cout << "removed pairs = " << bad << ", kept tiles = " << r.pruned.size() << "\n";
  if (r.trivial) std::cout << "single-cell domain: the log log terms vanish and the bounds hold trivially\n";
  std::cout << verdict(r.missing_mass.passed) << "missing mass: removed " << to_string(r.removed_mass)
            << " <= delta " << to_string(r.delta) << "\n";
  std::cout << verdict(r.tile_bound.passed) << "tile bound: log2 surviving weight "
            << bits(r.tile_bound.log2_surviving) << " <= " << bits(r.tile_bound.bound) << "\n";
  for (const OutcomeAreaCheck& a : r.tile_bound.per_outcome)
    std::cout << "    outcome " << a.outcome << ": surviving " << to_string(a.surviving) << " <= area "
              << bits(a.area_bound) << "\n";
  std::cout << verdict(r.certificate.passed) << "pruned certificate: average error "
            << to_string(r.certificate.report.average_error) << " <= " << to_string(r.certificate.allowed_error)
            << "\n";
  std::cout << verdict(r.final_inequality.passed) << "final inequality: I = " << bits(r.information)
            << " >= " << bits(r.final_inequality.rhs) << " (relaxed-prt-mu at "
            << to_string(r.final_inequality.relaxed_eps) << " = " << to_string(r.final_inequality.relaxed_value)
            << ")\n";
  std::cout << verdict(r.markov.passed) << "decomposition: positive part " << bits(r.markov.positive_part)
            << " <= I + 1 = " << bits(r.markov.bound) << "\n";
  return r.passed() ? 0 : 1;
}

int cmd_report(const Inputs& in, std::size_t max_bits) {
  const io::RelationFile f = load_relation(in.relation);
  const Relation& rel = f.relation;
  const Rational eps = constant_eps(in, f);
  const InputDistribution mu = distribution(in.mu, rel.x_size(), rel.y_size());
  const BoundResult m = relaxed_prt_mu(rel, eps, mu);
  const BoundResult r = relaxed_prt(rel, eps);
  const BoundResult p = prt(rel, ErrorFn::constant(rel.x_size(), rel.y_size(), eps));

  std::optional<std::size_t> det;
  std::string det_text;
  try {
    if (auto z = enumerate_zero_error(rel, max_bits)) {
      det = z->bits;
      det_text = std::to_string(z->bits);
    } else {
      det_text = "> " + std::to_string(max_bits);
    }
  } catch (const SizeLimitError&) {
    det_text = "skipped (size)";
  }

  struct Check {
    std::string name;
    bool holds;
  };
  std::vector<Check> checks{{"relaxed-prt-mu <= relaxed-prt", m.value <= r.value},
                            {"relaxed-prt <= prt", r.value <= p.value}};
  if (det) checks.push_back({"log2 prt <= R_det", p.log2_value <= static_cast<double>(*det) + 1e-9});
  bool ok = m.status == LpStatus::Optimal && r.status == LpStatus::Optimal && p.status == LpStatus::Optimal;
  for (const Check& c : checks) ok = ok && c.holds;

  if (in.json_out) {
    json rows = json::array();
    for (const auto& [name, b] : {std::pair{"relaxed-prt-mu", &m}, {"relaxed-prt", &r}, {"prt", &p}})
      rows.push_back({{"measure", name}, {"value", to_string(b->value)}, {"log2", number(b->log2_value)}});
    json jchecks = json::array();
    for (const Check& c : checks) jchecks.push_back({{"ordering", c.name}, {"holds", c.holds}});
    std::cout << json{{"eps", to_string(eps)},
                      {"rows", std::move(rows)},
                      {"R_det", det ? json(*det) : json(nullptr)},
                      {"R_det_status", det_text},
                      {"orderings", std::move(jchecks)},
                      {"passed", ok}}
                     .dump(2)
              << "\n";
    return ok ? 0 : 1;
  }
  std::printf("%-16s %-12s %s\n", "measure", "value", "log2");
  std::printf("%-16s %-12s %s\n", "relaxed-prt-mu", to_string(m.value).c_str(), bits(m.log2_value, 3).c_str());
  std::printf("%-16s %-12s %s\n", "relaxed-prt", to_string(r.value).c_str(), bits(r.log2_value, 3).c_str());
  std::printf("%-16s %-12s %s\n", "prt", to_string(p.value).c_str(), bits(p.log2_value, 3).c_str());
  std::printf("%-16s %-12s %s\n", "R_det", det_text.c_str(), det ? det_text.c_str() : "-");
  std::printf("log prt = %s, R_det = %s\n", bits(p.log2_value, 3).c_str(), det_text.c_str());
  for (const Check& c : checks) std::printf("%s%s\n", verdict(c.holds).c_str(), c.name.c_str());
  return ok ? 0 : 1;
}

int cmd_verify(const Inputs& in, const std::string& cert_path, const std::string& mode_name) {
  const io::RelationFile f = load_relation(in.relation);
  const TileWeighting w = load_certificate(cert_path);
  const CertificateMode mode = [&]() -> CertificateMode {
    if (mode_name == "prt") return PrtMode{error_fn(in, f)};
    if (mode_name == "relaxed-prt") return RelaxedMode{constant_eps(in, f)};
    return RelaxedMuMode{constant_eps(in, f), distribution(in.mu, f.relation.x_size(), f.relation.y_size())};
  }();
  const CertificateReport rep = verify_certificate(f.relation, w, mode);
  if (in.json_out) {
    std::cout << json{{"mode", mode_name},
                      {"total_weight", to_string(rep.total_weight)},
                      {"cover_ok", rep.cover_ok},
                      {"error_ok", rep.error_ok},
                      {"failures", rep.failures},
                      {"passed", rep.passed()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "total weight = " << to_string(rep.total_weight) << "\n";
    std::cout << verdict(rep.cover_ok) << "cover constraints\n";
    std::cout << verdict(rep.error_ok) << "error constraints\n";
    for (const std::string& s : rep.failures) std::cout << "  " << s << "\n";
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on communication complexity via partition bounds and information costs"};
  app.require_subcommand(1);

  Inputs in;
  std::string cert_out, pt_path, cert_path, out, delta, mode = "prt";
  std::size_t max_bits = 4;

  const auto bound_cmd = [&](const char* name, const char* help, bool with_mu) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("relation", in.relation, "relation JSON file")->required();
    c->add_option("--eps", in.eps, "error as a rational p/q (overrides the file)");
    if (with_mu) c->add_option("--mu", in.mu, "'uniform' or a distribution JSON file");
    c->add_option("--emit-cert", cert_out, "write the optimal certificate here");
    c->add_flag("--json", in.json_out, "machine-readable output");
    return c;
  };
  CLI::App* c_prt = bound_cmd("prt", "partition bound prt(f, E)", false);
  CLI::App* c_rel = bound_cmd("relaxed-prt", "relaxed partition bound", false);
  CLI::App* c_mu = bound_cmd("relaxed-prt-mu", "distributional relaxed partition bound", true);

  std::string slice_rel;
  CLI::App* c_slice = app.add_subcommand("slice", "pseudotranscript -> exact-cover tiling");
  c_slice->add_option("pseudotranscript", pt_path, "pseudotranscript JSON file")->required();
  c_slice->add_option("--relation", slice_rel, "relation for error checks (default: every output accepted)");
  c_slice->add_option("--out", out, "write the certificate here");
  c_slice->add_flag("--json", in.json_out, "machine-readable output");

  CLI::App* c_lift = app.add_subcommand("lift", "exact-cover tiling -> pseudotranscript");
  c_lift->add_option("relation", in.relation, "relation JSON file")->required();
  c_lift->add_option("certificate", cert_path, "certificate JSON file")->required();
  c_lift->add_option("--out", out, "write the pseudotranscript here");
  c_lift->add_flag("--json", in.json_out, "machine-readable output");

  CLI::App* c_prune = app.add_subcommand("prune", "prune a sliced pseudotranscript and check every claim");
  c_prune->add_option("relation", in.relation, "relation JSON file")->required();
  c_prune->add_option("pseudotranscript", pt_path, "pseudotranscript JSON file")->required();
  c_prune->add_option("--mu", in.mu, "'uniform' or a distribution JSON file");
  c_prune->add_option("--delta", delta, "pruning parameter in (0,1]")->required();
  c_prune->add_option("--out", out, "write the JSON report here");
  c_prune->add_flag("--json", in.json_out, "machine-readable output");

  CLI::App* c_report = app.add_subcommand("report", "compare the bounds with deterministic communication");
  c_report->add_option("relation", in.relation, "relation JSON file")->required();
  c_report->add_option("--eps", in.eps, "error as a rational p/q (overrides the file)");
  c_report->add_option("--mu", in.mu, "'uniform' or a distribution JSON file");
  c_report->add_option("--max-bits", max_bits, "bit cap for the protocol search");
  c_report->add_flag("--json", in.json_out, "machine-readable output");

  CLI::App* c_verify = app.add_subcommand("verify", "check a certificate against a bound's constraints");
  c_verify->add_option("relation", in.relation, "relation JSON file")->required();
  c_verify->add_option("certificate", cert_path, "certificate JSON file")->required();
  c_verify->add_option("--mode", mode, "prt, relaxed-prt or relaxed-prt-mu")
      ->check(CLI::IsMember({"prt", "relaxed-prt", "relaxed-prt-mu"}));
  c_verify->add_option("--eps", in.eps, "error as a rational p/q (overrides the file)");
  c_verify->add_option("--mu", in.mu, "'uniform' or a distribution JSON file");
  c_verify->add_flag("--json", in.json_out, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_prt) return cmd_prt(in, cert_out);
    if (*c_rel) return cmd_relaxed(in, cert_out);
    if (*c_mu) return cmd_relaxed_mu(in, cert_out);
    if (*c_slice) return cmd_slice(slice_rel, pt_path, out, in.json_out);
    if (*c_lift) return cmd_lift(in.relation, cert_path, out, in.json_out);
    if (*c_prune) return cmd_prune(in, pt_path, delta, out);
    if (*c_report) return cmd_report(in, max_bits);
    if (*c_verify) return cmd_verify(in, cert_path, mode);
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
