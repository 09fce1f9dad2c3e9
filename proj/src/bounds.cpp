#include "commlb/bounds.hpp"

#include "commlb/errors.hpp"

namespace commlb {

namespace {

std::string cell_name(std::size_t x, std::size_t y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

void check_eps(const Rational& eps) {
  if (eps < 0 || eps > 1) throw PreconditionError("eps = " + to_string(eps) + " is outside [0,1]");
}

// One row per cell over the tiles containing it, optionally restricted to
// correctly labeled tiles.
std::vector<SparseVector> cell_rows(const Relation& rel, const std::vector<Tile>& tiles, bool correct_only) {
  std::vector<SparseVector> rows(rel.x_size() * rel.y_size());
  for (std::size_t j = 0; j < tiles.size(); ++j) {
    const Tile& t = tiles[j];
    for (int x : members(t.xs))
      for (int y : members(t.ys)) {
        const auto ux = static_cast<std::size_t>(x);
        const auto uy = static_cast<std::size_t>(y);
        if (correct_only && !rel.accepts(ux, uy, t.z)) continue;
        rows[ux * rel.y_size() + uy].entries.emplace_back(j, Rational(1));
      }
  }
  return rows;
}

BoundResult run(const LinearProgram& lp, const std::vector<Tile>& tiles, const SolveOptions& options) {
  const LpSolution sol = solve(lp, options);
  BoundResult out;
  out.status = sol.status;
  if (sol.status != LpStatus::Optimal) return out;
  out.value = sol.value;
  out.log2_value = log2_of(sol.value);
  for (const auto& [j, v] : sol.assignment.entries) out.certificate.set(tiles[j], v);
  return out;
}

void check_mu(const Relation& rel, const InputDistribution& mu) {
  if (mu.x_size() != rel.x_size() || mu.y_size() != rel.y_size())
    throw ValidationError("input distribution shape does not match the relation");
}

}  // namespace

LinearProgram prt_program(const Relation& rel, const ErrorFn& err, const std::vector<Tile>& tiles) {
  if (err.values().rows() != rel.x_size() || err.values().cols() != rel.y_size())
    throw ValidationError("error function shape does not match the relation");
  LinearProgram lp;
  lp.objective.assign(tiles.size(), Rational(1));
  auto cover = cell_rows(rel, tiles, false);
  auto correct = cell_rows(rel, tiles, true);
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y)
      lp.constraints.push_back({std::move(cover[x * rel.y_size() + y]), Sense::Equal, Rational(1)});
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y)
      lp.constraints.push_back({std::move(correct[x * rel.y_size() + y]), Sense::GreaterEqual, 1 - err.at(x, y)});
  return lp;
}

LinearProgram relaxed_program(const Relation& rel, const Rational& eps, const std::vector<Tile>& tiles) {
  LinearProgram lp;
  lp.objective.assign(tiles.size(), Rational(1));
  auto cover = cell_rows(rel, tiles, false);
  auto correct = cell_rows(rel, tiles, true);
  const Rational need = 1 - eps;
  for (auto& row : cover) lp.constraints.push_back({std::move(row), Sense::LessEqual, Rational(1)});
  for (auto& row : correct) lp.constraints.push_back({std::move(row), Sense::GreaterEqual, need});
  return lp;
}

LinearProgram relaxed_mu_program(const Relation& rel, const Rational& eps, const InputDistribution& mu,
                                 const std::vector<Tile>& tiles) {
  check_mu(rel, mu);
  LinearProgram lp;
  lp.objective.assign(tiles.size(), Rational(1));
  for (auto& row : cell_rows(rel, tiles, false))
    lp.constraints.push_back({std::move(row), Sense::LessEqual, Rational(1)});
  SparseVector averaged;
  for (std::size_t j = 0; j < tiles.size(); ++j) {
    Rational coeff = 0;
    for (int x : members(tiles[j].xs))
      for (int y : members(tiles[j].ys)) {
        const auto ux = static_cast<std::size_t>(x);
        const auto uy = static_cast<std::size_t>(y);
        if (rel.accepts(ux, uy, tiles[j].z)) coeff += mu.at(ux, uy);
      }
    if (sgn(coeff) != 0) averaged.entries.emplace_back(j, std::move(coeff));
  }
  lp.constraints.push_back({std::move(averaged), Sense::GreaterEqual, 1 - eps});
  return lp;
}

BoundResult prt(const Relation& rel, const ErrorFn& err, const BoundOptions& options) {
  const auto tiles = enumerate_tiles(rel.x_size(), rel.y_size(), rel.z_size(), options.tile_cap);
  return run(prt_program(rel, err, tiles), tiles, options.lp);
}

BoundResult relaxed_prt(const Relation& rel, const Rational& eps, const BoundOptions& options) {
  check_eps(eps);
  const auto tiles = enumerate_tiles(rel.x_size(), rel.y_size(), rel.z_size(), options.tile_cap);
  return run(relaxed_program(rel, eps, tiles), tiles, options.lp);
}

BoundResult relaxed_prt_mu(const Relation& rel, const Rational& eps, const InputDistribution& mu,
                           const BoundOptions& options) {
  check_eps(eps);
  check_mu(rel, mu);
  const auto tiles = enumerate_tiles(rel.x_size(), rel.y_size(), rel.z_size(), options.tile_cap);
  return run(relaxed_mu_program(rel, eps, mu, tiles), tiles, options.lp);
}

CertificateReport verify_certificate(const Relation& rel, const TileWeighting& w, const CertificateMode& mode) {
  w.validate(rel.x_size(), rel.y_size(), rel.z_size());
  CertificateReport r;
  r.total_weight = w.total();
  r.cover = cover_mass(rel, w);
  r.correct = correct_mass(rel, w);
  r.error = tiling_error(rel, w);
  r.average_error = 0;
  r.cover_ok = true;
  r.error_ok = true;

  const bool exact_cover = std::holds_alternative<PrtMode>(mode);
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y) {
      const Rational& c = r.cover.at(x, y);
      if (exact_cover ? c != 1 : c > 1) {
        r.cover_ok = false;
        r.failures.push_back("cover mass at " + cell_name(x, y) + " is " + to_string(c) +
                             (exact_cover ? ", expected exactly 1" : ", exceeds 1"));
      }
    }

  if (const auto* m = std::get_if<PrtMode>(&mode)) {
    if (m->err.values().rows() != rel.x_size() || m->err.values().cols() != rel.y_size())
      throw ValidationError("error function shape does not match the relation");
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (r.correct.at(x, y) < 1 - m->err.at(x, y)) {
          r.error_ok = false;
          r.failures.push_back("correct mass at " + cell_name(x, y) + " is " + to_string(r.correct.at(x, y)) +
                               ", below 1 - E = " + to_string(1 - m->err.at(x, y)));
        }
  } else if (const auto* m = std::get_if<RelaxedMode>(&mode)) {
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (r.correct.at(x, y) < 1 - m->eps) {
          r.error_ok = false;
          r.failures.push_back("correct mass at " + cell_name(x, y) + " is " + to_string(r.correct.at(x, y)) +
                               ", below 1 - eps = " + to_string(1 - m->eps));
        }
  } else {
    const auto& mm = std::get<RelaxedMuMode>(mode);
    r.average_error = average_tiling_error(rel, w, mm.mu);
    if (r.average_error > mm.eps) {
      r.error_ok = false;
      r.failures.push_back("average error " + to_string(r.average_error) + " exceeds eps = " + to_string(mm.eps));
    }
  }
  return r;
}

}  // namespace commlb
