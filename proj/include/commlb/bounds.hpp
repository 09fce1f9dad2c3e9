#pragma once

#include <string>
#include <variant>
#include <vector>

#include "commlb/core.hpp"
#include "commlb/lp.hpp"

namespace commlb {

struct BoundOptions {
  std::size_t tile_cap = default_tile_cap();
  SolveOptions lp;
};

/// Optimum of a partition-bound LP with an optimal tile weighting.
struct BoundResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  double log2_value = 0.0;
  TileWeighting certificate;
};

/// prt(f, E): min sum_t w(t) with exact cover at every cell and correct
/// mass >= 1 - E(x,y).
BoundResult prt(const Relation& rel, const ErrorFn& err, const BoundOptions& options = {});

/// Relaxed partition bound: per-cell cover <= 1, correct mass >= 1 - eps.
BoundResult relaxed_prt(const Relation& rel, const Rational& eps, const BoundOptions& options = {});

/// Distributional relaxed bound: per-cell cover <= 1 and a single
/// mu-averaged correctness constraint.
BoundResult relaxed_prt_mu(const Relation& rel, const Rational& eps, const InputDistribution& mu,
                           const BoundOptions& options = {});

/// The LP behind each bound, columns in canonical tile order.
LinearProgram prt_program(const Relation& rel, const ErrorFn& err, const std::vector<Tile>& tiles);
LinearProgram relaxed_program(const Relation& rel, const Rational& eps, const std::vector<Tile>& tiles);
LinearProgram relaxed_mu_program(const Relation& rel, const Rational& eps, const InputDistribution& mu,
                                 const std::vector<Tile>& tiles);

struct PrtMode {
  ErrorFn err;
};
struct RelaxedMode {
  Rational eps;
};
struct RelaxedMuMode {
  Rational eps;
  InputDistribution mu;
};
using CertificateMode = std::variant<PrtMode, RelaxedMode, RelaxedMuMode>;

struct CertificateReport {
  Rational total_weight;
  RationalGrid cover;     // sum of w(t) over tiles containing the cell
  RationalGrid correct;   // same, restricted to correctly labeled tiles
  RationalGrid error;     // err_{f,w}
  Rational average_error; // relaxed_mu mode only
  bool cover_ok = false;
  bool error_ok = false;
  std::vector<std::string> failures;

  bool passed() const { return cover_ok && error_ok; }
};

/// Exact re-evaluation of the constraint family selected by `mode`.
/// Throws ValidationError when a tile or weight is out of range.
CertificateReport verify_certificate(const Relation& rel, const TileWeighting& w, const CertificateMode& mode);

}  // namespace commlb
