#pragma once

#include <vector>

#include "commlb/bounds.hpp"
#include "commlb/core.hpp"
#include "commlb/pseudotranscript.hpp"

namespace commlb {

/// Tolerance for comparisons whose sides involve floating-point logs.
inline constexpr double kLogTolerance = 1e-6;

/// Turns an exact-cover tiling into a pseudotranscript with one outcome per
/// positive-weight tile: p(t|x,y) = w(t) on the tile, 0 elsewhere.
/// Throws PreconditionError naming a cell whose cover mass is not 1.
Pseudotranscript lift(const Relation& rel, const TileWeighting& w);

/// One upper-right tile t_ij = ({x_i..x_M} x {y_j..y_N}, z_q) of a slice.
/// i and j are 1-based positions in the sorted orders; sigma and tau are the
/// alpha and beta increments at those positions.
struct SlicedTile {
  Tile tile;
  std::size_t i = 0;
  std::size_t j = 0;
  Rational sigma;
  Rational tau;
  Rational omega;       // sigma * tau
  Rational alpha_hat;   // min alpha over the tile's rows = alpha(x_i)
  Rational beta_hat;    // min beta over the tile's columns = beta(y_j)
};

struct OutcomeSlice {
  std::size_t outcome = 0;
  std::vector<std::size_t> x_order;  // ascending alpha, ties by index
  std::vector<std::size_t> y_order;  // ascending beta, ties by index
  Rational alpha_max;
  Rational beta_max;
  std::vector<SlicedTile> tiles;  // only strictly positive sigma and tau
};

struct SliceResult {
  std::vector<OutcomeSlice> outcomes;
  TileWeighting weighting;  // w(t) = sum_q omega_{q,t}
  Rational total;           // sum_{q,t} omega_{q,t}
};

/// Slices each outcome's rank-one matrix into nested rectangles. The
/// weighting is an exact cover with the same per-cell error as Q and total
/// weight sum_q max_{x,y} p(q|x,y).
SliceResult slice(const Relation& rel, const Pseudotranscript& q);

/// Area of {(a,b) in [0,A]x[0,B] : ab <= theta} for a rectangle of area
/// A*B: theta (1 + ln(A B / theta)) when theta <= A B, else A B.
double hyperbola_area_bound(double rect_area, double theta);
double hyperbola_area_bound(const OutcomeSlice& slice, double theta);

struct MissingMassCheck {
  Rational removed_mass;
  Rational delta;
  bool passed = false;
};

struct OutcomeAreaCheck {
  std::size_t outcome = 0;
  double theta = 0.0;
  Rational surviving;
  double area_bound = 0.0;
  bool passed = false;
};

struct TileBoundCheck {
  Rational surviving_mass;
  double log2_surviving = 0.0;
  double bound = 0.0;  // Delta + log2 log2(|X||Y|) + 2
  std::vector<OutcomeAreaCheck> per_outcome;
  bool passed = false;
};

struct PrunedCertificateCheck {
  Rational allowed_error;  // eps + delta
  CertificateReport report;
  bool passed = false;
};

struct FinalInequalityCheck {
  double information = 0.0;
  Rational relaxed_eps;  // min(eps + delta, 1)
  Rational relaxed_value;
  double log2_relaxed = 0.0;
  double rhs = 0.0;  // delta log2(value) - (delta log2 log2(|X||Y|) + 3)
  bool passed = false;
};

/// Positive part of the tile decomposition of I(XY;Q), bounded by I + 1.
struct MarkovCheck {
  double positive_part = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct PruneResult {
  Rational delta;
  double Delta = 0.0;  // (I(XY;Q) + 1) / delta
  Rational epsilon;    // average error of Q under mu
  double information = 0.0;
  std::vector<Rational> outcome_mass;     // p(q)
  std::vector<double> theta;              // p(q) 2^Delta
  std::vector<std::vector<bool>> bad;     // parallel to slice.outcomes[q].tiles
  SliceResult slice;
  TileWeighting pruned;                   // w'
  Rational removed_mass;                  // sum over bad pairs of p(q,t)
  bool trivial = false;                   // |X||Y| = 1

  MissingMassCheck missing_mass;
  TileBoundCheck tile_bound;
  PrunedCertificateCheck certificate;
  FinalInequalityCheck final_inequality;
  MarkovCheck markov;

  bool passed() const {
    return missing_mass.passed && tile_bound.passed && certificate.passed && final_inequality.passed &&
           markov.passed;
  }
};

/// Prunes the sliced tiling of Q above the per-outcome thresholds theta_q
/// and verifies every accounting step of the resulting relaxed certificate.
/// Requires 0 < delta <= 1.
PruneResult prune(const Relation& rel, const Pseudotranscript& q, const InputDistribution& mu, const Rational& delta,
                  const BoundOptions& options = {});

}  // namespace commlb
