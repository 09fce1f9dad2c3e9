#pragma once

#include <string>
#include <variant>
#include <vector>

#include "commlb/core.hpp"
#include "commlb/measures.hpp"

namespace commlb {

struct Cell {
  std::size_t x = 0;
  std::size_t y = 0;
  bool operator==(const Cell&) const = default;
};

/// Rank-one split of one outcome matrix: M(x,y) = alpha[x] * beta[y].
struct Factorization {
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
};

/// The support is not a rectangle: `missing` is zero although its row
/// holds `row_witness` and its column holds `col_witness`, both nonzero.
struct NonRectangularSupport {
  Cell missing;
  Cell row_witness;
  Cell col_witness;
};

/// M(x0,y0) M(x1,y1) - M(x0,y1) M(x1,y0) = value != 0.
struct NonzeroMinor {
  std::size_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  Rational value;
};

using FactorizationCheck = std::variant<Factorization, NonRectangularSupport, NonzeroMinor>;

/// Decides whether a nonnegative matrix is an outer product of nonnegative
/// vectors. On success the anchor is the lexicographically first support
/// cell (x0,y0): alpha(x) = M(x,y0), beta(y) = M(x0,y)/M(x0,y0). An all-zero
/// matrix factorizes as alpha = beta = 0.
FactorizationCheck check_and_factorize(const RationalGrid& matrix);

/// Human-readable rendering of a rejection witness (or "factorizes").
std::string describe(const FactorizationCheck& check);

struct Outcome {
  int z = 0;
  RationalGrid matrix;  // p(q | x, y)
};

/// A channel from inputs (x,y) to labeled outcomes whose every outcome
/// matrix factorizes. Construction validates everything and drops outcomes
/// whose matrix is identically zero.
class Pseudotranscript {
 public:
  Pseudotranscript(std::size_t x_size, std::size_t y_size, std::size_t z_size, std::vector<Outcome> outcomes);

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  std::size_t z_size() const { return z_size_; }
  std::size_t size() const { return outcomes_.size(); }

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const Outcome& outcome(std::size_t q) const { return outcomes_[q]; }
  const Factorization& factors(std::size_t q) const { return factors_[q]; }
  const Rational& prob(std::size_t q, std::size_t x, std::size_t y) const { return outcomes_[q].matrix.at(x, y); }

  /// max_{x,y} p(q|x,y).
  Rational max_prob(std::size_t q) const;

  /// Exact order-infinity argument: sum_q max_{x,y} p(q|x,y).
  Rational renyi_argument() const;

 private:
  std::size_t x_size_;
  std::size_t y_size_;
  std::size_t z_size_;
  std::vector<Outcome> outcomes_;
  std::vector<Factorization> factors_;
};

/// err_{f,Q}(x,y) = Pr[z_Q not in f(x,y) | x,y].
RationalGrid pseudotranscript_error(const Relation& rel, const Pseudotranscript& q);

/// Average of pseudotranscript_error under mu.
Rational average_pseudotranscript_error(const Relation& rel, const Pseudotranscript& q, const InputDistribution& mu);

/// p(q) = sum_{x,y} mu(x,y) p(q|x,y).
std::vector<Rational> outcome_marginal(const Pseudotranscript& q, const InputDistribution& mu);

/// Rows indexed by x * y_size + y, columns by outcome.
Channel channel_of(const Pseudotranscript& q);

}  // namespace commlb
