#pragma once

#include <optional>

#include "commlb/core.hpp"
#include "commlb/rational.hpp"

namespace commlb {

class Pseudotranscript;

/// Conditional law p(b|a): rows are inputs a, columns are outcomes b.
/// Every row sums to exactly 1.
class Channel {
 public:
  explicit Channel(RationalGrid probs);

  std::size_t inputs() const { return probs_.rows(); }
  std::size_t outcomes() const { return probs_.cols(); }
  const Rational& at(std::size_t a, std::size_t b) const { return probs_.at(a, b); }
  const RationalGrid& probs() const { return probs_; }

 private:
  RationalGrid probs_;
};

/// An information quantity in bits, together with the exact rational whose
/// base-2 logarithm it is (when such a rational exists).
struct InfoValue {
  std::optional<Rational> exact_argument;
  double bits = 0.0;
};

/// Distribution-free order-infinity cost: log2 sum_b max_a p(b|a).
InfoValue renyi_inf_cost(const Channel& ch);

/// Order-infinity mutual information of a joint p(a,b); the max over a is
/// restricted to rows with p(a) > 0. Throws ValidationError unless the
/// joint is nonnegative and sums to 1.
InfoValue renyi_inf_mi(const RationalGrid& joint);

/// Shannon mutual information I(A;B) in bits; 0 log 0 terms vanish.
double shannon_mi(const RationalGrid& joint);

/// I(XY;Q) under mu, from the exact joint mu(x,y) p(q|x,y).
double external_cost(const Pseudotranscript& q, const InputDistribution& mu);

/// I(X;Q|Y) + I(Y;Q|X) under mu.
double internal_cost(const Pseudotranscript& q, const InputDistribution& mu);

}  // namespace commlb
