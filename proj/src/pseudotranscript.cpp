#include "commlb/pseudotranscript.hpp"

#include <sstream>

#include "commlb/errors.hpp"

namespace commlb {

namespace {

std::string cell_name(const Cell& c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

void check_shapes(const Relation& rel, const Pseudotranscript& q) {
  if (rel.x_size() != q.x_size() || rel.y_size() != q.y_size() || rel.z_size() != q.z_size())
    throw ValidationError("pseudotranscript alphabets do not match the relation");
}

}  // namespace

FactorizationCheck check_and_factorize(const RationalGrid& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();

  std::vector<bool> row_used(rows, false);
  std::vector<bool> col_used(cols, false);
  std::vector<std::size_t> row_hit(rows, 0);  // some support column in this row
  std::vector<std::size_t> col_hit(cols, 0);  // some support row in this column
  bool anchored = false;
  Cell anchor;
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) {
      if (sgn(matrix.at(x, y)) < 0) throw ValidationError("negative entry in outcome matrix at " + cell_name({x, y}));
      if (sgn(matrix.at(x, y)) == 0) continue;
      if (!anchored) {
        anchor = {x, y};
        anchored = true;
      }
      if (!row_used[x]) row_hit[x] = y;
      if (!col_used[y]) col_hit[y] = x;
      row_used[x] = true;
      col_used[y] = true;
    }

  Factorization f{std::vector<Rational>(rows, Rational(0)), std::vector<Rational>(cols, Rational(0))};
  if (!anchored) return f;

  for (std::size_t x = 0; x < rows; ++x) {
    if (!row_used[x]) continue;
    for (std::size_t y = 0; y < cols; ++y) {
      if (!col_used[y] || sgn(matrix.at(x, y)) != 0) continue;
      return NonRectangularSupport{{x, y}, {x, row_hit[x]}, {col_hit[y], y}};
    }
  }

  const Rational& pivot = matrix.at(anchor.x, anchor.y);
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) {
      if (!row_used[x] || !col_used[y]) continue;
      const Rational minor = pivot * matrix.at(x, y) - matrix.at(anchor.x, y) * matrix.at(x, anchor.y);
      if (sgn(minor) != 0) return NonzeroMinor{anchor.x, x, anchor.y, y, minor};
    }

  for (std::size_t x = 0; x < rows; ++x) f.alpha[x] = matrix.at(x, anchor.y);
  for (std::size_t y = 0; y < cols; ++y) f.beta[y] = matrix.at(anchor.x, y) / pivot;
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y)
      if (f.alpha[x] * f.beta[y] != matrix.at(x, y))
        throw Error("internal: factorization of a rank-one matrix failed to reproduce it");
  return f;
}

std::string describe(const FactorizationCheck& check) {
  std::ostringstream os;
  if (std::holds_alternative<Factorization>(check)) {
    os << "factorizes";
  } else if (const auto* r = std::get_if<NonRectangularSupport>(&check)) {
    os << "support is not a rectangle: " << cell_name(r->row_witness) << " and " << cell_name(r->col_witness)
       << " are nonzero but " << cell_name(r->missing) << " is zero";
  } else {
    const auto& m = std::get<NonzeroMinor>(check);
    os << "2x2 minor on rows {" << m.x0 << "," << m.x1 << "} and columns {" << m.y0 << "," << m.y1
       << "} equals " << to_string(m.value) << ", not 0";
  }
  return os.str();
}

Pseudotranscript::Pseudotranscript(std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                   std::vector<Outcome> outcomes)
    : x_size_(x_size), y_size_(y_size), z_size_(z_size) {
  if (x_size == 0 || y_size == 0 || z_size == 0) throw ValidationError("alphabet sizes must be at least 1");
  if (x_size > kMaxAlphabet || y_size > kMaxAlphabet) throw ValidationError("input alphabet too large");
  RationalGrid sums(x_size, y_size, Rational(0));
  for (std::size_t q = 0; q < outcomes.size(); ++q) {
    Outcome& o = outcomes[q];
    const std::string where = "outcome " + std::to_string(q);
    if (o.z < 0 || static_cast<std::size_t>(o.z) >= z_size)
      throw ValidationError(where + ": label " + std::to_string(o.z) + " outside [0," + std::to_string(z_size) + ")");
    if (o.matrix.rows() != x_size || o.matrix.cols() != y_size)
      throw ValidationError(where + ": matrix shape does not match the alphabets");
    bool zero = true;
    for (std::size_t x = 0; x < x_size; ++x)
      for (std::size_t y = 0; y < y_size; ++y) {
        if (sgn(o.matrix.at(x, y)) < 0) throw ValidationError(where + ": negative probability at " + cell_name({x, y}));
        if (sgn(o.matrix.at(x, y)) != 0) zero = false;
        sums.at(x, y) += o.matrix.at(x, y);
      }
    if (zero) continue;
    FactorizationCheck check = check_and_factorize(o.matrix);
    if (!std::holds_alternative<Factorization>(check))
      throw ValidationError(where + " violates the factorization condition: " + describe(check));
    factors_.push_back(std::get<Factorization>(std::move(check)));
    outcomes_.push_back(std::move(o));
  }
  for (std::size_t x = 0; x < x_size; ++x)
    for (std::size_t y = 0; y < y_size; ++y)
      if (sums.at(x, y) != 1)
        throw ValidationError("outcome probabilities at " + cell_name({x, y}) + " sum to " + to_string(sums.at(x, y)) +
                              ", not 1");
}

Rational Pseudotranscript::max_prob(std::size_t q) const {
  Rational best = 0;
  for (const Rational& p : outcomes_[q].matrix.data())
    if (p > best) best = p;
  return best;
}

Rational Pseudotranscript::renyi_argument() const {
  Rational sum = 0;
  for (std::size_t q = 0; q < outcomes_.size(); ++q) sum += max_prob(q);
  return sum;
}

RationalGrid pseudotranscript_error(const Relation& rel, const Pseudotranscript& q) {
  check_shapes(rel, q);
  RationalGrid err(q.x_size(), q.y_size(), Rational(0));
  for (const Outcome& o : q.outcomes())
    for (std::size_t x = 0; x < q.x_size(); ++x)
      for (std::size_t y = 0; y < q.y_size(); ++y)
        if (!rel.accepts(x, y, o.z)) err.at(x, y) += o.matrix.at(x, y);
  return err;
}

Rational average_pseudotranscript_error(const Relation& rel, const Pseudotranscript& q, const InputDistribution& mu) {
  if (mu.x_size() != q.x_size() || mu.y_size() != q.y_size())
    throw ValidationError("input distribution shape does not match the pseudotranscript");
  const RationalGrid err = pseudotranscript_error(rel, q);
  Rational sum = 0;
  for (std::size_t x = 0; x < q.x_size(); ++x)
    for (std::size_t y = 0; y < q.y_size(); ++y) sum += mu.at(x, y) * err.at(x, y);
  return sum;
}

std::vector<Rational> outcome_marginal(const Pseudotranscript& q, const InputDistribution& mu) {
  if (mu.x_size() != q.x_size() || mu.y_size() != q.y_size())
    throw ValidationError("input distribution shape does not match the pseudotranscript");
  std::vector<Rational> out(q.size(), Rational(0));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t x = 0; x < q.x_size(); ++x)
      for (std::size_t y = 0; y < q.y_size(); ++y) out[i] += mu.at(x, y) * q.prob(i, x, y);
  return out;
}

Channel channel_of(const Pseudotranscript& q) {
  RationalGrid probs(q.x_size() * q.y_size(), q.size(), Rational(0));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t x = 0; x < q.x_size(); ++x)
      for (std::size_t y = 0; y < q.y_size(); ++y) probs.at(x * q.y_size() + y, i) = q.prob(i, x, y);
  return Channel(std::move(probs));
}

}  // namespace commlb
