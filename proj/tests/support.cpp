#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace testing {

using namespace commlb;

Relation equality(std::size_t n) {
  return Relation::from_function(n, n, 2, [](std::size_t x, std::size_t y) { return x == y ? 1 : 0; });
}

Relation conjunction() {
  return Relation::from_function(2, 2, 2, [](std::size_t x, std::size_t y) { return x & y; });
}

Relation constant_relation(std::size_t x_size, std::size_t y_size, std::size_t z_size) {
  std::vector<int> all(z_size);
  std::iota(all.begin(), all.end(), 0);
  return Relation(x_size, y_size, z_size,
                  std::vector<std::vector<std::vector<int>>>(x_size, std::vector<std::vector<int>>(y_size, all)));
}

Relation random_relation(Rng& rng, std::size_t x_size, std::size_t y_size, std::size_t z_size) {
  std::vector<std::vector<std::vector<int>>> accept(x_size, std::vector<std::vector<int>>(y_size));
  for (auto& row : accept)
    for (auto& cell : row) {
      // Mostly single answers, sometimes several.
      const std::uint64_t full = (std::uint64_t{1} << z_size) - 1;
      std::uint64_t mask = rng.chance(2, 3) ? std::uint64_t{1} << rng.below(z_size) : 1 + rng.below(full);
      for (std::size_t z = 0; z < z_size; ++z)
        if ((mask >> z) & 1U) cell.push_back(static_cast<int>(z));
    }
  return Relation(x_size, y_size, z_size, accept);
}

RationalGrid random_joint(Rng& rng, std::size_t rows, std::size_t cols, bool allow_zeros) {
  RationalGrid g(rows, cols, Rational(0));
  Rational sum = 0;
  while (sgn(sum) == 0) {
    for (std::size_t x = 0; x < rows; ++x)
      for (std::size_t y = 0; y < cols; ++y) {
        const bool zero = allow_zeros && rng.chance(1, 4);
        g.at(x, y) = zero ? 0 : static_cast<long>(rng.between(1, 9));
        sum += g.at(x, y);
      }
  }
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) g.at(x, y) /= sum;
  return g;
}

InputDistribution random_distribution(Rng& rng, std::size_t x_size, std::size_t y_size, bool allow_zeros) {
  return InputDistribution(random_joint(rng, x_size, y_size, allow_zeros));
}

namespace {

struct TranscriptBuilder {
  Rng& rng;
  std::size_t nx, ny, nz;
  std::vector<Outcome> out;

  void grow(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t depth) {
    if (depth == 0 || rng.chance(1, 4)) {
      Outcome o{static_cast<int>(rng.below(nz)), RationalGrid(nx, ny, Rational(0))};
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) o.matrix.at(x, y) = a[x] * b[y];
      out.push_back(std::move(o));
      return;
    }
    const bool alice = rng.chance(1, 2);
    const std::vector<Rational>& side = alice ? a : b;
    std::vector<Rational> zero(side.size()), one(side.size());
    for (std::size_t v = 0; v < side.size(); ++v) {
      const Rational p = rng.unit();
      one[v] = side[v] * p;
      zero[v] = side[v] - one[v];
    }
    grow(alice ? zero : a, alice ? b : zero, depth - 1);
    grow(alice ? one : a, alice ? b : one, depth - 1);
  }
};

}  // namespace

Pseudotranscript random_pseudotranscript(Rng& rng, std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                         std::size_t max_depth) {
  TranscriptBuilder builder{rng, x_size, y_size, z_size, {}};
  const std::vector<Rational> ones(y_size, Rational(1));
  if (rng.chance(1, 3)) {
    const unsigned d = static_cast<unsigned>(rng.between(2, 5));
    const Rational c = make_rational(static_cast<long>(rng.between(1, d - 1)), d);
    builder.grow(std::vector<Rational>(x_size, c), ones, max_depth);
    builder.grow(std::vector<Rational>(x_size, Rational(1 - c)), ones, max_depth);
  } else {
    builder.grow(std::vector<Rational>(x_size, Rational(1)), ones, max_depth);
  }
  return Pseudotranscript(x_size, y_size, z_size, std::move(builder.out));
}

ProtocolTree random_tree(Rng& rng, std::size_t x_size, std::size_t y_size, std::size_t z_size,
                         std::size_t max_depth) {
  if (max_depth == 0 || rng.chance(1, 4))
    return ProtocolTree::leaf(x_size, y_size, z_size, static_cast<int>(rng.below(z_size)));
  const Party p = rng.chance(1, 2) ? Party::Alice : Party::Bob;
  std::vector<std::uint8_t> msg(p == Party::Alice ? x_size : y_size);
  for (auto& bit : msg) bit = static_cast<std::uint8_t>(rng.below(2));
  return ProtocolTree::speak(p, std::move(msg), random_tree(rng, x_size, y_size, z_size, max_depth - 1),
                             random_tree(rng, x_size, y_size, z_size, max_depth - 1));
}

LinearProgram random_bounded_lp(Rng& rng, std::size_t vars, std::size_t rows) {
  LinearProgram lp;
  for (std::size_t j = 0; j < vars; ++j) lp.objective.push_back(static_cast<long>(rng.below(7)) - 3);
  for (std::size_t i = 0; i < rows; ++i) {
    Constraint c;
    for (std::size_t j = 0; j < vars; ++j) {
      const long v = static_cast<long>(rng.below(7)) - 3;
      if (v != 0 && rng.chance(2, 3)) c.coeffs.entries.emplace_back(j, v);
    }
    c.sense = static_cast<Sense>(rng.below(3));
    c.rhs = static_cast<long>(rng.below(9)) - 2;
    lp.constraints.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < vars; ++j)
    lp.constraints.push_back({SparseVector{{{j, Rational(1)}}}, Sense::LessEqual, Rational(4)});
  return lp;
}

namespace {

// Solves the square system B v = rhs exactly; empty when B is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> b, std::vector<Rational> rhs) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(b[pivot][col]) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(b[pivot], b[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(b[r][col]) == 0) continue;
      const Rational f = b[r][col] / b[col][col];
      for (std::size_t k = col; k < n; ++k) b[r][k] -= f * b[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= b[r][r];
  return rhs;
}

}  // namespace

std::optional<Rational> vertex_optimum(const LinearProgram& lp) {
  const std::size_t m = lp.constraints.size();
  const std::size_t n = lp.variables();
  // Standard form: one slack or surplus column per inequality.
  std::vector<std::vector<Rational>> a(m);
  std::vector<Rational> cost = lp.objective;
  std::vector<Rational> b(m);
  std::size_t extra = 0;
  for (const Constraint& c : lp.constraints)
    if (c.sense != Sense::Equal) ++extra;
  cost.resize(n + extra, Rational(0));
  std::size_t slack = n;
  for (std::size_t i = 0; i < m; ++i) {
    a[i].assign(n + extra, Rational(0));
    for (const auto& [j, v] : lp.constraints[i].coeffs.entries) a[i][j] = v;
    if (lp.constraints[i].sense == Sense::LessEqual) a[i][slack++] = 1;
    if (lp.constraints[i].sense == Sense::GreaterEqual) a[i][slack++] = -1;
    b[i] = lp.constraints[i].rhs;
  }
  const std::size_t cols = n + extra;
  // Drop linearly dependent rows so that some basis is square and regular.
  std::vector<std::vector<Rational>> reduced;
  std::vector<std::size_t> pivots, keep;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row = a[i];
    row.push_back(b[i]);
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      if (sgn(row[pivots[k]]) == 0) continue;
      const Rational f = row[pivots[k]] / reduced[k][pivots[k]];
      for (std::size_t j = 0; j <= cols; ++j) row[j] -= f * reduced[k][j];
    }
    const auto lead = std::find_if(row.begin(), row.end() - 1, [](const Rational& r) { return sgn(r) != 0; });
    if (lead == row.end() - 1) {
      if (sgn(row.back()) != 0) return std::nullopt;
      continue;
    }
    pivots.push_back(static_cast<std::size_t>(lead - row.begin()));
    reduced.push_back(std::move(row));
    keep.push_back(i);
  }
  std::vector<std::vector<Rational>> kept_a;
  std::vector<Rational> kept_b;
  for (std::size_t i : keep) {
    kept_a.push_back(a[i]);
    kept_b.push_back(b[i]);
  }
  a = std::move(kept_a);
  b = std::move(kept_b);
  const std::size_t rank = a.size();

  std::optional<Rational> best;
  std::vector<bool> pick(cols, false);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(rank), pick.end(), true);
  do {
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < cols; ++j)
      if (pick[j]) basis.push_back(j);
    std::vector<std::vector<Rational>> sq(rank, std::vector<Rational>(rank));
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t k = 0; k < rank; ++k) sq[i][k] = a[i][basis[k]];
    const auto v = solve_square(sq, b);
    if (!v) continue;
    if (std::any_of(v->begin(), v->end(), [](const Rational& r) { return sgn(r) < 0; })) continue;
    Rational obj = 0;
    for (std::size_t k = 0; k < rank; ++k) obj += cost[basis[k]] * (*v)[k];
    if (!best || obj < *best) best = obj;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace testing
