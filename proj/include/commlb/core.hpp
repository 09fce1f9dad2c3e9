#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "commlb/rational.hpp"

namespace commlb {

/// Inputs are indexed 0..size-1 and subsets are stored as bitmasks, so every
/// alphabet is limited to this many symbols.
inline constexpr std::size_t kMaxAlphabet = 63;

/// Dense row-major table indexed by (x, y).
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& at(std::size_t x, std::size_t y) { return data_[x * cols_ + y]; }
  const T& at(std::size_t x, std::size_t y) const { return data_[x * cols_ + y]; }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalGrid = Grid<Rational>;

/// f : X x Y -> 2^Z with nonempty accept sets.
class Relation {
 public:
  /// accept[x][y] lists the acceptable outputs of cell (x, y).
  Relation(std::size_t x_size, std::size_t y_size, std::size_t z_size,
           const std::vector<std::vector<std::vector<int>>>& accept);

  /// Relation defined by a total function: f(x, y) = {g(x, y)}.
  template <class Fn>
  static Relation from_function(std::size_t x_size, std::size_t y_size, std::size_t z_size, Fn fn) {
    std::vector<std::vector<std::vector<int>>> accept(x_size, std::vector<std::vector<int>>(y_size));
    for (std::size_t x = 0; x < x_size; ++x)
      for (std::size_t y = 0; y < y_size; ++y) accept[x][y] = {static_cast<int>(fn(x, y))};
    return Relation(x_size, y_size, z_size, accept);
  }

  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  std::size_t z_size() const { return z_size_; }

  bool accepts(std::size_t x, std::size_t y, int z) const;
  std::vector<int> accept_set(std::size_t x, std::size_t y) const;

 private:
  std::size_t x_size_;
  std::size_t y_size_;
  std::size_t z_size_;
  std::vector<bool> table_;  // (x * y_size + y) * z_size + z
};

/// Per-cell error budget with values in [0, 1].
class ErrorFn {
 public:
  explicit ErrorFn(RationalGrid values);
  static ErrorFn constant(std::size_t x_size, std::size_t y_size, const Rational& eps);

  const Rational& at(std::size_t x, std::size_t y) const { return values_.at(x, y); }
  const RationalGrid& values() const { return values_; }

 private:
  RationalGrid values_;
};

/// Labeled combinatorial rectangle (xs x ys, z). Field order defines the
/// canonical ordering: xs mask, then ys mask, then z.
struct Tile {
  std::uint64_t xs = 0;
  std::uint64_t ys = 0;
  int z = 0;

  bool contains(std::size_t x, std::size_t y) const {
    return ((xs >> x) & 1U) != 0 && ((ys >> y) & 1U) != 0;
  }

  auto operator<=>(const Tile&) const = default;
};

/// Builds a tile from explicit member lists.
Tile make_tile(const std::vector<int>& xs, const std::vector<int>& ys, int z);
std::vector<int> members(std::uint64_t mask);

/// Sparse nonnegative weights over tiles; absent tiles weigh zero.
class TileWeighting {
 public:
  using Map = std::map<Tile, Rational>;

  TileWeighting() = default;

  /// Accumulates weight onto a tile; zero totals are erased.
  void add(const Tile& tile, const Rational& weight);
  void set(const Tile& tile, const Rational& weight);
  Rational weight(const Tile& tile) const;
  Rational total() const;

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Throws ValidationError unless every tile fits the alphabets and every
  /// weight lies in [0, 1].
  void validate(std::size_t x_size, std::size_t y_size, std::size_t z_size) const;

  bool operator==(const TileWeighting&) const = default;

 private:
  Map entries_;
};

/// Joint distribution over X x Y with exact entries summing to 1.
class InputDistribution {
 public:
  explicit InputDistribution(RationalGrid probs);
  static InputDistribution uniform(std::size_t x_size, std::size_t y_size);
  static InputDistribution point(std::size_t x_size, std::size_t y_size, std::size_t x, std::size_t y);

  std::size_t x_size() const { return probs_.rows(); }
  std::size_t y_size() const { return probs_.cols(); }
  const Rational& at(std::size_t x, std::size_t y) const { return probs_.at(x, y); }
  const RationalGrid& probs() const { return probs_; }

 private:
  RationalGrid probs_;
};

/// Tile-count cap: COMMLB_TILE_CAP when set, else 10^6.
std::size_t default_tile_cap();

/// (2^x - 1)(2^y - 1)z, saturating at SIZE_MAX.
std::size_t tile_count(std::size_t x_size, std::size_t y_size, std::size_t z_size);

/// Every tile with nonempty sides, in canonical order.
std::vector<Tile> enumerate_tiles(std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                  std::size_t cap = default_tile_cap());

/// Total weight of tiles containing each cell.
RationalGrid cover_mass(const Relation& rel, const TileWeighting& w);

/// err_{f,w}(x, y): weight of incorrectly labeled tiles containing (x, y).
RationalGrid tiling_error(const Relation& rel, const TileWeighting& w);

/// Weight of correctly labeled tiles containing each cell.
RationalGrid correct_mass(const Relation& rel, const TileWeighting& w);

/// 1 - sum_{x,y} mu(x,y) * correct_mass(x,y).
Rational average_tiling_error(const Relation& rel, const TileWeighting& w, const InputDistribution& mu);

}  // namespace commlb
