#include "commlb/core.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "commlb/errors.hpp"

namespace commlb {

namespace {

void check_alphabet(const char* name, std::size_t size) {
  if (size == 0) throw ValidationError(std::string(name) + " must be at least 1");
  if (size > kMaxAlphabet)
    throw ValidationError(std::string(name) + " = " + std::to_string(size) + " exceeds the supported maximum of " +
                          std::to_string(kMaxAlphabet));
}

std::string cell_name(std::size_t x, std::size_t y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

}  // namespace

Relation::Relation(std::size_t x_size, std::size_t y_size, std::size_t z_size,
                   const std::vector<std::vector<std::vector<int>>>& accept)
    : x_size_(x_size), y_size_(y_size), z_size_(z_size) {
  check_alphabet("x_size", x_size);
  check_alphabet("y_size", y_size);
  if (z_size == 0) throw ValidationError("z_size must be at least 1");
  if (accept.size() != x_size) throw ValidationError("accept must have x_size rows");
  table_.assign(x_size * y_size * z_size, false);
  for (std::size_t x = 0; x < x_size; ++x) {
    if (accept[x].size() != y_size) throw ValidationError("accept row " + std::to_string(x) + " must have y_size entries");
    for (std::size_t y = 0; y < y_size; ++y) {
      if (accept[x][y].empty()) throw ValidationError("accept set at " + cell_name(x, y) + " is empty");
      for (int z : accept[x][y]) {
        if (z < 0 || static_cast<std::size_t>(z) >= z_size)
          throw ValidationError("accept set at " + cell_name(x, y) + " has output " + std::to_string(z) +
                                " outside [0," + std::to_string(z_size) + ")");
        table_[(x * y_size + y) * z_size + static_cast<std::size_t>(z)] = true;
      }
    }
  }
}

bool Relation::accepts(std::size_t x, std::size_t y, int z) const {
  if (z < 0 || static_cast<std::size_t>(z) >= z_size_) return false;
  return table_[(x * y_size_ + y) * z_size_ + static_cast<std::size_t>(z)];
}

std::vector<int> Relation::accept_set(std::size_t x, std::size_t y) const {
  std::vector<int> out;
  for (std::size_t z = 0; z < z_size_; ++z)
    if (accepts(x, y, static_cast<int>(z))) out.push_back(static_cast<int>(z));
  return out;
}

ErrorFn::ErrorFn(RationalGrid values) : values_(std::move(values)) {
  for (std::size_t x = 0; x < values_.rows(); ++x)
    for (std::size_t y = 0; y < values_.cols(); ++y) {
      const Rational& v = values_.at(x, y);
      if (v < 0 || v > 1)
        throw ValidationError("error value " + to_string(v) + " at " + cell_name(x, y) + " is outside [0,1]");
    }
}

ErrorFn ErrorFn::constant(std::size_t x_size, std::size_t y_size, const Rational& eps) {
  return ErrorFn(RationalGrid(x_size, y_size, eps));
}

Tile make_tile(const std::vector<int>& xs, const std::vector<int>& ys, int z) {
  Tile t;
  for (int x : xs) {
    if (x < 0 || static_cast<std::size_t>(x) >= kMaxAlphabet) throw ValidationError("tile x index out of range");
    t.xs |= std::uint64_t{1} << x;
  }
  for (int y : ys) {
    if (y < 0 || static_cast<std::size_t>(y) >= kMaxAlphabet) throw ValidationError("tile y index out of range");
    t.ys |= std::uint64_t{1} << y;
  }
  t.z = z;
  return t;
}

std::vector<int> members(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1U) out.push_back(i);
  return out;
}

void TileWeighting::add(const Tile& tile, const Rational& weight) {
  auto [it, inserted] = entries_.try_emplace(tile, weight);
  if (!inserted) it->second += weight;
  if (sgn(it->second) == 0) entries_.erase(it);
}

void TileWeighting::set(const Tile& tile, const Rational& weight) {
  if (sgn(weight) == 0) {
    entries_.erase(tile);
  } else {
    entries_[tile] = weight;
  }
}

Rational TileWeighting::weight(const Tile& tile) const {
  auto it = entries_.find(tile);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational TileWeighting::total() const {
  Rational sum = 0;
  for (const auto& [tile, w] : entries_) sum += w;
  return sum;
}

void TileWeighting::validate(std::size_t x_size, std::size_t y_size, std::size_t z_size) const {
  const std::uint64_t x_full = (std::uint64_t{1} << x_size) - 1;
  const std::uint64_t y_full = (std::uint64_t{1} << y_size) - 1;
  for (const auto& [tile, w] : entries_) {
    if (tile.xs == 0 || tile.ys == 0) throw ValidationError("tile with an empty side");
    if ((tile.xs & ~x_full) != 0) throw ValidationError("tile has an x index outside [0," + std::to_string(x_size) + ")");
    if ((tile.ys & ~y_full) != 0) throw ValidationError("tile has a y index outside [0," + std::to_string(y_size) + ")");
    if (tile.z < 0 || static_cast<std::size_t>(tile.z) >= z_size)
      throw ValidationError("tile output " + std::to_string(tile.z) + " outside [0," + std::to_string(z_size) + ")");
    if (w < 0 || w > 1) throw ValidationError("tile weight " + to_string(w) + " outside [0,1]");
  }
}

InputDistribution::InputDistribution(RationalGrid probs) : probs_(std::move(probs)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw ValidationError("input distribution has an empty side");
  Rational sum = 0;
  for (std::size_t x = 0; x < probs_.rows(); ++x)
    for (std::size_t y = 0; y < probs_.cols(); ++y) {
      if (probs_.at(x, y) < 0)
        throw ValidationError("negative probability " + to_string(probs_.at(x, y)) + " at " + cell_name(x, y));
      sum += probs_.at(x, y);
    }
  if (sum != 1) throw ValidationError("input distribution sums to " + to_string(sum) + ", not 1");
}

InputDistribution InputDistribution::uniform(std::size_t x_size, std::size_t y_size) {
  const Rational p = make_rational(1, x_size * y_size);
  return InputDistribution(RationalGrid(x_size, y_size, p));
}

InputDistribution InputDistribution::point(std::size_t x_size, std::size_t y_size, std::size_t x, std::size_t y) {
  RationalGrid g(x_size, y_size, Rational(0));
  g.at(x, y) = 1;
  return InputDistribution(std::move(g));
}

std::size_t default_tile_cap() {
  constexpr std::size_t kDefault = 1'000'000;
  const char* env = std::getenv("COMMLB_TILE_CAP");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw ParseError("COMMLB_TILE_CAP is not a nonnegative integer: '" + std::string(env) + "'");
  return static_cast<std::size_t>(v);
}

std::size_t tile_count(std::size_t x_size, std::size_t y_size, std::size_t z_size) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  if (x_size >= 64 || y_size >= 64) return kMax;
  const std::size_t a = (std::size_t{1} << x_size) - 1;
  const std::size_t b = (std::size_t{1} << y_size) - 1;
  if (a != 0 && b > kMax / a) return kMax;
  const std::size_t ab = a * b;
  if (ab != 0 && z_size > kMax / ab) return kMax;
  return ab * z_size;
}

std::vector<Tile> enumerate_tiles(std::size_t x_size, std::size_t y_size, std::size_t z_size, std::size_t cap) {
  if (x_size == 0 || y_size == 0 || z_size == 0) throw ValidationError("alphabet sizes must be at least 1");
  const std::size_t count = tile_count(x_size, y_size, z_size);
  if (count > cap)
    throw SizeLimitError("tile universe has " + std::to_string(count) + " tiles, above the cap of " +
                         std::to_string(cap));
  std::vector<Tile> tiles;
  tiles.reserve(count);
  const std::uint64_t x_end = std::uint64_t{1} << x_size;
  const std::uint64_t y_end = std::uint64_t{1} << y_size;
  for (std::uint64_t xs = 1; xs < x_end; ++xs)
    for (std::uint64_t ys = 1; ys < y_end; ++ys)
      for (std::size_t z = 0; z < z_size; ++z) tiles.push_back(Tile{xs, ys, static_cast<int>(z)});
  return tiles;
}

RationalGrid cover_mass(const Relation& rel, const TileWeighting& w) {
  RationalGrid out(rel.x_size(), rel.y_size(), Rational(0));
  for (const auto& [tile, weight] : w.entries())
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (tile.contains(x, y)) out.at(x, y) += weight;
  return out;
}

RationalGrid tiling_error(const Relation& rel, const TileWeighting& w) {
  RationalGrid out(rel.x_size(), rel.y_size(), Rational(0));
  for (const auto& [tile, weight] : w.entries())
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (tile.contains(x, y) && !rel.accepts(x, y, tile.z)) out.at(x, y) += weight;
  return out;
}

RationalGrid correct_mass(const Relation& rel, const TileWeighting& w) {
  RationalGrid out(rel.x_size(), rel.y_size(), Rational(0));
  for (const auto& [tile, weight] : w.entries())
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (tile.contains(x, y) && rel.accepts(x, y, tile.z)) out.at(x, y) += weight;
  return out;
}

Rational average_tiling_error(const Relation& rel, const TileWeighting& w, const InputDistribution& mu) {
  if (mu.x_size() != rel.x_size() || mu.y_size() != rel.y_size())
    throw ValidationError("input distribution shape does not match the relation");
  const RationalGrid correct = correct_mass(rel, w);
  Rational sum = 0;
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y) sum += mu.at(x, y) * correct.at(x, y);
  return 1 - sum;
}

}  // namespace commlb
