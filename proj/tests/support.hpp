#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "commlb/core.hpp"
#include "commlb/lp.hpp"
#include "commlb/protocols.hpp"
#include "commlb/pseudotranscript.hpp"

namespace testing {

using commlb::Rational;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(unsigned num, unsigned den) { return below(den) < num; }

  /// Rational in [0, 1] with denominator at most max_den; endpoints are
  /// drawn often so that ties and zeros show up.
  Rational unit(unsigned max_den = 6) {
    switch (below(5)) {
      case 0: return 0;
      case 1: return 1;
      default: {
        const unsigned d = static_cast<unsigned>(between(1, max_den));
        return commlb::make_rational(static_cast<long>(below(d + 1)), d);
      }
    }
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

commlb::Relation equality(std::size_t n = 2);
commlb::Relation conjunction();
/// Every output accepted everywhere.
commlb::Relation constant_relation(std::size_t x_size, std::size_t y_size, std::size_t z_size);

commlb::Relation random_relation(Rng& rng, std::size_t x_size, std::size_t y_size, std::size_t z_size);

/// Weights are positive integers scaled to sum 1, with some zero cells when
/// allow_zeros is set (never all of them).
commlb::RationalGrid random_joint(Rng& rng, std::size_t rows, std::size_t cols, bool allow_zeros);
commlb::InputDistribution random_distribution(Rng& rng, std::size_t x_size, std::size_t y_size, bool allow_zeros);

/// Transcript law of a random private-coin protocol (rational message
/// probabilities, depth at most max_depth), optionally mixed with a second
/// one by a public coin. Such laws always factorize.
commlb::Pseudotranscript random_pseudotranscript(Rng& rng, std::size_t x_size, std::size_t y_size,
                                                 std::size_t z_size, std::size_t max_depth = 3);

/// Random deterministic protocol tree; messages may be constant.
commlb::ProtocolTree random_tree(Rng& rng, std::size_t x_size, std::size_t y_size, std::size_t z_size,
                                 std::size_t max_depth);

/// Bounded random LP: every variable is capped by a <= row so the optimum
/// is finite whenever the program is feasible.
commlb::LinearProgram random_bounded_lp(Rng& rng, std::size_t vars, std::size_t rows);

/// Brute-force LP optimum: enumerates every basis of the standard-form
/// program and keeps the best nonnegative basic solution. Only for a
/// handful of rows and columns. Empty when infeasible.
std::optional<Rational> vertex_optimum(const commlb::LinearProgram& lp);

}  // namespace testing
