#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "commlb/rational.hpp"

namespace commlb {

enum class Sense { Equal, GreaterEqual, LessEqual };

/// Sorted (index, value) pairs; indices absent from the list are zero.
struct SparseVector {
  std::vector<std::pair<std::size_t, Rational>> entries;

  Rational at(std::size_t index) const;
  bool operator==(const SparseVector&) const = default;
};

struct Constraint {
  SparseVector coeffs;
  Sense sense = Sense::Equal;
  Rational rhs;
};

/// minimize objective . w  subject to constraints, w >= 0.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;

  std::size_t variables() const { return objective.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;          // meaningful only when optimal
  SparseVector assignment;  // basic feasible point when optimal
};

struct SolveOptions {
  std::size_t max_variables = 200'000;
};

/// Two-phase primal simplex over exact rationals with Bland's rule.
/// Deterministic for a given input. Throws SizeLimitError above the
/// variable cap and ValidationError on inconsistent dimensions.
LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

struct ConstraintCheck {
  std::size_t index = 0;
  Rational lhs;
  Rational slack;  // lhs - rhs
  bool satisfied = false;
};

struct FeasibilityReport {
  std::vector<ConstraintCheck> constraints;
  std::vector<std::size_t> negative_variables;
  Rational objective;
  bool feasible = false;

  std::vector<std::size_t> violated() const;
};

/// Exact evaluation of every constraint at the given point.
FeasibilityReport check_feasible(const LinearProgram& lp, const SparseVector& assignment);

}  // namespace commlb
