#include "commlb/lp.hpp"

#include <algorithm>

#include "commlb/errors.hpp"

namespace commlb {

Rational SparseVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::size_t i) { return e.first < i; });
  return it != entries.end() && it->first == index ? it->second : Rational(0);
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense simplex tableau. Row i holds B^{-1}A in columns [0, cols) and
// B^{-1}b in column `cols`. The cost row holds reduced costs and -z.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, std::vector<Rational>(cols + 1)), cost_(cols + 1), basis_(rows, 0) {}

  std::size_t rows() const { return rows_.size(); }
  Rational& at(std::size_t i, std::size_t j) { return rows_[i][j]; }
  Rational& rhs(std::size_t i) { return rows_[i][cols_]; }
  Rational& cost(std::size_t j) { return cost_[j]; }
  Rational& objective() { return cost_[cols_]; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }

  void erase_row(std::size_t i) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  // Cost row from scratch: d_j = c_j - sum_i c_{B(i)} T(i,j).
  void price(const std::vector<Rational>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) cost_[j] = j < cols_ ? c[j] : Rational(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j)
        if (sgn(rows_[i][j]) != 0) cost_[j] -= cb * rows_[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    std::vector<Rational>& prow = rows_[r];
    const Rational inv = 1 / prow[e];
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(prow[j]) == 0) continue;
      prow[j] *= inv;
      nonzero_.push_back(j);
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[e]) == 0) return;
      factor_ = row[e];
      for (std::size_t j : nonzero_) {
        mpq_mul(scratch_.get_mpq_t(), factor_.get_mpq_t(), prow[j].get_mpq_t());
        mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), scratch_.get_mpq_t());
      }
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(cost_);
    basis_[r] = e;
  }

  // Bland: first improving column, then the lowest-index basic variable
  // among the minimum-ratio rows. Returns false when unbounded.
  enum class Step { Optimal, Pivoted, Unbounded };
  Step step(std::size_t allowed_cols) {
    std::size_t enter = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j)
      if (sgn(cost_[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == allowed_cols) return Step::Optimal;
    std::size_t leave = rows_.size();
    Rational best;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (sgn(rows_[i][enter]) <= 0) continue;
      Rational ratio = rows_[i][cols_] / rows_[i][enter];
      if (leave == rows_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        best = std::move(ratio);
        leave = i;
      }
    }
    if (leave == rows_.size()) return Step::Unbounded;
    pivot(leave, enter);
    return Step::Pivoted;
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
  Rational factor_;
  Rational scratch_;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
  const std::size_t n = lp.variables();
  if (n > options.max_variables)
    throw SizeLimitError("linear program has " + std::to_string(n) + " variables, above the cap of " +
                         std::to_string(options.max_variables));
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [j, v] : lp.constraints[i].coeffs.entries) {
      if (j >= n) throw ValidationError("constraint " + std::to_string(i) + " references variable " + std::to_string(j));
      if (!first && j <= prev) throw ValidationError("constraint " + std::to_string(i) + " has unsorted coefficients");
      prev = j;
      first = false;
    }
  }

  // Normalize to rhs >= 0, then count slack/surplus and artificial columns.
  const std::size_t m = lp.constraints.size();
  std::vector<Sense> sense(m);
  std::vector<bool> flip(m, false);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = lp.constraints[i];
    sense[i] = c.sense;
    if (sgn(c.rhs) < 0) {
      flip[i] = true;
      if (c.sense == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
      else if (c.sense == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
    }
    if (sense[i] != Sense::Equal) ++slacks;
    if (sense[i] != Sense::LessEqual) ++artificials;
  }
  const std::size_t art_start = n + slacks;
  const std::size_t cols = art_start + artificials;

  Tableau t(m, cols);
  std::size_t next_slack = n;
  std::size_t next_art = art_start;
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = lp.constraints[i];
    for (const auto& [j, v] : c.coeffs.entries) t.at(i, j) = flip[i] ? Rational(-v) : v;
    t.rhs(i) = flip[i] ? Rational(-c.rhs) : c.rhs;
    if (sense[i] == Sense::LessEqual) {
      t.at(i, next_slack) = 1;
      t.basic(i) = next_slack++;
    } else {
      if (sense[i] == Sense::GreaterEqual) t.at(i, next_slack++) = -1;
      t.at(i, next_art) = 1;
      t.basic(i) = next_art++;
    }
  }

  LpSolution sol;

  // Phase 1: minimize the sum of artificials.
  if (artificials > 0) {
    std::vector<Rational> phase1(cols, Rational(0));
    for (std::size_t j = art_start; j < cols; ++j) phase1[j] = 1;
    t.price(phase1);
    while (t.step(cols) == Tableau::Step::Pivoted) {
    }
    if (sgn(t.objective()) != 0) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basic(i) < art_start) {
        ++i;
        continue;
      }
      std::size_t col = art_start;
      for (std::size_t j = 0; j < art_start; ++j)
        if (sgn(t.at(i, j)) != 0) {
          col = j;
          break;
        }
      if (col == art_start) {
        t.erase_row(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
  }

  // Phase 2 over the structural and slack columns only.
  std::vector<Rational> phase2(cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  t.price(phase2);
  for (;;) {
    const auto s = t.step(art_start);
    if (s == Tableau::Step::Optimal) break;
    if (s == Tableau::Step::Unbounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
  }

  sol.status = LpStatus::Optimal;
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.basic(i) < n && sgn(t.rhs(i)) != 0) sol.assignment.entries.emplace_back(t.basic(i), t.rhs(i));
  std::sort(sol.assignment.entries.begin(), sol.assignment.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  sol.value = 0;
  for (const auto& [j, v] : sol.assignment.entries) sol.value += lp.objective[j] * v;
  return sol;
}

std::vector<std::size_t> FeasibilityReport::violated() const {
  std::vector<std::size_t> out;
  for (const auto& c : constraints)
    if (!c.satisfied) out.push_back(c.index);
  return out;
}

FeasibilityReport check_feasible(const LinearProgram& lp, const SparseVector& assignment) {
  FeasibilityReport report;
  report.objective = 0;
  for (const auto& [j, v] : assignment.entries) {
    if (j >= lp.variables()) throw ValidationError("assignment references variable " + std::to_string(j));
    if (sgn(v) < 0) report.negative_variables.push_back(j);
    report.objective += lp.objective[j] * v;
  }
  bool ok = report.negative_variables.empty();
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Constraint& c = lp.constraints[i];
    ConstraintCheck check;
    check.index = i;
    check.lhs = 0;
    // Both lists are sorted by index: merge.
    auto a = assignment.entries.begin();
    for (const auto& [j, coeff] : c.coeffs.entries) {
      while (a != assignment.entries.end() && a->first < j) ++a;
      if (a != assignment.entries.end() && a->first == j) check.lhs += coeff * a->second;
    }
    check.slack = check.lhs - c.rhs;
    switch (c.sense) {
      case Sense::Equal: check.satisfied = sgn(check.slack) == 0; break;
      case Sense::GreaterEqual: check.satisfied = sgn(check.slack) >= 0; break;
      case Sense::LessEqual: check.satisfied = sgn(check.slack) <= 0; break;
    }
    ok = ok && check.satisfied;
    report.constraints.push_back(std::move(check));
  }
  report.feasible = ok;
  return report;
}

}  // namespace commlb
