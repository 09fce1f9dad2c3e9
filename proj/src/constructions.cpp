#include "commlb/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "commlb/errors.hpp"
#include "commlb/measures.hpp"

namespace commlb {

namespace {

void check_shapes(const Relation& rel, const Pseudotranscript& q) {
  if (rel.x_size() != q.x_size() || rel.y_size() != q.y_size() || rel.z_size() != q.z_size())
    throw ValidationError("pseudotranscript alphabets do not match the relation");
}

std::vector<std::size_t> ascending_order(const std::vector<Rational>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

std::uint64_t suffix_mask(const std::vector<std::size_t>& order, std::size_t from) {
  std::uint64_t mask = 0;
  for (std::size_t k = from; k < order.size(); ++k) mask |= std::uint64_t{1} << order[k];
  return mask;
}

Rational mass_on(const InputDistribution& mu, const Tile& t) {
  Rational sum = 0;
  for (int x : members(t.xs))
    for (int y : members(t.ys)) sum += mu.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  return sum;
}

}  // namespace

Pseudotranscript lift(const Relation& rel, const TileWeighting& w) {
  w.validate(rel.x_size(), rel.y_size(), rel.z_size());
  const RationalGrid cover = cover_mass(rel, w);
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y)
      if (cover.at(x, y) != 1)
        throw PreconditionError("weighting is not an exact cover: cell (" + std::to_string(x) + "," +
                                std::to_string(y) + ") has mass " + to_string(cover.at(x, y)));
  std::vector<Outcome> outcomes;
  for (const auto& [tile, weight] : w.entries()) {
    Outcome o{tile.z, RationalGrid(rel.x_size(), rel.y_size(), Rational(0))};
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (tile.contains(x, y)) o.matrix.at(x, y) = weight;
    outcomes.push_back(std::move(o));
  }
  return Pseudotranscript(rel.x_size(), rel.y_size(), rel.z_size(), std::move(outcomes));
}

SliceResult slice(const Relation& rel, const Pseudotranscript& q) {
  check_shapes(rel, q);
  SliceResult out;
  out.total = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Factorization& f = q.factors(k);
    OutcomeSlice s;
    s.outcome = k;
    s.x_order = ascending_order(f.alpha);
    s.y_order = ascending_order(f.beta);
    s.alpha_max = f.alpha[s.x_order.back()];
    s.beta_max = f.beta[s.y_order.back()];

    const std::size_t m = s.x_order.size();
    const std::size_t n = s.y_order.size();
    for (std::size_t i = 1; i <= m; ++i) {
      const Rational& a_i = f.alpha[s.x_order[i - 1]];
      Rational sigma = i == 1 ? a_i : Rational(a_i - f.alpha[s.x_order[i - 2]]);
      if (sgn(sigma) <= 0) continue;
      const std::uint64_t xs = suffix_mask(s.x_order, i - 1);
      for (std::size_t j = 1; j <= n; ++j) {
        const Rational& b_j = f.beta[s.y_order[j - 1]];
        Rational tau = j == 1 ? b_j : Rational(b_j - f.beta[s.y_order[j - 2]]);
        if (sgn(tau) <= 0) continue;
        SlicedTile t;
        t.tile = Tile{xs, suffix_mask(s.y_order, j - 1), q.outcome(k).z};
        t.i = i;
        t.j = j;
        t.omega = sigma * tau;
        t.sigma = sigma;
        t.tau = std::move(tau);
        t.alpha_hat = a_i;
        t.beta_hat = b_j;
        out.weighting.add(t.tile, t.omega);
        out.total += t.omega;
        s.tiles.push_back(std::move(t));
      }
    }
    out.outcomes.push_back(std::move(s));
  }
  return out;
}

double hyperbola_area_bound(double rect_area, double theta) {
  if (!(theta > 0.0)) return 0.0;
  if (theta >= rect_area) return rect_area;
  return theta * (1.0 + std::log(rect_area / theta));
}

double hyperbola_area_bound(const OutcomeSlice& slice, double theta) {
  return hyperbola_area_bound(to_double(slice.alpha_max * slice.beta_max), theta);
}

PruneResult prune(const Relation& rel, const Pseudotranscript& q, const InputDistribution& mu, const Rational& delta,
                  const BoundOptions& options) {
  if (sgn(delta) <= 0 || delta > 1)
    throw PreconditionError("delta = " + to_string(delta) + " must lie in (0,1]");
  check_shapes(rel, q);
  if (mu.x_size() != rel.x_size() || mu.y_size() != rel.y_size())
    throw ValidationError("input distribution shape does not match the relation");

  PruneResult r;
  r.delta = delta;
  r.epsilon = average_pseudotranscript_error(rel, q, mu);
  r.information = external_cost(q, mu);
  const double delta_d = to_double(delta);
  r.Delta = (r.information + 1.0) / delta_d;
  r.outcome_mass = outcome_marginal(q, mu);
  r.slice = slice(rel, q);
  const std::size_t cells = rel.x_size() * rel.y_size();
  r.trivial = cells == 1;

  r.removed_mass = 0;
  Rational surviving = 0;
  double markov_positive = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const OutcomeSlice& s = r.slice.outcomes[k];
    const Rational& pq = r.outcome_mass[k];
    const double theta = to_double(pq) * std::exp2(r.Delta);
    r.theta.push_back(theta);
    std::vector<bool> flags(s.tiles.size(), false);
    Rational surviving_q = 0;
    for (std::size_t idx = 0; idx < s.tiles.size(); ++idx) {
      const SlicedTile& t = s.tiles[idx];
      const Rational corner = t.alpha_hat * t.beta_hat;
      const Rational p_qt = t.omega * mass_on(mu, t.tile);
      // Rounding the exact corner down keeps borderline pairs out of the bad set.
      flags[idx] = to_double_down(corner) >= theta;
      if (flags[idx]) {
        r.removed_mass += p_qt;
      } else {
        surviving_q += t.omega;
        r.pruned.add(t.tile, t.omega);
      }
      // The corner value is min over the tile of p(q|x,y); p(q,t) phi(q,t) expands cell by cell.
      if (corner >= pq && sgn(p_qt) > 0) {
        for (int x : members(t.tile.xs))
          for (int y : members(t.tile.ys)) {
            const auto ux = static_cast<std::size_t>(x);
            const auto uy = static_cast<std::size_t>(y);
            const Rational joint = mu.at(ux, uy) * t.omega;
            if (sgn(joint) == 0) continue;
            markov_positive += to_double(joint) * log2_of(q.prob(k, ux, uy) / pq);
          }
      }
    }
    OutcomeAreaCheck area;
    area.outcome = k;
    area.theta = theta;
    area.area_bound = hyperbola_area_bound(s, theta);
    area.passed = to_double(surviving_q) <= area.area_bound * (1.0 + 1e-12) + 1e-12;
    area.surviving = surviving_q;
    r.tile_bound.per_outcome.push_back(std::move(area));
    surviving += surviving_q;
    r.bad.push_back(std::move(flags));
  }

  r.missing_mass.removed_mass = r.removed_mass;
  r.missing_mass.delta = delta;
  r.missing_mass.passed = r.removed_mass <= delta;

  const double loglog = cells > 1 ? std::log2(std::log2(static_cast<double>(cells)))
                                  : -std::numeric_limits<double>::infinity();
  r.tile_bound.surviving_mass = surviving;
  r.tile_bound.log2_surviving = log2_of(surviving);
  r.tile_bound.bound = r.Delta + loglog + 2.0;
  const bool areas_ok = std::all_of(r.tile_bound.per_outcome.begin(), r.tile_bound.per_outcome.end(),
                                    [](const OutcomeAreaCheck& a) { return a.passed; });
  r.tile_bound.passed =
      areas_ok && (r.trivial || r.tile_bound.log2_surviving <= r.tile_bound.bound + kLogTolerance);

  r.certificate.allowed_error = r.epsilon + delta;
  r.certificate.report =
      verify_certificate(rel, r.pruned, RelaxedMuMode{r.certificate.allowed_error, mu});
  r.certificate.passed = r.certificate.report.passed();

  FinalInequalityCheck& fin = r.final_inequality;
  fin.information = r.information;
  fin.relaxed_eps = std::min(Rational(r.epsilon + delta), Rational(1));
  const BoundResult relaxed = relaxed_prt_mu(rel, fin.relaxed_eps, mu, options);
  if (relaxed.status != LpStatus::Optimal)
    throw Error("distributional relaxed partition LP is " + to_string(relaxed.status));
  fin.relaxed_value = relaxed.value;
  fin.log2_relaxed = relaxed.log2_value;
  if (r.trivial) {
    fin.rhs = -std::numeric_limits<double>::infinity();
    fin.passed = true;
  } else {
    fin.rhs = sgn(relaxed.value) == 0 ? -std::numeric_limits<double>::infinity()
                                      : delta_d * fin.log2_relaxed - (delta_d * loglog + 3.0);
    fin.passed = fin.information >= fin.rhs - kLogTolerance;
  }

  r.markov.positive_part = markov_positive;
  r.markov.bound = r.information + 1.0;
  r.markov.passed = markov_positive <= r.markov.bound + kLogTolerance;
  return r;
}

}  // namespace commlb
