#include <doctest.h>

#include <array>
#include <cmath>

#include "commlb/bounds.hpp"
#include "commlb/errors.hpp"
#include "support.hpp"

using namespace commlb;
using testing::Rng;

namespace {

// Partition program written out directly from its definition, optionally
// restricted to a subset of tiles.
LinearProgram partition_program(const Relation& rel, const ErrorFn& err, const std::vector<Tile>& tiles) {
  LinearProgram lp;
  lp.objective.assign(tiles.size(), Rational(1));
  for (std::size_t x = 0; x < rel.x_size(); ++x)
    for (std::size_t y = 0; y < rel.y_size(); ++y) {
      Constraint cover{{}, Sense::Equal, Rational(1)};
      Constraint correct{{}, Sense::GreaterEqual, Rational(1 - err.at(x, y))};
      for (std::size_t j = 0; j < tiles.size(); ++j) {
        if (!tiles[j].contains(x, y)) continue;
        cover.coeffs.entries.emplace_back(j, Rational(1));
        if (rel.accepts(x, y, tiles[j].z)) correct.coeffs.entries.emplace_back(j, Rational(1));
      }
      lp.constraints.push_back(std::move(cover));
      lp.constraints.push_back(std::move(correct));
    }
  return lp;
}

// Tiles whose label is accepted on every cell they cover.
std::vector<Tile> monochromatic_tiles(const Relation& rel) {
  std::vector<Tile> out;
  for (const Tile& t : enumerate_tiles(rel.x_size(), rel.y_size(), rel.z_size())) {
    bool ok = true;
    for (std::size_t x = 0; x < rel.x_size(); ++x)
      for (std::size_t y = 0; y < rel.y_size(); ++y)
        if (t.contains(x, y) && !rel.accepts(x, y, t.z)) ok = false;
    if (ok) out.push_back(t);
  }
  return out;
}

ErrorFn random_error(Rng& rng, std::size_t nx, std::size_t ny) {
  RationalGrid g(nx, ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) g.at(x, y) = rng.unit(4);
  return ErrorFn(g);
}

}  // namespace

TEST_CASE("partition bound anchors") {
  const BoundResult c = prt(testing::constant_relation(2, 2, 2), ErrorFn::constant(2, 2, 0));
  CHECK(c.value == 1);
  CHECK(c.log2_value == 0.0);
  const BoundResult eq = prt(testing::equality(), ErrorFn::constant(2, 2, 0));
  CHECK(eq.status == LpStatus::Optimal);
  CHECK(eq.value == 4);
  CHECK(eq.log2_value == 2.0);
  const BoundResult and1 = prt(testing::conjunction(), ErrorFn::constant(2, 2, 0));
  CHECK(and1.value == 3);
  CHECK(and1.log2_value == doctest::Approx(1.584962500721156));
}

TEST_CASE("zero-error anchors match a monochromatic vertex enumeration") {
  for (const Relation& rel : {testing::equality(), testing::conjunction(), testing::constant_relation(2, 2, 2)}) {
    const ErrorFn zero = ErrorFn::constant(2, 2, 0);
    const auto oracle = testing::vertex_optimum(partition_program(rel, zero, monochromatic_tiles(rel)));
    REQUIRE(oracle);
    CHECK(prt(rel, zero).value == *oracle);
  }
}

TEST_CASE("partition bound matches vertex enumeration with random error budgets") {
  Rng rng(51);
  const std::vector<std::array<std::size_t, 3>> shapes = {{2, 1, 2}, {1, 3, 2}, {2, 2, 1}, {3, 1, 2}, {1, 2, 3}};
  for (int round = 0; round < 25; ++round) {
    const auto [nx, ny, nz] = shapes[rng.below(shapes.size())];
    const Relation rel = testing::random_relation(rng, nx, ny, nz);
    const ErrorFn err = random_error(rng, nx, ny);
    const auto oracle = testing::vertex_optimum(partition_program(rel, err, enumerate_tiles(nx, ny, nz)));
    REQUIRE(oracle);
    CHECK(prt(rel, err).value == *oracle);
  }
}

TEST_CASE("relaxed bounds on anchors") {
  CHECK(relaxed_prt(testing::equality(), 0).value == 4);
  CHECK(relaxed_prt(testing::conjunction(), 0).value == 3);
  const InputDistribution u = InputDistribution::uniform(2, 2);
  CHECK(relaxed_prt_mu(testing::equality(), 0, u).value == 4);
  CHECK(relaxed_prt_mu(testing::equality(), 0, InputDistribution::point(2, 2, 0, 1)).value == 1);
  CHECK(relaxed_prt_mu(testing::equality(), 1, u).value == 0);
  CHECK_THROWS_AS(relaxed_prt(testing::equality(), Rational(2)), PreconditionError);
  CHECK_THROWS_AS(relaxed_prt_mu(testing::equality(), Rational(-1), u), PreconditionError);
}

TEST_CASE("relaxed bound is zero at full error for any relation") {
  Rng rng(52);
  for (int round = 0; round < 30; ++round) {
    const std::size_t nx = rng.between(1, 3), ny = rng.between(1, 3), nz = rng.between(1, 2);
    const Relation rel = testing::random_relation(rng, nx, ny, nz);
    const BoundResult r = relaxed_prt(rel, 1);
    CHECK(r.value == 0);
    CHECK(r.certificate.empty());
    CHECK(std::isinf(r.log2_value));
  }
}

TEST_CASE("bounds are ordered and certificates verify") {
  Rng rng(53);
  for (int round = 0; round < 40; ++round) {
    const std::size_t nx = rng.between(1, 3), ny = rng.between(1, 2), nz = rng.between(1, 2);
    const Relation rel = testing::random_relation(rng, nx, ny, nz);
    const Rational eps = rng.unit(4);
    const ErrorFn flat = ErrorFn::constant(nx, ny, eps);
    const InputDistribution mu = testing::random_distribution(rng, nx, ny, true);

    const BoundResult p = prt(rel, flat);
    const BoundResult r = relaxed_prt(rel, eps);
    const BoundResult m = relaxed_prt_mu(rel, eps, mu);
    REQUIRE(p.status == LpStatus::Optimal);
    CHECK(r.value <= p.value);
    CHECK(m.value <= r.value);
    CHECK(verify_certificate(rel, p.certificate, PrtMode{flat}).passed());
    CHECK(verify_certificate(rel, r.certificate, RelaxedMode{eps}).passed());
    CHECK(verify_certificate(rel, m.certificate, RelaxedMuMode{eps, mu}).passed());
    CHECK(p.certificate.total() == p.value);

    // A pointwise larger budget never raises the optimum.
    RationalGrid looser = flat.values();
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) looser.at(x, y) = std::max(looser.at(x, y), rng.unit(4));
    CHECK(prt(rel, ErrorFn(looser)).value <= p.value);
  }
}

TEST_CASE("a perturbed certificate fails verification") {
  const Relation eq = testing::equality();
  const ErrorFn zero = ErrorFn::constant(2, 2, 0);
  const BoundResult r = prt(eq, zero);
  CHECK(verify_certificate(eq, r.certificate, PrtMode{zero}).passed());
  TileWeighting bent = r.certificate;
  const Tile first = bent.entries().begin()->first;
  bent.set(first, bent.weight(first) - make_rational(1, 1000));
  const CertificateReport report = verify_certificate(eq, bent, PrtMode{zero});
  CHECK_FALSE(report.cover_ok);
  CHECK_FALSE(report.passed());
  CHECK_FALSE(report.failures.empty());

  TileWeighting outside;
  outside.add(make_tile({0}, {5}, 0), 1);
  CHECK_THROWS_AS(verify_certificate(eq, outside, PrtMode{zero}), ValidationError);
}

TEST_CASE("tile cap is enforced before solving") {
  BoundOptions opts;
  opts.tile_cap = 10;
  CHECK_THROWS_AS(prt(testing::equality(), ErrorFn::constant(2, 2, 0), opts), SizeLimitError);
}
