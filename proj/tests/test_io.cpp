#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "commlb/errors.hpp"
#include "commlb/io.hpp"
#include "support.hpp"

using namespace commlb;
using io::json;
using testing::Rng;

TEST_CASE("relation documents") {
  const json doc = json::parse(R"({"x_size": 2, "y_size": 2, "z_size": 2,
    "accept": [[[1], [0]], [[0], [1]]], "error": "1/4"})");
  const io::RelationFile f = io::read_relation(doc);
  CHECK(f.relation.accepts(0, 0, 1));
  CHECK_FALSE(f.relation.accepts(0, 1, 1));
  REQUIRE(f.error);
  CHECK(f.error->at(1, 0) == make_rational(1, 4));
  const io::RelationFile again = io::read_relation(io::relation_json(f.relation, f.error));
  CHECK(again.error->values() == f.error->values());
}

TEST_CASE("malformed rationals name their field") {
  const json doc = json::parse(R"({"x_size": 1, "y_size": 1, "z_size": 1, "accept": [[[0]]], "error": "1/0"})");
  try {
    io::read_relation(doc);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("error") == 0);
    CHECK(msg.find("1/0") != std::string::npos);
  }
  const json cert = json::parse(R"({"tiles": [{"xs": [0], "ys": [0], "z": 0, "w": "x"}]})");
  CHECK_THROWS_WITH_AS(io::read_certificate(cert), doctest::Contains("tiles[0].w"), ParseError);
  CHECK_THROWS_WITH_AS(io::read_relation(json::parse(R"({"x_size": 1})")), doctest::Contains("y_size"), ParseError);
}

TEST_CASE("documents round trip") {
  Rng rng(81);
  for (int round = 0; round < 50; ++round) {
    const std::size_t nx = rng.between(1, 3), ny = rng.between(1, 3), nz = rng.between(1, 3);
    const Pseudotranscript q = testing::random_pseudotranscript(rng, nx, ny, nz);
    const Pseudotranscript back = io::read_pseudotranscript(json::parse(io::pseudotranscript_json(q).dump()));
    REQUIRE(back.size() == q.size());
    for (std::size_t k = 0; k < q.size(); ++k) CHECK(back.outcome(k).matrix == q.outcome(k).matrix);

    const InputDistribution mu = testing::random_distribution(rng, nx, ny, true);
    CHECK(io::read_distribution(io::distribution_json(mu)).probs() == mu.probs());

    const ProtocolTree t = testing::random_tree(rng, nx, ny, nz, 3);
    CHECK(io::protocol_json(io::read_protocol(io::protocol_json(t), nx, ny, nz)) == io::protocol_json(t));

    const Relation rel = testing::random_relation(rng, nx, ny, nz);
    const TileWeighting w = slice(rel, q).weighting;
    CHECK(io::read_certificate(io::certificate_json(w)) == w);
  }
}

TEST_CASE("files are read with syntax positions") {
  const std::string path = "commlb_io_test.json";
  {
    std::ofstream out(path);
    out << "{\"tiles\": [}";
  }
  CHECK_THROWS_WITH_AS(io::load_file(path), doctest::Contains(path.c_str()), ParseError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::load_file("does-not-exist.json"), ParseError);
}

TEST_CASE("protocol documents are checked") {
  const json bad = json::parse(R"({"speaker": "C", "msg": [0, 1], "children": [{"z": 0}, {"z": 1}]})");
  CHECK_THROWS_AS(io::read_protocol(bad, 2, 2, 2), ParseError);
  const json wrapped = json::parse(R"({"x_size": 3, "y_size": 2, "z_size": 2, "tree": {"z": 0}})");
  CHECK_THROWS_AS(io::read_protocol(wrapped, 2, 2, 2), ParseError);
  const json leafy = json::parse(R"({"speaker": "B", "msg": [0, 1], "children": [{"z": 0}, {"z": 1}]})");
  const ProtocolTree t = io::read_protocol(leafy, 2, 2, 2);
  CHECK(run(t, 0, 1).z == 1);
}
