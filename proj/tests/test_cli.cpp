#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "commlb/bounds.hpp"
#include "commlb/io.hpp"
#include "support.hpp"

using namespace commlb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run commlb_run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + COMMLB_BINARY + std::string(" ") + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(COMMLB_DATA) + "/" + name; }

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "commlb_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const io::json& doc) {
  const fs::path p = scratch() / name;
  io::save_file(p.string(), doc);
  return p.string();
}

bool has(const Run& r, const std::string& text) { return r.out.find(text) != std::string::npos; }

}  // namespace

TEST_CASE("partition bound from a relation file") {
  const Run eq = commlb_run("prt " + data("eq1.json"));
  CHECK(eq.code == 0);
  CHECK(has(eq, "prt = 4\n"));
  CHECK(has(eq, "2.000000 bits"));

  const Run c = commlb_run("prt " + data("constant.json"));
  CHECK(c.code == 0);
  CHECK(has(c, "prt = 1\n"));
  CHECK(has(c, "0.000000 bits"));

  const Run relaxed = commlb_run("relaxed-prt " + data("and1.json") + " --eps 1");
  CHECK(relaxed.code == 0);
  CHECK(has(relaxed, "relaxed-prt = 0\n"));
  CHECK(has(relaxed, "-inf bits"));

  const Run mu = commlb_run("relaxed-prt-mu " + data("eq1.json") + " --mu " + data("skewed_mu.json") + " --eps 1/8");
  CHECK(mu.code == 0);
  CHECK(has(mu, "certificate:"));
}

TEST_CASE("malformed inputs are reported with their field") {
  const Run r = commlb_run("prt " + data("bad_error.json"));
  CHECK(r.code == 2);
  CHECK(has(r, "field error"));
  CHECK(has(r, "1/0"));
  const Run eps = commlb_run("prt " + data("eq1.json") + " --eps 1/0");
  CHECK(eps.code == 2);
  CHECK(has(eps, "--eps"));
  const Run missing = commlb_run("prt " + scratch().string() + "/nope.json");
  CHECK(missing.code == 2);
  const Run minor = commlb_run("slice " + data("not_rank_one.json"));
  CHECK(minor.code == 2);
  CHECK(has(minor, "3/16"));
}

TEST_CASE("tile cap comes from the environment") {
  const Run r = commlb_run("prt " + data("eq1.json"), "COMMLB_TILE_CAP=5");
  CHECK(r.code == 2);
  CHECK(has(r, "18 tiles"));
  CHECK(has(r, "cap of 5"));
}

TEST_CASE("slice and lift round trip") {
  const Run c = commlb_run("slice " + data("constant_transcript.json"));
  CHECK(c.code == 0);
  CHECK(has(c, "certificate: 1 tile,"));

  const std::string cert = (scratch() / "halves_cert.json").string();
  const Run s = commlb_run("slice " + data("three_halves.json") + " --out " + cert);
  CHECK(s.code == 0);
  CHECK(has(s, "order-infinity argument = 3/2\n"));
  const std::string rel = write("one_output.json", io::relation_json(testing::constant_relation(2, 1, 1)));
  const Run l = commlb_run("lift " + rel + " " + cert);
  CHECK(l.code == 0);
  CHECK(has(l, "order-infinity argument = 3/2\n"));

  const Run partial = commlb_run("lift " + data("eq1.json") + " " + cert);
  CHECK(partial.code == 2);
}

TEST_CASE("prune reports every claim") {
  const std::string q = (scratch() / "eq_lift.json").string();
  REQUIRE(commlb_run("lift " + data("eq1.json") + " " + data("eq1_singletons.json") + " --out " + q).code == 0);
  const Run r = commlb_run("prune " + data("eq1.json") + " " + q + " --delta 1/2");
  CHECK(r.code == 0);
  for (const char* claim : {"missing mass", "tile bound", "pruned certificate", "final inequality", "decomposition"})
    CHECK(has(r, std::string("[pass] ") + claim));

  const std::string report = (scratch() / "prune.json").string();
  const Run j = commlb_run("prune " + data("eq1.json") + " " + q + " --delta 1/4 --mu " + data("skewed_mu.json") +
                           " --json --out " + report);
  CHECK(j.code == 0);
  const io::json doc = io::load_file(report);
  for (const char* key : {"delta", "Delta", "epsilon", "removed_mass", "claim_missingmass", "claim_tilebound",
                          "final_inequality", "certificate"})
    CHECK(doc.contains(key));
  CHECK(doc["claim_missingmass"]["pass"] == true);

  const Run zero = commlb_run("prune " + data("eq1.json") + " " + q + " --delta 0");
  CHECK(zero.code == 2);
  CHECK(has(zero, "precondition"));
}

TEST_CASE("report table") {
  const Run a = commlb_run("report " + data("and1.json"));
  CHECK(a.code == 0);
  CHECK(has(a, "log prt = 1.585, R_det = 2\n"));
  CHECK_FALSE(has(a, "[FAIL]"));

  const Run e = commlb_run("report " + data("eq1.json"));
  CHECK(e.code == 0);
  CHECK(has(e, "log prt = 2.000, R_det = 2\n"));

  const Run c = commlb_run("report " + data("constant.json"));
  CHECK(c.code == 0);
  CHECK(has(c, "log prt = 0.000, R_det = 0\n"));

  const std::string big = write("eq4.json", io::relation_json(testing::equality(4)));
  const Run b = commlb_run("report " + big);
  CHECK(b.code == 0);
  CHECK(has(b, "skipped (size)"));

  const Run j = commlb_run("report " + data("and1.json") + " --json");
  const io::json doc = io::json::parse(j.out);
  CHECK(doc["R_det"] == 2);
  CHECK(doc["passed"] == true);
  CHECK(doc["rows"][2]["value"] == "3");
}

TEST_CASE("emitted certificates verify") {
  const std::string cert = (scratch() / "and_cert.json").string();
  REQUIRE(commlb_run("prt " + data("and1.json") + " --emit-cert " + cert).code == 0);
  const Run v = commlb_run("verify " + data("and1.json") + " " + cert);
  CHECK(v.code == 0);
  CHECK(has(v, "total weight = 3"));
  const Run relaxed = commlb_run("verify " + data("and1.json") + " " + cert + " --mode relaxed-prt-mu --eps 0");
  CHECK(relaxed.code == 0);
  const Run wrong = commlb_run("verify " + data("eq1.json") + " " + cert);
  CHECK(wrong.code == 1);
}

TEST_CASE("the CLI reproduces library values") {
  testing::Rng rng(91);
  for (int round = 0; round < 8; ++round) {
    const std::size_t nx = rng.between(1, 3), ny = rng.between(1, 3), nz = rng.between(1, 2);
    const Relation rel = testing::random_relation(rng, nx, ny, nz);
    const Rational eps = rng.unit(4);
    const std::string path = write("random_rel.json", io::relation_json(rel));
    const Run r = commlb_run("prt " + path + " --json --eps " + to_string(eps));
    REQUIRE(r.code == 0);
    const io::json doc = io::json::parse(r.out);
    CHECK(doc["value"] == to_string(prt(rel, ErrorFn::constant(nx, ny, eps)).value));
    const Run again = commlb_run("prt " + path + " --json --eps " + to_string(eps));
    CHECK(again.out == r.out);
  }
}
