#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "torgrad/pipeline.hpp"
#include "torgrad/random.hpp"

#include <fstream>
#include <sstream>

using namespace torgrad;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(TORGRAD_TEST_DATA) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

json base() {
  return json{{"group", {{"family", "free"}, {"rank", 2}}},
              {"degrees", {0, 1}},
              {"chain", {{{"kind", "abelian"}, {"moduli", {2, 2}}}}}};
}

const GradientRow& row(const GradientTable& t, int level, int degree) {
  for (const auto& r : t.rows)
    if (r.level == level && r.degree == degree) return r;
  FAIL("row missing");
  return t.rows.front();
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(base()));
  json j = base();
  j["coefficients"] = {{"ring", "Fp"}, {"p", 4}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["coefficients"] = "F3";
  CHECK(parse_config(j).p == 3);
  j = base();
  j["degrees"] = json::array();
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["chain"] = {{{"kind", "abelian"}, {"moduli", {3, 3}}}, {{"kind", "abelian"}, {"moduli", {2, 2}}}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["embedding"] = "rokhlin";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["embedding"] = {{"kind", "induced"}, {"strategy", "best"}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["embedding"] = "teleport";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["group"] = {{"family", "torus"}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["group"] = {{"generators", 2}, {"relators", {"aba-1b-1"}}};
  j["degrees"] = {2};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base();
  j["chain"] = {{{"kind", "permutation"}, {"degree", 3}, {"images", {{1, 0, 2}, {1, 1, 0}}}}};
  CHECK_THROWS(parse_config(j));
  j = {{"group", {{"family", "Z"}}}, {"degrees", {0}}, {"chain", {{{"kind", "abelian"}, {"moduli", {16}}}}},
       {"embedding", {{"kind", "cheap"}, {"eps", "one half"}}}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("free group gradient") {
  ExperimentConfig cfg = parse_config(load("free2.json"));
  GradientTable t = run_gradient(cfg);
  CHECK(t.ok());
  int k = 0;
  for (int m : {2, 3, 4}) {
    const GradientRow& r = row(t, k++, 1);
    CHECK(r.order == m * m);
    CHECK(r.betti_q == 1 + m * m);
    CHECK(r.torsion.empty());
    CHECK(r.dim_upper == 2);
    CHECK(std::abs(static_cast<double>(r.betti_q) / r.order - 1.0) <= 1.0 / r.order + 1e-12);
  }
  CHECK(row(t, 0, 0).betti_q == 1);
  CHECK(row(t, 0, 1).betti_p.value() == 5);
}

TEST_CASE("surface gradient") {
  ExperimentConfig cfg = parse_config(load("surface2.json"));
  GradientTable t = run_gradient(cfg);
  CHECK(t.ok());
  for (int k = 0; k < 3; ++k) {
    int n = k + 2;
    CHECK(row(t, k, 1).betti_q == 2 + 2 * n);
    CHECK(row(t, k, 1).torsion.empty());
    CHECK(row(t, k, 2).betti_q == 1);
    CHECK(row(t, k, 3).betti_q == 0);
  }
}

TEST_CASE("integers with Rokhlin and cheap embeddings") {
  GradientTable t = run_gradient(parse_config(load("integers_rokhlin.json")));
  CHECK(t.ok());
  for (const auto& r : t.rows)
    if (r.degree == 1) {
      CHECK(r.betti_q == 1);
      CHECK(r.betti_bound >= 1);
    }
  GradientTable c = run_gradient(parse_config(load("integers_cheap.json")));
  CHECK(c.ok());
  for (const auto& r : c.rows) CHECK(r.dim_upper < frac(1, 8));
}

TEST_CASE("CSV layout and determinism") {
  ExperimentConfig cfg = parse_config(load("free2.json"));
  std::string a = gradient_csv(run_gradient(cfg)), b = gradient_csv(run_gradient(cfg));
  CHECK(a == b);
  std::istringstream in(a);
  std::string header;
  std::getline(in, header);
  std::string expect;
  for (const auto& c : gradient_columns()) expect += (expect.empty() ? "" : ",") + c;
  CHECK(header == expect);
  int lines = 0;
  for (std::string l; std::getline(in, l);) {
    ++lines;
    CHECK(std::count(l.begin(), l.end(), ',') == static_cast<long>(gradient_columns().size()) - 1);
  }
  CHECK(lines == 6);
  json j = gradient_json(run_gradient(cfg));
  CHECK(j["rows"].size() == 6);
}

TEST_CASE("JSON round trips") {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    LevelData L = random_level(rng, 8);
    LevelData back = level_from_json(level_to_json(L));
    CHECK(back.level->n() == L.level->n());
    MarkedMorphism f = random_morphism(rng, L.level);
    auto [L2, g] = read_morphism_file(json::parse(morphism_file(L, f).dump()));
    CHECK(op_norm(g) == op_norm(f));
    CHECK(morphism_to_json(g) == morphism_to_json(f));
    IntMatrix A = random_int_matrix(rng);
    CHECK(matrix_from_json(matrix_to_json(A, true)) == A);
    CHECK(matrix_from_json(matrix_to_json(A, false)) == A);
  }
  LevelData L = make_level_data({{"family", "surface"}, {"genus", 2}}, {{"kind", "abelian"}, {"moduli", {3}}});
  MarkedComplex D = induce_resolution(resolution_surface(2), L.level);
  CHECK(complex_from_json(complex_to_json(D), L.level) == D);
  auto words = element_words(*L.level->q);
  for (int g = 0; g < L.level->n(); ++g) CHECK(L.level->q->evaluate(words[g]) == g);
}

TEST_CASE("verify suites pass on a short run") {
  for (const auto& s : verify_suites()) {
    VerifyReport r = run_verify(s, 20, 5);
    CAPTURE(s);
    CHECK(r.ok());
    CHECK(r.trials == 20);
  }
  CHECK_THROWS_AS(run_verify("nonsense", 1, 1), ConfigError);
}
