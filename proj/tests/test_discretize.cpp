#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "torgrad/constructions.hpp"
#include "torgrad/pipeline.hpp"
#include "torgrad/random.hpp"

using namespace torgrad;

namespace {

std::vector<mpz_class> Zs(std::initializer_list<long> v) {
  std::vector<mpz_class> r;
  for (long x : v) r.push_back(x);
  return r;
}

}  // namespace

TEST_CASE("coinvariant ranks") {
  Level L = make_level(abelian_quotient(1, {4}));
  int t0 = tpow(*L->q, 0), t2 = tpow(*L->q, 2);
  CHECK(coinvariants_module(MarkedModule{L, {Carrier::of(4, {t0, t2})}}).rank() == 2);
  CHECK(coinvariants_module(MarkedModule{L, {Carrier(4)}}).rank() == 0);
  CHECK(coinvariants_module(full_module(L, 2)).rank() == 8);
}

TEST_CASE("coinvariant matrices") {
  Level L = make_level(abelian_quotient(1, {4}));
  const FiniteQuotient& q = *L->q;
  auto t = [&](long k) { return tpow(q, k); };
  MarkedModule A{L, {Carrier::of(4, {t(0), t(2)})}}, B{L, {Carrier::of(4, {t(1), t(3)})}};
  MarkedMorphism f(A, B, {{CrossedElt::chi(L, A.carriers[0], t(1))}});
  IntMatrix m = coinvariants_matrix(f);
  CoinvBasis src = coinvariants_module(A), dst = coinvariants_module(B);
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 2);
  CHECK(m.at(dst.index.at({0, t(3)}), src.index.at({0, t(0)})) == 1);
  CHECK(m.at(dst.index.at({0, t(1)}), src.index.at({0, t(2)})) == 1);
  CHECK(m.column_l1_max() == 1);

  CHECK(coinvariants_matrix(MarkedMorphism::identity(full_module(L, 1))) == IntMatrix::identity(4));

  MarkedComplex D = induce_resolution(resolution_Z(), L);
  IntMatrix d1 = coinvariants_matrix(D.boundary(1));
  CHECK(d1.column_l1_max() == 2);
  CHECK(d1.column_l1_max() == op_norm(D.boundary(1)));
  for (int c = 0; c < 4; ++c) {
    int64_t s = 0;
    for (int r = 0; r < 4; ++r) s += d1.at(r, c);
    CHECK(s == 0);
    CHECK(d1.at(c, c) == 1);
  }
}

TEST_CASE("coinvariant matrices against the oracle") {
  Rng rng(53);
  for (int t = 0; t < 100; ++t) {
    LevelData LD = random_level(rng, 8);
    MarkedMorphism f = random_morphism(rng, LD.level);
    CHECK(oracle::to_z(coinvariants_matrix(f)) == oracle::coinvariants(f));
  }
}

TEST_CASE("Smith normal form examples") {
  CHECK(smith_normal_form(IntMatrix::dense({{2, 0}, {0, 3}})).factors == Zs({1, 6}));
  CHECK(smith_normal_form(IntMatrix::dense({{2, 0}, {0, 3}})).torsion() == Zs({6}));
  CHECK(smith_normal_form(IntMatrix::dense({{2, 1}, {0, 2}})).factors == Zs({1, 4}));
  CHECK(smith_normal_form(IntMatrix::identity(2)).factors == Zs({1, 1}));
  CHECK(smith_normal_form(IntMatrix(3, 2)).rank() == 0);
}

TEST_CASE("Smith normal form against determinantal divisors") {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    IntMatrix A = random_int_matrix(rng, 6, 6, 9);
    auto f = smith_normal_form(A).factors;
    auto g = oracle::invariant_factors(oracle::to_z(A));
    for (auto& x : f) x = abs(x);
    CHECK(f == g);
    mpz_class prod = 1;
    for (const auto& x : g) prod *= x;
    CHECK(oracle::torsion_order(oracle::to_z(A)) == prod);
    for (int64_t p : {2, 3, 5, 7}) CHECK(rank_mod_p(A, p) == oracle::rank_p(oracle::to_z(A), p));
  }
}

TEST_CASE("homology of small complexes") {
  ZComplex C;
  C.ranks = {1, 1};
  C.d = {IntMatrix::dense({{2}})};
  HomologyResult h0 = homology(C, 0), h1 = homology(C, 1);
  CHECK(h0.betti_q == 0);
  CHECK(h0.torsion == Zs({2}));
  CHECK(h1.betti_q == 0);
  CHECK(h1.torsion.empty());
  CHECK(homology(C, 5).betti_q == 0);
  CHECK(betti_mod_p(C, 0, 2) == 1);
  CHECK(betti_mod_p(C, 1, 2) == 1);
}

TEST_CASE("torsion routes agree") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    IntMatrix d2 = random_int_matrix(rng, 5, 5, 4);
    ZComplex C;
    C.ranks = {1, d2.rows, d2.cols};
    C.d = {IntMatrix(1, d2.rows), d2};
    auto k = homology(C, 1, TorsionRoute::kernel), c = homology(C, 1, TorsionRoute::cokernel);
    CHECK(k.betti_q == c.betti_q);
    CHECK(k.torsion == c.torsion);
    CHECK(k.torsion == cokernel_torsion(d2));
  }
}

TEST_CASE("Shapiro homology against the dense oracle") {
  Rng rng(19);
  for (int t = 0; t < 30; ++t) {
    LevelData LD = random_level(rng, 9);
    int maxdeg = 0;
    ResolutionData C = resolution_for(LD.group, &maxdeg);
    const FiniteQuotient& q = *LD.level->q;
    ZComplex Z = shapiro_complex(C, q);
    ZComplex W = coinvariants_complex(induce_resolution(C, LD.level));
    REQUIRE(Z.is_complex());
    for (int k = 0; k <= C.length() - 1; ++k) {
      HomologyResult h = homology(Z, k);
      CHECK(h.betti_q == oracle::betti(C, q, k));
      HomologyResult hw = homology(W, k);
      CHECK(hw.betti_q == h.betti_q);
      CHECK(hw.torsion == h.torsion);
    }
    CHECK(homology(Z, 0).betti_q == 1);
    CHECK(homology(Z, 0).torsion.empty());
  }
}

TEST_CASE("free group rank formula") {
  for (int m : {2, 3, 4}) {
    LevelData LD = make_level_data({{"family", "free"}, {"rank", 2}}, {{"kind", "abelian"}, {"moduli", {m, m}}});
    ZComplex Z = shapiro_complex(resolution_free(2), *LD.level->q);
    CHECK(homology(Z, 1).betti_q == 1 + m * m);
    CHECK(homology(Z, 1).torsion.empty());
  }
}

TEST_CASE("retract inequality") {
  LevelData LD = make_level_data({{"family", "free"}, {"rank", 2}}, {{"kind", "abelian"}, {"moduli", {2, 2}}});
  ResolutionData C = resolution_free(2);
  MarkedComplex D = induce_resolution(C, LD.level);
  RetractReport r = retract_inequality_check(C, D, *LD.level->q, 1);
  CHECK(r.betti == 5);
  CHECK(r.dim_bound == 8);
  CHECK(r.ok());
  CHECK(r.logtors == doctest::Approx(r.logtors_bound));

  IntegersResolution R = integers_dyn_resolution(12, 3);
  RetractReport rz = retract_inequality_check(resolution_Z(), R.D, *R.tower.level->q, 1);
  CHECK(rz.betti == 1);
  CHECK(rz.dim_bound == 12 * R.D.module(1).dim());
  CHECK(rz.ok());
}
