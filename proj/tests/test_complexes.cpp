#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "torgrad/constructions.hpp"
#include "torgrad/pipeline.hpp"
#include "torgrad/random.hpp"

using namespace torgrad;

namespace {

Level cyclic(int n) { return make_level(abelian_quotient(1, {n})); }

bool strict(const MarkedComplex& D) {
  for (int r = 2; r <= D.top(); ++r)
    if (!(compose(D.boundary(r - 1), D.boundary(r)) == MarkedMorphism::zero(D.module(r), D.module(r - 2)))) return false;
  return true;
}

ResolutionData resolution_gen(int g, int generators) {
  ResolutionData R;
  R.name = "Z on one generator";
  R.presentation.generators = generators;
  R.ranks = {1, 1};
  R.boundary = {{{GroupRingElt::one() - GroupRingElt::term(Word::gen(g), 1)}}};
  return R;
}

}  // namespace

TEST_CASE("induced integers resolution") {
  Level L = cyclic(4);
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  CHECK(D.top() == 1);
  CHECK(D.module(0) == full_module(L, 1));
  CHECK(D.module(1) == full_module(L, 1));
  int t = tpow(*L->q, 1);
  Carrier G = Carrier::full(4);
  CHECK(D.boundary(1).entry(0, 0) == CrossedElt::chi(L, G, 0) - CrossedElt::chi(L, G, t));
  CHECK(defect_report(D, ModuleVector::basis(D.module(0), 0)).strict());
}

TEST_CASE("induced free and surface resolutions") {
  LevelData F = make_level_data({{"family", "free"}, {"rank", 2}}, {{"kind", "abelian"}, {"moduli", {2, 2}}});
  MarkedComplex D = induce_resolution(resolution_free(2), F.level);
  CHECK(D.dims() == std::vector<Rational>{1, 2});
  DefectReport rep = defect_report(D, ModuleVector::basis(D.module(0), 0));
  CHECK(rep.strict());
  CHECK(rep.delta_eta == 0);

  LevelData S = make_level_data({{"family", "surface"}, {"genus", 2}}, {{"kind", "abelian"}, {"moduli", {3}}});
  MarkedComplex E = induce_resolution(resolution_surface(2), S.level);
  CHECK(E.dims() == std::vector<Rational>{1, 4, 1});
  CHECK(defect_report(E).strict());
  CHECK(strict(E));
}

TEST_CASE("defects of perturbations") {
  Level L = cyclic(4);
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  MarkedComplex P = D;
  auto e = P.boundary(1).entries();
  e[0][0].add_at(0, 0, 1);
  P.d[0] = MarkedMorphism(P.module(1), P.module(0), e);
  DefectReport rep = defect_report(P, ModuleVector::basis(P.module(0), 0));
  CHECK(rep.overall == frac(1, 4));

  ModuleVector z = ModuleVector::basis(D.module(0), 0);
  z.comps[0] = z.comps[0].left_chi(Carrier::of(4, {0, 1, 2}));
  DefectReport r2 = defect_report(D, z);
  CHECK(r2.delta_eta == frac(1, 4));
}

TEST_CASE("chain map defects") {
  Level L = cyclic(4);
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  ChainMap id = identity_map(D);
  for (const auto& e : check_chain_map(id, D, D)) CHECK(e == 0);
  ChainMap f = id;
  auto e = f[1].entries();
  e[0][0].add_at(0, 0, 1);
  f[1] = MarkedMorphism(D.module(1), D.module(1), e);
  auto eps = check_chain_map(f, D, D);
  CHECK(eps[1] > 0);
  CHECK(eps[1] <= frac(2, 4));
}

TEST_CASE("mapping cone") {
  Level L = cyclic(4);
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  MarkedComplex C = mapping_cone(identity_map(D), D, D);
  CHECK(C.module(1).dim() == 2);
  CHECK(C.top() == 2);
  CHECK(strict(C));
  ChainMap zero;
  for (int r = 0; r <= D.top(); ++r) zero.push_back(MarkedMorphism::zero(D.module(r), D.module(r)));
  MarkedComplex Z = mapping_cone(zero, D, D);
  CHECK(Z.dims() == std::vector<Rational>{1, 2, 1});
  CHECK(strict(Z));
}

TEST_CASE("Koszul complex by tensor product") {
  LevelData LD = make_level_data({{"family", "Zd"}, {"rank", 2}}, {{"kind", "abelian"}, {"moduli", {2, 2}}});
  MarkedComplex A = induce_resolution(resolution_gen(0, 2), LD.level);
  MarkedComplex B = induce_resolution(resolution_gen(1, 2), LD.level);
  MarkedComplex T = tensor_complex(A, B);
  CHECK(T.dims() == std::vector<Rational>{1, 2, 1});
  CHECK(strict(T));
  CHECK(defect_report(T, ModuleVector::basis(T.module(0), 0)).strict());
  MarkedComplex I = tensor_complex(A, trivial_complex(LD.level));
  CHECK(I.dims() == A.dims());
  CHECK(I.boundary(1) == A.boundary(1));
}

TEST_CASE("GH witnesses") {
  Level L = cyclic(4);
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  GHWitness w = identity_witness(D);
  GHCheck c = gh_verify(w, D, D);
  CHECK(c.ok);
  GHWitness bad = w;
  bad.P.pop_back();
  CHECK_FALSE(gh_verify(bad, D, D).ok);
  GHWitness bad2 = w;
  bad2.P[0].carriers[0] = Carrier(4);
  CHECK_FALSE(gh_verify(bad2, D, D).ok);

  GHWitness ww = gh_compose(w, D, D, w, D);
  CHECK(ww.delta == 2 * w.delta);
  CHECK(ww.K == w.K);
  CHECK(gh_verify(ww, D, D).ok);
  MarkedComplex F = induce_resolution(resolution_free(2), make_level_data({{"family", "free"}, {"rank", 2}},
                                                                         {{"kind", "abelian"}, {"moduli", {2, 2}}}).level);
  CHECK_THROWS(gh_compose(w, D, D, identity_witness(F), F));
}

TEST_CASE("induced resolutions are strict on random levels") {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    LevelData LD = random_level(rng, 12);
    ResolutionData C = resolution_for(LD.group);
    MarkedComplex D = induce_resolution(C, LD.level);
    CHECK(defect_report(D, ModuleVector::basis(D.module(0), 0)).strict());
    CHECK(resolution_is_complex(C, *LD.level->q));
    for (int r = 0; r <= D.top(); ++r) CHECK(D.module(r).dim() == C.rank(r));
  }
}
