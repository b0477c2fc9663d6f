// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torgrad/constructions.hpp"
#include "torgrad/lognorm.hpp"
#include "torgrad/pipeline.hpp"
#include "torgrad/random.hpp"
#include "torgrad/strictify.hpp"

using namespace torgrad;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      note = why;
    }
  }
};

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

bool exactly_strict(const MarkedComplex& D, const std::optional<ModuleVector>& z) {
  for (int r = 2; r <= D.top(); ++r)
    if (!(compose(D.boundary(r - 1), D.boundary(r)) == MarkedMorphism::zero(D.module(r), D.module(r - 2)))) return false;
  if (!D.eta || !z) return false;
  if (D.top() >= 1)
    for (const auto& v : compose(*D.eta, D.boundary(1)).v)
      for (auto x : v)
        if (x) return false;
  return D.eta->apply(D.level, *z) == ones(D.level->n());
}

Outcome free_groups() {
  Outcome o;
  json F2 = {{"family", "free"}, {"rank", 2}};
  std::vector<json> qs = {{{"kind", "abelian"}, {"moduli", {2, 2}}},
                          {{"kind", "abelian"}, {"moduli", {3, 3}}},
                          {{"kind", "abelian"}, {"moduli", {4, 4}}},
                          {{"kind", "permutation"}, {"degree", 3}, {"images", {{1, 0, 2}, {1, 2, 0}}}}};
  std::vector<int> expect = {5, 10, 17, 7};
  ResolutionData C = resolution_free(2);
  for (size_t k = 0; k < qs.size(); ++k) {
    LevelData L = make_level_data(F2, qs[k]);
    const FiniteQuotient& q = *L.level->q;
    int b = homology(shapiro_complex(C, q), 1).betti_q;
    o.require(b == expect[k], "rank H1 " + std::to_string(b) + " at index " + std::to_string(q.order()));
    o.require(oracle::betti(C, q, 1) == expect[k], "dense oracle disagrees");
    o.require(std::abs(static_cast<double>(b) / q.order() - 1.0) <= 1.0 / q.order() + 1e-12, "normalized value");
  }
  o.note = o.pass ? "rk H1 = 5, 10, 17, 7" : o.note;
  return o;
}

Outcome surface_groups() {
  Outcome o;
  ResolutionData C = resolution_surface(2);
  for (int n = 2; n <= 8; ++n) {
    LevelData L = make_level_data({{"family", "surface"}, {"genus", 2}}, {{"kind", "abelian"}, {"moduli", {n}}});
    const FiniteQuotient& q = *L.level->q;
    ZComplex Z = shapiro_complex(C, q);
    HomologyResult h1 = homology(Z, 1), h2 = homology(Z, 2);
    std::string at = " at Z/" + std::to_string(n);
    o.require(h1.betti_q == 2 + 2 * n, "rank H1" + at);
    o.require(oracle::betti(C, q, 1) == 2 + 2 * n, "dense oracle rank H1" + at);
    o.require(h1.torsion.empty(), "H1 torsion" + at);
    o.require(oracle::log_torsion(oracle::to_z(Z.d[1])) == 0, "oracle torsion of coker d2" + at);
    o.require(h2.betti_q == 1 && oracle::betti(C, q, 2) == 1, "rank H2" + at);
  }
  o.note = o.pass ? "n = 2..8: rk H1 = 2 + 2n, torsion-free, rk H2 = 1" : o.note;
  return o;
}

Outcome rokhlin() {
  Outcome o;
  for (auto [M, N] : std::vector<std::pair<int, int>>{{6, 2}, {7, 2}, {12, 4}, {100, 10}}) {
    std::string at = " at (" + std::to_string(M) + "," + std::to_string(N) + ")";
    IntegersEmbedding E = integers_embedding(M, N);
    const MarkedComplex& D = E.res.D;
    for (const auto& [name, ok] : E.res.ledger.checks) o.require(ok, name + at);
    for (const auto& [name, ok] : E.ledger.checks) o.require(ok, name + at);
    Rational mu = (E.res.tower.A | E.res.tower.B).measure();
    o.require(D.module(0).dim() == mu && D.module(1).dim() == mu, "dims" + at);
    o.require(mu <= frac(1, N) + frac(M % N, M), "dimension bound" + at);
    o.require(oracle::atom_norm(D.boundary(1)) == 2, "|d1| != 2" + at);
    o.require(all_zero(check_chain_map(E.f, E.C, D)) && all_zero(check_chain_map(E.r, D, E.C)), "chain maps" + at);
    MarkedMorphism id0 = MarkedMorphism::identity(E.C.module(0)), id1 = MarkedMorphism::identity(E.C.module(1));
    o.require(compose(E.C.boundary(1), E.h0) == compose(E.r[0], E.f[0]) - id0, "degree 0 homotopy" + at);
    o.require(compose(E.h0, E.C.boundary(1)) == compose(E.r[1], E.f[1]) - id1, "degree 1 homotopy" + at);
    o.require(oracle::atom_norm(E.f[0]) <= 1 && oracle::atom_norm(E.f[1]) <= 1 && oracle::atom_norm(E.r[0]) <= 1,
              "|f0|,|f1|,|r0|" + at);
    o.require(oracle::atom_norm(E.r[1]) <= N, "|r1|" + at);
    o.require(oracle::atom_norm(E.h0) <= static_cast<long long>(N) * N, "|h0|" + at);
  }
  o.note = o.pass ? "4 towers, all ledgers and norm bounds" : o.note;
  return o;
}

Outcome opnorm() {
  Outcome o;
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    LevelData L = random_level(rng, 8);
    MarkedMorphism f = random_morphism(rng, L.level, 3, 4);
    int64_t k = op_norm(f);
    o.require(k == oracle::atom_norm(f), "op_norm differs from the atom maximum");
    Rational brute = 0;
    for (int i = 0; i < f.dom().rank(); ++i)
      for (int u : f.dom().carriers[i].points()) {
        ModuleVector x = ModuleVector::zero(f.dom());
        x.comps[i] = CrossedElt::chi(L.level, Carrier::of(L.level->n(), {u}), 0);
        brute = std::max(brute, Rational(l1_norm(morphism_apply(f, x)) / l1_norm(x)));
      }
    o.require(brute.get_den() == 1 && brute == k, "atom ratio maximum is not the integer op_norm");
    for (int s = 0; s < 1000; ++s) {
      ModuleVector x = random_vector(rng, f.dom());
      o.require(l1_norm(morphism_apply(f, x)) <= k * l1_norm(x), "random input exceeds op_norm");
    }
  }
  o.note = o.pass ? "500 morphisms, 1000 inputs each" : o.note;
  return o;
}

Outcome gabber() {
  Outcome o;
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    IntMatrix A = random_int_matrix(rng, 8, 8, 9);
    double exact = oracle::log_torsion(oracle::to_z(A));
    o.require(std::abs(exact - log_torsion(smith_normal_form(A).torsion())) < 1e-9, "SNF disagrees with the oracle");
    double col = gabber_column_bound(A);
    o.require(std::abs(col - oracle::brute_gabber(A)) < 1e-9, "column bound differs from the oracle");
    o.require(exact <= col + 1e-9, "torsion exceeds the column bound");
    o.require(col <= gabber_split_bound(A, trivial_split(A)) + 1e-9, "column bound exceeds the split bound");
  }
  o.note = o.pass ? "500 matrices" : o.note;
  return o;
}

Outcome torsion_growth() {
  Outcome o;
  Rng rng(6);
  std::vector<LevelData> levels;
  for (auto& L : level_menu(8))
    if (L.level->n() == 4 || L.level->n() == 6 || L.level->n() == 8) levels.push_back(L);
  for (int t = 0; t < 200; ++t) {
    const LevelData& L = levels[uniform(rng, 0, static_cast<int>(levels.size()) - 1)];
    MarkedMorphism f = random_morphism(rng, L.level);
    double tors = oracle::log_torsion(oracle::coinvariants(f));
    double ln = lognorm_of_decomposition(f, atom_decomposition(f.dom())).value;
    o.require(std::abs(ln - oracle::atom_lognorm(f)) < 1e-9, "atom lognorm differs from the oracle");
    o.require(tors <= L.level->n() * ln + 1e-9, "torsion exceeds |G| lognorm");
  }
  o.note = o.pass ? "200 morphisms at |G| in {4,6,8}" : o.note;
  return o;
}

Outcome strictification() {
  Outcome o;
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    LevelData L = random_level(rng, 8);
    ResolutionData C = resolution_for(L.group);
    MarkedComplex D = induce_resolution(C, L.level, std::min(C.length(), 2));
    ModuleVector z = ModuleVector::basis(D.module(0), 0);
    int top = D.top(), n = L.level->n();
    const MarkedMorphism& d = D.boundary(top);
    MarkedComplex P = D;
    DefectReport in;
    for (int tries = 0; tries < 100 && in.overall == 0; ++tries) {
      auto e = d.entries();
      int i = uniform(rng, 0, d.dom().rank() - 1), j = uniform(rng, 0, d.cod().rank() - 1);
      e[i][j].add_at(uniform(rng, 0, n - 1), uniform(rng, 0, n - 1), uniform(rng, 1, 3));
      P.d[top - 1] = MarkedMorphism(d.dom(), d.cod(), e);
      in = defect_report(P, z);
    }
    o.require(in.overall > 0, "no perturbation with a nonzero defect found");
    o.require(in.overall <= frac(1, n), "perturbation larger than 1/|G|");
    auto [S, cert] = strictify_complex(P, z);
    o.require(exactly_strict(S, cert.z_hat), "output not strict");
    for (int r = 0; r < top; ++r) {
      Rational bound = (1 + P.module(r + 1).rank() * morphism_stats(P.boundary(r + 1)).N1_underline) * in.overall;
      o.require(cert.inclusion_defect[r + 1] <= bound, "inclusion defect above the per-degree bound");
    }
    o.require(gh_verify(cert.witness, P, S).ok, "GH witness fails");
    o.require(strictify_complex(D, z).first == D, "strict input changed");
  }
  o.note = o.pass ? "100 perturbations" : o.note;
  return o;
}

Outcome cheap_integers() {
  Outcome o;
  for (Rational eps : {frac(1, 2), frac(1, 4), frac(1, 8)}) {
    int N = cheap_tile(eps);
    for (int k : {2, 4, 8, 16}) {
      int M = N * k;
      std::string at = " at eps " + eps.get_str() + ", M " + std::to_string(M);
      CheapZ Z = cheap_embedding_Z(eps, M);
      const MarkedComplex& D = Z.res.D;
      for (int r = 0; r <= D.top(); ++r) o.require(D.module(r).dim() < eps, "dim D_r" + at);
      for (int r = 1; r <= D.top(); ++r) o.require(oracle::atom_norm(D.boundary(r)) <= 2, "|d_r|" + at);
      o.require(Z.ok(), "embedding ledger" + at);
      const FiniteQuotient& q = *Z.res.tower.level->q;
      ZComplex S = shapiro_complex(resolution_Z(), q);
      o.require(oracle::betti(resolution_Z(), q, 1) == 1 && homology(S, 1).torsion.empty(), "H1 is not Z" + at);
      for (int n = 0; n <= 1; ++n) {
        RetractReport rr = retract_inequality_check(S, D, n);
        o.require(rr.ok(), "retract inequality in degree " + std::to_string(n) + at);
      }
      double ln = lognorm_upper(D.boundary(1)).value;
      o.require(retract_inequality_check(S, D, 0).logtors_bound <= M * ln + 1e-9, "cokernel torsion above lognorm" + at);
    }
  }
  o.note = o.pass ? "eps 1/2, 1/4, 1/8 on four levels each" : o.note;
  return o;
}

Outcome lognorm_calculus() {
  Outcome o;
  Rng rng(9);
  const double tol = 1e-12;
  int count = 0;
  while (count < 200) {
    LevelData L = random_level(rng, 4);
    const Level& lv = L.level;
    MarkedMorphism f = random_morphism(rng, lv, 2, 3);
    if (f.dom().dim() * lv->n() > 10) continue;
    ++count;
    double ex = lognorm_exact(f);
    o.require(std::abs(ex - oracle::brute_lognorm(f)) < 1e-9, "exact value differs from partition enumeration");
    double lp = oracle::log_plus(static_cast<double>(oracle::atom_norm(f)));
    o.require(ex <= std::min(f.dom().dim(), marked_rank(f)).get_d() * lp + tol, "dimension bound");

    std::vector<Carrier> P, Q;
    for (const auto& A : f.dom().carriers) {
      Carrier c = random_carrier(rng, lv->n()) & A;
      P.push_back(c);
      Q.push_back(A - c);
    }
    double ep = lognorm_exact(restrict_domain(f, P)), eq = lognorm_exact(restrict_domain(f, Q));
    o.require(ex <= ep + eq + tol, "subadditivity");
    o.require(ep <= ex + tol, "precomposition");

    MarkedModule big = f.cod();
    int at = uniform(rng, 0, big.rank());
    big.carriers.insert(big.carriers.begin() + at, random_carrier(rng, lv->n()));
    std::vector<int> sigma;
    for (int j = 0; j < f.cod().rank(); ++j) sigma.push_back(j < at ? j : j + 1);
    o.require(std::abs(lognorm_exact(compose(marked_inclusion(f.cod(), big, sigma), f)) - ex) < tol,
              "marked inclusion invariance");

    // g differs from f by one term on one atom.
    auto e = f.entries();
    int i = uniform(rng, 0, f.dom().rank() - 1), j = uniform(rng, 0, f.cod().rank() - 1);
    auto pts = (f.dom().carriers[i] & Carrier::full(lv->n())).points();
    if (pts.empty()) continue;
    int u = pts[uniform(rng, 0, static_cast<int>(pts.size()) - 1)];
    int g0 = uniform(rng, 0, lv->n() - 1);
    if (!f.cod().carriers[j].translate(*lv->q, g0).has(u)) continue;
    e[i][j].add_at(g0, u, uniform(rng, 1, 3));
    MarkedMorphism g(f.dom(), f.cod(), e);
    AlmostEq ae = almost_eq(f, g);
    MarkedMorphism diff = f - g;
    std::vector<Carrier> M1;
    for (int r = 0; r < diff.dom().rank(); ++r) M1.push_back(supp1(diff.row(r), lv->n()));
    int64_t K = std::max(ae.norm_on_difference, op_norm(restrict_domain(f, M1)));
    o.require(ex <= lognorm_exact(g) + ae.delta_min.get_d() * oracle::log_plus(static_cast<double>(K)) + tol,
              "almost-equality stability");
  }
  o.note = o.pass ? "200 morphisms within the cap" : o.note;
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"free-group gradients", free_groups},
      {"surface-group gradients", surface_groups},
      {"Rokhlin resolution identities", rokhlin},
      {"operator-norm formula", opnorm},
      {"Gabber bound", gabber},
      {"per-level torsion growth", torsion_growth},
      {"strictification", strictification},
      {"cheap embeddings for Z", cheap_integers},
      {"lognorm calculus", lognorm_calculus},
  };
  bool all = true;
  for (size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s  %s (%.2fs) %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, s,
                o.note.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
