#include "torgrad/random.hpp"

#include <set>

namespace torgrad {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<LevelData> level_menu(int max_order, int64_t p) {
  const json Z = {{"family", "Z"}}, F2 = {{"family", "free"}, {"rank", 2}}, Z2 = {{"family", "Zd"}, {"rank", 2}},
             Z3 = {{"family", "Zd"}, {"rank", 3}};
  std::vector<std::pair<json, json>> menu;
  for (int n = 1; n <= 12; ++n) menu.push_back({Z, {{"kind", "abelian"}, {"moduli", {n}}}});
  menu.push_back({Z2, {{"kind", "abelian"}, {"moduli", {2, 2}}}});
  menu.push_back({Z2, {{"kind", "abelian"}, {"moduli", {2, 3}}}});
  menu.push_back({Z2, {{"kind", "abelian"}, {"moduli", {2, 4}}}});
  menu.push_back({Z3, {{"kind", "abelian"}, {"moduli", {2, 2, 2}}}});
  menu.push_back({F2, {{"kind", "abelian"}, {"moduli", {3, 3}}}});
  menu.push_back({F2, {{"kind", "permutation"}, {"degree", 3}, {"images", {{1, 0, 2}, {1, 2, 0}}}}});
  menu.push_back({F2, {{"kind", "permutation"}, {"degree", 4}, {"images", {{1, 2, 3, 0}, {0, 3, 2, 1}}}}});
  std::vector<LevelData> r;
  for (const auto& [g, q] : menu) {
    LevelData L = make_level_data(g, q, p);
    if (L.level->n() <= max_order) r.push_back(std::move(L));
  }
  return r;
}

LevelData random_level(Rng& rng, int max_order, int64_t p) {
  auto menu = level_menu(max_order, p);
  return menu.at(uniform(rng, 0, static_cast<int>(menu.size()) - 1));
}

Carrier random_carrier(Rng& rng, int n, double density) {
  std::bernoulli_distribution b(density);
  Carrier c(n);
  for (int x = 0; x < n; ++x)
    if (b(rng)) c.set(x);
  return c;
}

MarkedModule random_module(Rng& rng, const Level& L, int rank) {
  MarkedModule M{L, {}};
  for (int i = 0; i < rank; ++i) M.carriers.push_back(random_carrier(rng, L->n()));
  return M;
}

static int64_t coeff(Rng& rng, int64_t c) {
  int64_t v = 0;
  while (v == 0) v = std::uniform_int_distribution<int64_t>(-c, c)(rng);
  return v;
}

MarkedMorphism random_morphism(Rng& rng, const MarkedModule& dom, const MarkedModule& cod, int max_terms, int64_t c) {
  const Level& L = dom.level;
  int n = L->n();
  std::vector<std::vector<CrossedElt>> e(dom.rank(), std::vector<CrossedElt>(cod.rank(), CrossedElt(L)));
  for (int i = 0; i < dom.rank(); ++i)
    for (int j = 0; j < cod.rank(); ++j) {
      int k = uniform(rng, 0, std::min(max_terms, n));
      std::set<int> gs;
      while (static_cast<int>(gs.size()) < k) gs.insert(uniform(rng, 0, n - 1));
      for (int g : gs)
        for (int x = 0; x < n; ++x)
          if (uniform(rng, 0, 1)) e[i][j].add_at(g, x, coeff(rng, c));
    }
  return MarkedMorphism(dom, cod, e);
}

MarkedMorphism random_morphism(Rng& rng, const Level& L, int max_rank, int max_terms, int64_t c) {
  MarkedModule dom = random_module(rng, L, uniform(rng, 1, max_rank));
  MarkedModule cod = random_module(rng, L, uniform(rng, 1, max_rank));
  return random_morphism(rng, dom, cod, max_terms, c);
}

ModuleVector random_vector(Rng& rng, const MarkedModule& M, int max_terms, int64_t c) {
  const Level& L = M.level;
  const FiniteQuotient& q = *L->q;
  ModuleVector v = ModuleVector::zero(M);
  for (int i = 0; i < M.rank(); ++i) {
    int k = uniform(rng, 0, max_terms);
    for (int t = 0; t < k; ++t) {
      int g = uniform(rng, 0, L->n() - 1);
      for (int x : M.carriers[i].translate(q, g).points())
        if (uniform(rng, 0, 1)) v.comps[i].add_at(g, x, coeff(rng, c));
    }
  }
  return v;
}

IntMatrix random_int_matrix(Rng& rng, int max_rows, int max_cols, int64_t c) {
  IntMatrix A(uniform(rng, 1, max_rows), uniform(rng, 1, max_cols));
  for (int r = 0; r < A.rows; ++r)
    for (int k = 0; k < A.cols; ++k) A.add(r, k, std::uniform_int_distribution<int64_t>(-c, c)(rng));
  return A;
}

}  // namespace torgrad
