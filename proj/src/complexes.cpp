#include "torgrad/complexes.hpp"

#include <algorithm>

#include "torgrad/coeff.hpp"

namespace torgrad {

Fn ones(int n) { return Fn(n, 1); }

Carrier support(const Fn& f) {
  Carrier c(static_cast<int>(f.size()));
  for (size_t x = 0; x < f.size(); ++x)
    if (f[x]) c.set(static_cast<int>(x));
  return c;
}

Fn Augmentation::apply(const Level& L, const ModuleVector& z) const {
  if (z.rank() != static_cast<int>(v.size())) throw ShapeMismatch("augmentation applied to wrong rank");
  const FiniteQuotient& q = *L->q;
  int n = L->n();
  int64_t p = L->p;
  Fn out(n, 0);
  for (size_t i = 0; i < v.size(); ++i)
    for (const auto& [g, f] : z.comps[i].columns()) {
      int gi = q.inv(g);
      for (int x = 0; x < n; ++x)
        if (f[x]) out[x] = cadd(out[x], cmul(f[x], v[i][q.mul(gi, x)], p), p);
    }
  for (auto& a : out) a = cnorm(a, p);
  return out;
}

int64_t Augmentation::infty_norm(const Level& L) const {
  int64_t m = 0;
  for (const auto& f : v)
    for (int64_t a : f) m = std::max(m, cabs(a, L->p));
  return m;
}

int64_t Augmentation::K(const Level& L) const { return infty_norm(L); }

Augmentation Augmentation::operator-(const Augmentation& o) const {
  if (o.v.size() != v.size()) throw ShapeMismatch("augmentation shapes differ");
  Augmentation r = *this;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t x = 0; x < v[i].size(); ++x) r.v[i][x] = cadd(r.v[i][x], -o.v[i][x]);
  return r;
}

Augmentation compose(const Augmentation& eta, const MarkedMorphism& f) {
  Augmentation r;
  for (int i = 0; i < f.dom().rank(); ++i) r.v.push_back(eta.apply(f.level(), f.row(i)));
  return r;
}

Rational size1(const Augmentation& eta, int n) {
  Rational s = 0;
  for (const auto& f : eta.v) s += frac(support(f).count(), n);
  return s;
}

std::vector<Rational> MarkedComplex::dims() const {
  std::vector<Rational> d;
  for (const auto& M : modules) d.push_back(M.dim());
  return d;
}

bool MarkedComplex::operator==(const MarkedComplex& o) const {
  return modules == o.modules && d == o.d && eta == o.eta;
}

void validate(const MarkedComplex& D) {
  if (D.d.size() + 1 != D.modules.size()) throw ShapeMismatch("complex needs one boundary per positive degree");
  for (int r = 1; r <= D.top(); ++r) {
    const auto& b = D.boundary(r);
    if (!(b.dom() == D.module(r)) || !(b.cod() == D.module(r - 1)))
      throw ShapeMismatch("boundary " + std::to_string(r) + " has wrong shape");
  }
  if (D.eta) {
    if (static_cast<int>(D.eta->v.size()) != D.module(0).rank()) throw ShapeMismatch("augmentation rank");
    for (int i = 0; i < D.module(0).rank(); ++i)
      if (!support(D.eta->v[i]).subset_of(D.module(0).carriers[i]))
        throw ShapeMismatch("augmentation value leaves its carrier");
  }
}

DefectReport defect_report(const MarkedComplex& D, const std::optional<ModuleVector>& z) {
  DefectReport rep;
  int n = D.level->n();
  rep.delta.assign(std::max(D.top(), 0), Rational(0));
  if (D.eta && D.top() >= 1) rep.delta[0] = size1(compose(*D.eta, D.boundary(1)), n);
  for (int r = 1; r + 1 <= D.top(); ++r) rep.delta[r] = size1(compose(D.boundary(r), D.boundary(r + 1)));
  if (D.eta && z) {
    Fn e = D.eta->apply(D.level, *z);
    int bad = 0;
    for (int x = 0; x < n; ++x)
      if (cnorm(e[x] - 1, D.level->p) != 0) ++bad;
    rep.delta_eta = frac(bad, n);
  }
  rep.overall = rep.delta_eta;
  for (const auto& d : rep.delta) rep.overall = std::max(rep.overall, d);
  return rep;
}

std::pair<ModuleVector, Rational> surjectivity_witness(const MarkedComplex& D) {
  if (!D.eta) throw ShapeMismatch("complex has no augmentation");
  const FiniteQuotient& q = *D.level->q;
  int n = D.level->n();
  int64_t p = D.level->p;
  const MarkedModule& M = D.module(0);
  ModuleVector z = ModuleVector::zero(M);
  int uncovered = 0;
  for (int x = 0; x < n; ++x) {
    bool done = false;
    for (int i = 0; i < M.rank() && !done; ++i)
      for (int g = 0; g < n && !done; ++g) {
        int y = q.mul(q.inv(g), x);
        if (!M.carriers[i].has(y)) continue;
        int64_t val = cnorm(D.eta->v[i][y], p);
        int64_t c = 0;
        if (val == 1) c = 1;
        else if (cnorm(-val, p) == 1) c = -1;
        if (!c) continue;
        z.comps[i].add_at(g, x, c);
        done = true;
      }
    if (!done) ++uncovered;
  }
  return {z, frac(uncovered, n)};
}

ComplexStats complex_stats(const MarkedComplex& D, const std::optional<ModuleVector>& z) {
  ComplexStats s;
  for (const auto& M : D.modules) s.max_rank = std::max(s.max_rank, M.rank());
  for (int r = 1; r <= D.top(); ++r) {
    s.kappa = std::max(s.kappa, op_norm(D.boundary(r)));
    MorphismStats m = morphism_stats(D.boundary(r));
    s.nu = std::max(s.nu, m.N1);
    s.nu_underline = std::max(s.nu_underline, m.N1_underline);
  }
  if (D.eta) s.eta_infty = D.eta->infty_norm(D.level);
  if (z) {
    s.z_N1 = N1(*z);
    s.z_N2 = N2(*z);
    s.z_infty = linf_norm(*z);
  }
  return s;
}

std::vector<Rational> check_chain_map(const ChainMap& f, const MarkedComplex& C, const MarkedComplex& D) {
  int top = std::min(C.top(), D.top());
  if (static_cast<int>(f.size()) < top + 1) throw ShapeMismatch("chain map needs a component per degree");
  for (int r = 0; r <= top; ++r)
    if (!(f[r].dom() == C.module(r)) || !(f[r].cod() == D.module(r))) throw ShapeMismatch("chain map component shape");
  std::vector<Rational> eps(top + 1, Rational(0));
  int n = C.level->n();
  if (C.eta && D.eta) eps[0] = size1(compose(*D.eta, f[0]) - *C.eta, n);
  for (int r = 1; r <= top; ++r)
    eps[r] = size1(compose(D.boundary(r), f[r]) - compose(f[r - 1], C.boundary(r)));
  return eps;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  ChainMap h;
  for (size_t r = 0; r < std::min(f.size(), g.size()); ++r) h.push_back(compose(g[r], f[r]));
  return h;
}

ChainMap identity_map(const MarkedComplex& C) {
  ChainMap f;
  for (const auto& M : C.modules) f.push_back(MarkedMorphism::identity(M));
  return f;
}

MarkedComplex induce_resolution(const ResolutionData& C, const Level& L, int top) {
  if (top < 0) top = C.length();
  if (top > C.length()) throw ShapeMismatch("resolution does not reach degree " + std::to_string(top));
  if (C.presentation.generators != L->q->num_generators())
    throw ConfigError("quotient has the wrong number of generators for " + C.name);
  L->q->verify_relators(C.presentation);
  MarkedComplex D;
  D.level = L;
  for (int r = 0; r <= top; ++r) D.modules.push_back(full_module(L, C.rank(r)));
  for (int r = 1; r <= top; ++r) {
    const auto& M = C.d(r);
    std::vector<std::vector<CrossedElt>> e(C.rank(r), std::vector<CrossedElt>(C.rank(r - 1), CrossedElt(L)));
    for (int i = 0; i < C.rank(r); ++i)
      for (int j = 0; j < C.rank(r - 1); ++j) e[i][j] = embed(L, M[i][j]);
    D.d.emplace_back(D.modules[r], D.modules[r - 1], e);
  }
  Augmentation eta;
  for (int i = 0; i < C.rank(0); ++i) eta.v.push_back(i == 0 ? ones(L->n()) : Fn(L->n(), 0));
  D.eta = eta;
  return D;
}

static MarkedModule empty_module(const Level& L) { return {L, {}}; }

static MarkedModule direct_sum(const MarkedModule& a, const MarkedModule& b) {
  MarkedModule m{a.level, a.carriers};
  m.carriers.insert(m.carriers.end(), b.carriers.begin(), b.carriers.end());
  return m;
}

MarkedComplex mapping_cone(const ChainMap& phi, const MarkedComplex& D, const MarkedComplex& E) {
  int common = std::min(D.top(), E.top());
  auto eps = check_chain_map(phi, D, E);
  for (int r = 1; r <= common; ++r)
    if (eps[r] != 0) throw std::invalid_argument("mapping cone needs a strict chain map");
  const Level& L = D.level;
  auto Dm = [&](int r) { return r >= 0 && r <= D.top() ? D.module(r) : empty_module(L); };
  auto Em = [&](int r) { return r >= 0 && r <= E.top() ? E.module(r) : empty_module(L); };
  int top = std::max(D.top() + 1, E.top());
  MarkedComplex C;
  C.level = L;
  for (int r = 0; r <= top; ++r) C.modules.push_back(direct_sum(Dm(r - 1), Em(r)));
  for (int r = 1; r <= top; ++r) {
    const MarkedModule &dom = C.modules[r], &cod = C.modules[r - 1];
    int dn = Dm(r - 1).rank(), dn2 = Dm(r - 2).rank();
    auto e = MarkedMorphism::zero(dom, cod).entries();
    for (int i = 0; i < dn; ++i) {
      if (r - 1 >= 1 && r - 1 <= D.top())
        for (int j = 0; j < dn2; ++j) e[i][j] = D.boundary(r - 1).entry(i, j).scaled(-1);
      if (r - 1 < static_cast<int>(phi.size()) && r - 1 <= E.top())
        for (int j = 0; j < Em(r - 1).rank(); ++j) e[i][dn2 + j] = phi[r - 1].entry(i, j);
    }
    if (r <= E.top())
      for (int i = 0; i < Em(r).rank(); ++i)
        for (int j = 0; j < Em(r - 1).rank(); ++j) e[dn + i][dn2 + j] = E.boundary(r).entry(i, j);
    C.d.emplace_back(dom, cod, e);
  }
  return C;
}

MarkedComplex tensor_complex(const MarkedComplex& D, const MarkedComplex& E) {
  if (!same_level(D.level, E.level)) throw LevelMismatch();
  const Level& L = D.level;
  int top = D.top() + E.top();
  struct Idx { int p, i, q, j; };
  std::vector<std::vector<Idx>> index(top + 1);
  MarkedComplex T;
  T.level = L;
  for (int r = 0; r <= top; ++r) {
    MarkedModule M{L, {}};
    for (int p = 0; p <= D.top(); ++p) {
      int q = r - p;
      if (q < 0 || q > E.top()) continue;
      for (int i = 0; i < D.module(p).rank(); ++i)
        for (int j = 0; j < E.module(q).rank(); ++j) {
          index[r].push_back({p, i, q, j});
          M.carriers.push_back(D.module(p).carriers[i] & E.module(q).carriers[j]);
        }
    }
    T.modules.push_back(M);
  }
  auto find = [&](int r, int p, int i, int q, int j) {
    for (size_t k = 0; k < index[r].size(); ++k) {
      const Idx& x = index[r][k];
      if (x.p == p && x.i == i && x.q == q && x.j == j) return static_cast<int>(k);
    }
    return -1;
  };
  for (int r = 1; r <= top; ++r) {
    auto e = MarkedMorphism::zero(T.modules[r], T.modules[r - 1]).entries();
    for (size_t k = 0; k < index[r].size(); ++k) {
      auto [p, i, q, j] = index[r][k];
      if (p >= 1)
        for (int i2 = 0; i2 < D.module(p - 1).rank(); ++i2) e[k][find(r - 1, p - 1, i2, q, j)] = D.boundary(p).entry(i, i2);
      if (q >= 1)
        for (int j2 = 0; j2 < E.module(q - 1).rank(); ++j2)
          e[k][find(r - 1, p, i, q - 1, j2)] = E.boundary(q).entry(j, j2).scaled(p % 2 ? -1 : 1);
    }
    T.d.emplace_back(T.modules[r], T.modules[r - 1], e);
  }
  if (D.eta && E.eta) {
    Augmentation eta;
    for (const auto& x : index[0]) {
      Fn v(L->n(), 0);
      const Carrier& c = T.modules[0].carriers[eta.v.size()];
      for (int y = 0; y < L->n(); ++y)
        if (c.has(y)) v[y] = cnorm(cmul(D.eta->v[x.i][y], E.eta->v[x.j][y], L->p), L->p);
      eta.v.push_back(v);
    }
    T.eta = eta;
  }
  return T;
}

MarkedComplex trivial_complex(const Level& L) {
  MarkedComplex T;
  T.level = L;
  T.modules.push_back(full_module(L, 1));
  T.eta = Augmentation{{ones(L->n())}};
  return T;
}

GHWitness identity_witness(const MarkedComplex& D) {
  GHWitness w;
  w.P = D.modules;
  for (const auto& M : D.modules) {
    std::vector<int> s(M.rank());
    for (int i = 0; i < M.rank(); ++i) s[i] = i;
    w.phi.push_back(s);
    w.phi2.push_back(s);
  }
  w.delta = frac(1, D.level->n());
  w.K = 0;
  return w;
}

GHCheck gh_verify(const GHWitness& w, const MarkedComplex& D, const MarkedComplex& D2) {
  GHCheck c;
  int top = D.top();
  if (D2.top() != top || static_cast<int>(w.P.size()) != top + 1 || static_cast<int>(w.phi.size()) != top + 1 ||
      static_cast<int>(w.phi2.size()) != top + 1) {
    c.reason = "ambient degrees do not match the complexes";
    return c;
  }
  int n = D.level->n();
  std::vector<MarkedMorphism> inc, inc2, pr, pr2;
  try {
    for (int r = 0; r <= top; ++r) {
      if (!same_level(w.P[r].level, D.level)) throw ShapeMismatch("ambient on another level");
      inc.push_back(marked_inclusion(D.module(r), w.P[r], w.phi[r]));
      inc2.push_back(marked_inclusion(D2.module(r), w.P[r], w.phi2[r]));
      pr.push_back(marked_projection(w.P[r], D.module(r), w.phi[r]));
      pr2.push_back(marked_projection(w.P[r], D2.module(r), w.phi2[r]));
    }
  } catch (const std::exception& e) {
    c.reason = std::string("malformed witness: ") + e.what();
    return c;
  }
  bool ok = true;
  for (int r = 0; r <= top; ++r) {
    Rational sd = 0;
    for (int k = 0; k < w.P[r].rank(); ++k) {
      Carrier a(n), b(n);
      for (size_t i = 0; i < w.phi[r].size(); ++i)
        if (w.phi[r][i] == k) a = D.module(r).carriers[i];
      for (size_t i = 0; i < w.phi2[r].size(); ++i)
        if (w.phi2[r][i] == k) b = D2.module(r).carriers[i];
      sd += (a ^ b).measure();
    }
    c.sym_diff.push_back(sd);
    if (!(sd < w.delta)) ok = false;
  }
  // F_r = phi_{r-1} ∂_r pi_r on the ambient modules.
  if (D.eta && D2.eta) {
    Augmentation diff = compose(*D.eta, pr[0]) - compose(*D2.eta, pr2[0]);
    c.map_delta.push_back(size1(diff, n));
    c.map_norm.push_back(diff.K(D.level));
  } else {
    c.map_delta.push_back(0);
    c.map_norm.push_back(0);
  }
  for (int r = 1; r <= top; ++r) {
    MarkedMorphism F = compose(inc[r - 1], compose(D.boundary(r), pr[r]));
    MarkedMorphism F2 = compose(inc2[r - 1], compose(D2.boundary(r), pr2[r]));
    AlmostEq a = almost_eq(F, F2);
    c.map_delta.push_back(a.delta_min);
    c.map_norm.push_back(a.norm_on_difference);
  }
  for (int r = 0; r <= top; ++r)
    if (!(c.map_delta[r] < w.delta) || c.map_norm[r] > w.K) ok = false;
  for (int r = 0; r <= top; ++r) {
    c.Phi.push_back(compose(pr2[r], inc[r]));
    c.Phi2.push_back(compose(pr[r], inc2[r]));
    AlmostEq back = almost_eq(compose(c.Phi2[r], c.Phi[r]), MarkedMorphism::identity(D.module(r)));
    if (!(back.delta_min < w.delta)) ok = false;
  }
  c.ok = ok;
  if (!ok) c.reason = "witness parameters not met";
  return c;
}

GHWitness gh_compose(const GHWitness& w1, const MarkedComplex& D, const MarkedComplex& D2,
                     const GHWitness& w2, const MarkedComplex& D3) {
  int top = D2.top();
  if (static_cast<int>(w1.P.size()) != top + 1 || static_cast<int>(w2.P.size()) != top + 1 || D.top() != top ||
      D3.top() != top)
    throw std::invalid_argument("witnesses do not share the middle complex");
  for (int r = 0; r <= top; ++r)
    if (static_cast<int>(w1.phi2[r].size()) != D2.module(r).rank() ||
        static_cast<int>(w2.phi[r].size()) != D2.module(r).rank())
      throw std::invalid_argument("witnesses do not share the middle complex");
  GHWitness w;
  w.delta = w1.delta + w2.delta;
  w.K = w1.K + w2.K;
  for (int r = 0; r <= top; ++r) {
    const MarkedModule &P = w1.P[r], &Q = w2.P[r];
    MarkedModule R{P.level, P.carriers};
    std::vector<int> q_to_r(Q.rank(), -1);
    for (int s = 0; s < D2.module(r).rank(); ++s) {
      int k = w1.phi2[r][s], l = w2.phi[r][s];
      R.carriers[k] = R.carriers[k] | Q.carriers[l];
      q_to_r[l] = k;
    }
    for (int l = 0; l < Q.rank(); ++l)
      if (q_to_r[l] < 0) {
        q_to_r[l] = R.rank();
        R.carriers.push_back(Q.carriers[l]);
      }
    std::vector<int> p3;
    for (int i = 0; i < D3.module(r).rank(); ++i) p3.push_back(q_to_r[w2.phi2[r][i]]);
    w.P.push_back(R);
    w.phi.push_back(w1.phi[r]);
    w.phi2.push_back(p3);
  }
  return w;
}

}  // namespace torgrad
