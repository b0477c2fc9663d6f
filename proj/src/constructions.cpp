#include "torgrad/constructions.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "torgrad/coeff.hpp"
#include "torgrad/discretize.hpp"

namespace torgrad {

using Matrix = std::vector<std::vector<GroupRingElt>>;

static GroupRingElt one_minus(const Word& w) { return GroupRingElt::one() - GroupRingElt::term(w, 1); }

ResolutionData resolution_free(int d) {
  if (d < 1) throw ConfigError("free group rank must be at least 1");
  ResolutionData C{"free" + std::to_string(d), presentation_free(d), {1, d}, {}};
  Matrix d1;
  for (int s = 0; s < d; ++s) d1.push_back({one_minus(Word::gen(s))});
  C.boundary.push_back(d1);
  return C;
}

ResolutionData resolution_Z() {
  ResolutionData C = resolution_free(1);
  C.name = "Z";
  C.presentation = presentation_Z();
  return C;
}

ResolutionData resolution_surface(int genus) {
  if (genus < 1) throw ConfigError("surface genus must be at least 1");
  int k = 2 * genus;
  ResolutionData C{"surface" + std::to_string(genus), presentation_surface(genus), {1, k, 1}, {}};
  Matrix d1, d2(1);
  for (int s = 0; s < k; ++s) d1.push_back({one_minus(Word::gen(s))});
  const Word& rel = C.presentation.relators.at(0);
  for (int s = 0; s < k; ++s) d2[0].push_back(fox_derivative(rel, s));
  C.boundary = {d1, d2};
  return C;
}

ResolutionData resolution_presentation(const FinitePresentation& p) {
  if (p.generators < 1) throw ConfigError("presentation needs a generator");
  int k = static_cast<int>(p.relators.size());
  ResolutionData C{"presentation", p, {1, p.generators}, {}};
  Matrix d1;
  for (int s = 0; s < p.generators; ++s) d1.push_back({one_minus(Word::gen(s))});
  C.boundary.push_back(d1);
  if (k) {
    Matrix d2(k);
    for (int r = 0; r < k; ++r)
      for (int s = 0; s < p.generators; ++s) d2[r].push_back(fox_derivative(p.relators[r], s));
    C.ranks.push_back(k);
    C.boundary.push_back(d2);
  }
  return C;
}

static Word shift_word(const Word& w, int by) {
  std::vector<Letter> l = w.letters();
  for (auto& x : l) x.gen += by;
  return reduce_word(l);
}

static GroupRingElt shift_elt(const GroupRingElt& x, int by) {
  GroupRingElt r(x.modulus());
  for (const auto& [w, c] : x.terms()) r.add(shift_word(w, by), c);
  return r;
}

ResolutionData tensor_resolution(const ResolutionData& a, const ResolutionData& b) {
  int ga = a.presentation.generators, gb = b.presentation.generators;
  ResolutionData C;
  C.name = a.name + "x" + b.name;
  C.presentation.generators = ga + gb;
  C.presentation.relators = a.presentation.relators;
  for (const auto& r : b.presentation.relators) C.presentation.relators.push_back(shift_word(r, ga));
  for (int i = 0; i < ga; ++i)
    for (int j = 0; j < gb; ++j)
      C.presentation.relators.push_back(reduce_word({{i, 1}, {ga + j, 1}, {i, -1}, {ga + j, -1}}));
  int top = a.length() + b.length();
  struct Idx { int p, i, q, j; };
  std::vector<std::vector<Idx>> index(top + 1);
  for (int r = 0; r <= top; ++r)
    for (int p = 0; p <= a.length(); ++p) {
      int q = r - p;
      if (q < 0 || q > b.length()) continue;
      for (int i = 0; i < a.rank(p); ++i)
        for (int j = 0; j < b.rank(q); ++j) index[r].push_back({p, i, q, j});
    }
  auto find = [&](int r, int p, int i, int q, int j) {
    for (size_t k = 0; k < index[r].size(); ++k) {
      const Idx& x = index[r][k];
      if (x.p == p && x.i == i && x.q == q && x.j == j) return static_cast<int>(k);
    }
    throw std::logic_error("tensor index");
  };
  for (int r = 0; r <= top; ++r) C.ranks.push_back(static_cast<int>(index[r].size()));
  for (int r = 1; r <= top; ++r) {
    Matrix m(C.ranks[r], std::vector<GroupRingElt>(C.ranks[r - 1]));
    for (size_t k = 0; k < index[r].size(); ++k) {
      auto [p, i, q, j] = index[r][k];
      if (p >= 1)
        for (int i2 = 0; i2 < a.rank(p - 1); ++i2) m[k][find(r - 1, p - 1, i2, q, j)] = a.d(p)[i][i2];
      if (q >= 1)
        for (int j2 = 0; j2 < b.rank(q - 1); ++j2)
          m[k][find(r - 1, p, i, q - 1, j2)] = shift_elt(b.d(q)[j][j2], ga).scaled(p % 2 ? -1 : 1);
    }
    C.boundary.push_back(m);
  }
  return C;
}

ResolutionData resolution_Zd(int d) {
  if (d < 1) throw ConfigError("rank must be at least 1");
  ResolutionData C = resolution_Z();
  for (int k = 1; k < d; ++k) C = tensor_resolution(C, resolution_Z());
  C.name = "Z^" + std::to_string(d);
  C.presentation = presentation_Zd(d);
  return C;
}

bool resolution_is_complex(const ResolutionData& C, const FiniteQuotient& q) {
  return shapiro_complex(C, q).is_complex();
}

Degree0Cheap degree0_cheap(const Level& L, const std::vector<Word>& F, const std::optional<Carrier>& A0,
                           const std::optional<Rational>& eps) {
  const FiniteQuotient& q = *L->q;
  int n = q.order();
  if (F.empty()) throw ConfigError("degree0_cheap needs a nonempty set F");
  std::vector<int> gam;
  for (const auto& w : F) gam.push_back(q.evaluate(w));
  Carrier A(n);
  if (A0) {
    A = *A0;
  } else {
    Carrier covered(n);
    for (int y = 0; y < n; ++y) {
      if (covered.has(y)) continue;
      int a = q.mul(q.inv(gam[0]), y);
      A.set(a);
      for (int g : gam) covered.set(q.mul(g, a));
    }
  }
  Degree0Cheap r;
  r.A = A;
  Carrier FA(n);
  for (int g : gam) {
    Carrier piece = A.translate(q, g) - FA;
    r.pieces.push_back(piece);
    FA = FA | piece;
  }
  r.B = Carrier::full(n) - FA;
  r.D0 = MarkedModule{L, {A, r.B}};
  r.dim = r.D0.dim();
  r.x = ModuleVector::zero(r.D0);
  for (size_t j = 0; j < gam.size(); ++j)
    if (!r.pieces[j].empty()) r.x.comps[0] += CrossedElt::chi(L, r.pieces[j], gam[j]);
  r.x.comps[1] = CrossedElt::chi(L, r.B, 0);
  Fn vA(n, 0), vB(n, 0);
  for (int y = 0; y < n; ++y) {
    vA[y] = A.has(y);
    vB[y] = r.B.has(y);
  }
  r.eta.v = {vA, vB};
  if (eps && !(r.dim < *eps)) throw CoverFailure(r.B.measure(), r.dim);
  return r;
}

int tpow(const FiniteQuotient& q, long k) { return q.pow(q.generator_images().at(0), k); }

RokhlinTower rokhlin_partition(int M, int N) {
  if (N < 1 || M < N || M < 2) throw ConfigError("rokhlin_partition needs M >= N >= 1 and M >= 2");
  RokhlinTower T;
  T.M = M;
  T.N = N;
  T.q = M / N;
  T.level = make_level(abelian_quotient(1, {M}));
  const FiniteQuotient& q = *T.level->q;
  T.A = Carrier(M);
  T.B = Carrier(M);
  for (int k = 0; k < T.q; ++k) {
    T.A_exponents.push_back(static_cast<long>(k) * N);
    T.A.set(tpow(q, static_cast<long>(k) * N));
  }
  for (int y = T.q * N; y < M; ++y) {
    T.B_exponents.push_back(y);
    T.B.set(tpow(q, y));
  }
  std::vector<int> hits(M, 0);
  for (int j = 0; j < N; ++j)
    for (int y : T.A.translate(q, tpow(q, j)).points()) ++hits[y];
  for (int y : T.B.points()) ++hits[y];
  T.partition_ok = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  return T;
}

bool Ledger::all() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

namespace {

// Crossed product of functions on ℤ/M with ℤ, exponents kept unreduced.
struct Lifted {
  int M = 0;
  std::map<long, Fn> cols;

  explicit Lifted(int m = 0) : M(m) {}

  static Lifted chi(int M, const std::vector<char>& S, long a, int64_t c = 1) {
    Lifted z(M);
    Fn f(M, 0);
    for (int y = 0; y < M; ++y)
      if (S[y]) f[y] = c;
    z.add(a, f);
    return z;
  }

  void add(long a, const Fn& f, int64_t s = 1) {
    Fn& g = cols.try_emplace(a, Fn(M, 0)).first->second;
    bool any = false;
    for (int y = 0; y < M; ++y) {
      g[y] = cadd(g[y], cmul(f[y], s));
      any |= g[y] != 0;
    }
    if (!any) cols.erase(a);
  }

  Lifted operator+(const Lifted& o) const {
    Lifted r = *this;
    for (const auto& [a, f] : o.cols) r.add(a, f);
    return r;
  }
  Lifted operator-(const Lifted& o) const {
    Lifted r = *this;
    for (const auto& [a, f] : o.cols) r.add(a, f, -1);
    return r;
  }
  Lifted left_fn(const Fn& h) const {
    Lifted r(M);
    for (const auto& [a, f] : cols) {
      Fn g(M, 0);
      for (int y = 0; y < M; ++y) g[y] = cmul(h[y], f[y]);
      r.add(a, g);
    }
    return r;
  }
  Lifted operator*(const Lifted& o) const {
    Lifted r(M);
    for (const auto& [a, f] : cols)
      for (const auto& [b, g] : o.cols) {
        Fn h(M, 0);
        for (int y = 0; y < M; ++y)
          if (f[y]) h[y] = cmul(f[y], g[((y - a) % M + M) % M]);
        r.add(a + b, h);
      }
    return r;
  }
  bool operator==(const Lifted& o) const { return cols == o.cols; }
};

using LVec = std::array<Lifted, 2>;

LVec operator-(const LVec& a, const LVec& b) { return {a[0] - b[0], a[1] - b[1]}; }

struct IntegersModel {
  int M, N;
  std::array<std::vector<char>, 2> X;  // tower base A and remainder B, by exponent
  LVec x;
  std::array<LVec, 2> rows;            // ∂_1(χ_A e_A), ∂_1(χ_B e_B)

  std::vector<char> shifted(const std::vector<char>& S, long m) const {
    std::vector<char> r(M, 0);
    for (int y = 0; y < M; ++y)
      if (S[y]) r[((y + m) % M + M) % M] = 1;
    return r;
  }
  std::vector<char> meet(const std::vector<char>& a, const std::vector<char>& b) const {
    std::vector<char> r(M, 0);
    for (int y = 0; y < M; ++y) r[y] = a[y] && b[y];
    return r;
  }

  IntegersModel(int M_, int N_, const RokhlinTower& T) : M(M_), N(N_) {
    X[0].assign(M, 0);
    X[1].assign(M, 0);
    for (long a : T.A_exponents) X[0][a] = 1;
    for (long b : T.B_exponents) X[1][b] = 1;
    x = {Lifted(M), Lifted(M)};
    for (int j = 0; j < N; ++j) x[0] = x[0] + Lifted::chi(M, shifted(X[0], j), j);
    x[1] = Lifted::chi(M, X[1], 0);
    for (int k = 0; k < 2; ++k) {
      Lifted op = Lifted::chi(M, X[k], 0) - Lifted::chi(M, X[k], 1);
      rows[k] = {op * x[0], op * x[1]};
    }
  }

  LVec gen(long m, int k) const {
    LVec v{Lifted(M), Lifted(M)};
    v[k] = Lifted::chi(M, shifted(X[k], m), m);
    return v;
  }
  LVec d1(const LVec& v) const {
    LVec r{Lifted(M), Lifted(M)};
    for (int k = 0; k < 2; ++k)
      for (int c = 0; c < 2; ++c) r[c] = r[c] + v[k] * rows[k][c];
    return r;
  }
  Fn eta(const LVec& v) const {
    Fn out(M, 0);
    for (int k = 0; k < 2; ++k)
      for (const auto& [m, f] : v[k].cols)
        for (int y = 0; y < M; ++y)
          if (f[y] && X[k][((y - m) % M + M) % M]) out[y] = cadd(out[y], f[y]);
    return out;
  }
  LVec cm1(const Fn& h) const { return {x[0].left_fn(h), x[1].left_fn(h)}; }
  LVec c0_gen(long m, int k) const {
    std::vector<char> S = shifted(X[k], m);
    LVec r{Lifted(M), Lifted(M)};
    long lo = m >= 0 ? 0 : m, hi = m >= 0 ? m : 0;
    int64_t sign = m >= 0 ? -1 : 1;
    for (long j = lo; j < hi; ++j)
      for (int c = 0; c < 2; ++c) {
        std::vector<char> piece = meet(S, shifted(X[c], j));
        Fn f(M, 0);
        for (int y = 0; y < M; ++y) f[y] = piece[y] ? sign : 0;
        r[c].add(j, f);
      }
    return r;
  }
  LVec c0(const LVec& v) const {
    LVec r{Lifted(M), Lifted(M)};
    for (int k = 0; k < 2; ++k)
      for (const auto& [m, f] : v[k].cols) {
        LVec g = c0_gen(m, k);
        r[0] = r[0] + g[0].left_fn(f);
        r[1] = r[1] + g[1].left_fn(f);
      }
    return r;
  }
};

CrossedElt project(const Level& L, const Lifted& z) {
  const FiniteQuotient& q = *L->q;
  CrossedElt r(L);
  for (const auto& [m, f] : z.cols) {
    Fn g(L->n(), 0);
    for (int y = 0; y < z.M; ++y) g[tpow(q, y)] = f[y];
    r.add_term(tpow(q, m), g);
  }
  return r;
}

}  // namespace

IntegersResolution integers_dyn_resolution(int M, int N) {
  if (N < 2 || M < N) throw ConfigError("integers_dyn_resolution needs M >= N >= 2");
  IntegersResolution R;
  R.tower = rokhlin_partition(M, N);
  const Level& L = R.tower.level;
  const FiniteQuotient& q = *L->q;
  IntegersModel Z(M, N, R.tower);

  R.ledger.add("rokhlin partition", R.tower.partition_ok);
  bool disjoint = true;
  auto tA = Z.shifted(Z.X[0], N);
  for (int j = 1; j < N; ++j) {
    auto tjB = Z.shifted(Z.X[1], j);
    for (int y = 0; y < M; ++y)
      if ((Z.X[0][y] && tA[y] && tjB[y]) || (Z.X[1][y] && tA[y] && tjB[y])) disjoint = false;
  }
  R.ledger.add("A∩t^N A∩t^j B and B∩t^N A∩t^j B empty", disjoint);
  Fn ones_M(M, 1);
  R.ledger.add("eta(x) = 1", Z.eta(Z.x) == ones_M);
  R.ledger.add("eta o d1 = 0", Z.eta(Z.rows[0]) == Fn(M, 0) && Z.eta(Z.rows[1]) == Fn(M, 0));
  bool ec = true;
  for (int y = 0; y < M; ++y) {
    Fn d(M, 0);
    d[y] = 1;
    ec &= Z.eta(Z.cm1(d)) == d;
  }
  R.ledger.add("eta o c_-1 = id", ec);
  // Generators t^m χ_S with |m| <= W.
  long W = std::min(M, 128) + 2L * N;
  bool dc = true, cd = true;
  for (long m = -W; m <= W; ++m)
    for (int k = 0; k < 2; ++k) {
      LVec g = Z.gen(m, k);
      dc &= Z.d1(Z.c0(g)) == g - Z.cm1(Z.eta(g));
      cd &= Z.c0(Z.d1(g)) == g;
    }
  R.ledger.add("d1 o c0 = id - c_-1 o eta", dc);
  R.ledger.add("c0 o d1 = id", cd);

  MarkedModule Dm{L, {R.tower.A, R.tower.B}};
  MarkedComplex D;
  D.level = L;
  D.modules = {Dm, Dm};
  std::vector<std::vector<CrossedElt>> e(2, std::vector<CrossedElt>(2, CrossedElt(L)));
  for (int k = 0; k < 2; ++k)
    for (int c = 0; c < 2; ++c) e[k][c] = project(L, Z.rows[k][c]);
  D.d.emplace_back(Dm, Dm, e);
  Fn vA(M, 0), vB(M, 0);
  for (int y = 0; y < M; ++y) {
    vA[y] = R.tower.A.has(y);
    vB[y] = R.tower.B.has(y);
  }
  D.eta = Augmentation{{vA, vB}};
  R.x = ModuleVector::zero(Dm);
  R.x.comps[0] = project(L, Z.x[0]);
  R.x.comps[1] = project(L, Z.x[1]);
  R.D = D;
  validate(R.D);
  R.ledger.add("level defects vanish", defect_report(R.D, R.x).strict());
  R.ledger.add("projected d1 keeps its support constraints", R.D.boundary(1).satisfies_constraints());
  Rational dim = (R.tower.A | R.tower.B).measure();
  R.dim_bound = frac(1, N) + frac(M % N, M);
  R.ledger.add("dim D0 = dim D1 = mu(A ∪ B)", D.module(0).dim() == dim && D.module(1).dim() == dim);
  R.ledger.add("dim <= 1/N + (M mod N)/M", dim <= R.dim_bound);
  R.d1_norm = op_norm(R.D.boundary(1));
  R.ledger.add("|d1| <= 2", R.d1_norm <= 2);
  (void)q;
  return R;
}

IntegersEmbedding integers_embedding(int M, int N) {
  IntegersEmbedding E;
  E.res = integers_dyn_resolution(M, N);
  const MarkedComplex& D = E.res.D;
  const Level& L = D.level;
  const FiniteQuotient& q = *L->q;
  const Carrier &A = E.res.tower.A, &B = E.res.tower.B;
  E.C = induce_resolution(resolution_Z(), L);
  const MarkedModule &C0 = E.C.module(0), &C1 = E.C.module(1);
  const MarkedModule &D0 = D.module(0), &D1 = D.module(1);

  MarkedMorphism f0 = MarkedMorphism::from_rows(C0, D0, {E.res.x});
  ModuleVector y1 = ModuleVector::zero(D1);
  y1.comps[0] = CrossedElt::chi(L, A, 0);
  y1.comps[1] = CrossedElt::chi(L, B, 0);
  MarkedMorphism f1 = MarkedMorphism::from_rows(C1, D1, {y1});

  auto single = [&](const CrossedElt& c) {
    ModuleVector v = ModuleVector::zero(C0);
    v.comps[0] = c;
    return v;
  };
  MarkedMorphism r0 = MarkedMorphism::from_rows(D0, C0, {single(CrossedElt::chi(L, A, 0)), single(CrossedElt::chi(L, B, 0))});
  CrossedElt xt(L);
  Carrier tNA = A.translate(q, tpow(q, N));
  for (int j = 0; j < N; ++j) xt += CrossedElt::chi(L, tNA, tpow(q, j));
  xt += CrossedElt::chi(L, B.translate(q, tpow(q, 1)), 0);
  MarkedMorphism r1 = MarkedMorphism::from_rows(D1, C1, {single(xt.left_chi(A)), single(xt.left_chi(B))});
  CrossedElt h(L);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < j; ++k) h += CrossedElt::chi(L, A.translate(q, tpow(q, j)), tpow(q, k), -1);
  E.h0 = MarkedMorphism::from_rows(C0, C1, {single(h)});
  E.f = {f0, f1};
  E.r = {r0, r1};

  auto zero = [](const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
  };
  E.ledger.add("f is a chain map C -> D", zero(check_chain_map(E.f, E.C, D)));
  E.ledger.add("r is a chain map D -> C", zero(check_chain_map(E.r, D, E.C)));
  E.ledger.add("d^C h0 = r0 f0 - id",
               compose(E.C.boundary(1), E.h0) == compose(r0, f0) - MarkedMorphism::identity(C0));
  E.ledger.add("h0 d^C = r1 f1 - id",
               compose(E.h0, E.C.boundary(1)) == compose(r1, f1) - MarkedMorphism::identity(C1));
  E.norm_f0 = op_norm(f0);
  E.norm_f1 = op_norm(f1);
  E.norm_r0 = op_norm(r0);
  E.norm_r1 = op_norm(r1);
  E.norm_h0 = op_norm(E.h0);
  E.ledger.add("|f0|, |f1|, |r0| <= 1", E.norm_f0 <= 1 && E.norm_f1 <= 1 && E.norm_r0 <= 1);
  E.ledger.add("|r1| <= N", E.norm_r1 <= N);
  E.ledger.add("|h0| <= N^2", E.norm_h0 <= static_cast<int64_t>(N) * N);
  return E;
}

int64_t kappa(const std::vector<std::vector<GroupRingElt>>& Lambda) {
  int64_t k = 0;
  for (const auto& row : Lambda)
    for (const auto& x : row) k = std::max(k, x.l1());
  return k;
}

bool Supp1Extension::ok() const { return well_defined && measure <= measure_bound && norm <= norm_bound; }

Supp1Extension supp1_extend(const Level& L, const std::vector<std::vector<GroupRingElt>>& Lambda,
                            const std::vector<Carrier>& targets) {
  int n = L->n();
  MarkedModule cod{L, targets};
  Supp1Extension S;
  S.kappa = kappa(Lambda);
  std::vector<ModuleVector> ys;
  Rational tb = 0;
  for (const auto& B : targets) tb += B.measure();
  for (const auto& row : Lambda) {
    if (row.size() != targets.size()) throw ShapeMismatch("Λ has the wrong number of columns");
    ModuleVector y = ModuleVector::zero(cod);
    for (size_t j = 0; j < row.size(); ++j) y.comps[j] = embed(L, row[j]) * CrossedElt::chi(L, targets[j], 0);
    Carrier a = supp1(y, n);
    S.A.push_back(a);
    S.measure += a.measure();
    ys.push_back(y);
  }
  MarkedModule dom{L, S.A};
  S.well_defined = true;
  for (size_t i = 0; i < ys.size(); ++i) S.well_defined &= ys[i].left_chi(S.A[i]) == ys[i];
  S.f = MarkedMorphism::from_rows(dom, cod, ys);
  S.measure_bound = tb * S.kappa * static_cast<long>(Lambda.size());
  S.norm = op_norm(S.f);
  S.norm_bound = cmul(cmul(S.kappa, S.kappa), static_cast<int64_t>(targets.size()));
  return S;
}

bool ChainExtension::ok() const {
  for (size_t k = 0; k < dim_bound.size(); ++k) {
    int r = static_cast<int>(k) + 2;
    if (D.module(r).dim() > dim_bound[k]) return false;
    if (op_norm(D.boundary(r)) > norm_bound[k]) return false;
  }
  return strict;
}

ChainExtension supp1_chain_extend(const ResolutionData& C, const MarkedComplex& low, int top) {
  if (top < 0) top = C.length();
  if (low.top() < 1 && top >= 1) throw ShapeMismatch("need D_0 and D_1 to extend");
  ChainExtension X;
  X.D = low;
  X.D.modules.resize(std::min(low.top(), 1) + 1);
  X.D.d.resize(std::min(low.top(), 1));
  Rational bound = X.D.top() >= 1 ? X.D.module(1).dim() : Rational(0);
  for (int k = 2; k <= top; ++k) {
    Supp1Extension S = supp1_extend(low.level, C.d(k), X.D.module(k - 1).carriers);
    X.D.modules.push_back(S.f.dom());
    X.D.d.push_back(S.f);
    bound *= S.kappa * C.rank(k);
    X.dim_bound.push_back(bound);
    X.norm_bound.push_back(S.norm_bound);
    X.kappas.push_back(S.kappa);
  }
  validate(X.D);
  DefectReport rep = defect_report(X.D);
  X.strict = std::all_of(rep.delta.begin(), rep.delta.end(), [](const Rational& d) { return d == 0; });
  return X;
}

CheapComplex cheap_complex(const ResolutionData& C, const Level& L, const std::vector<Word>& F,
                           const std::optional<Carrier>& A, int top) {
  if (top < 0) top = C.length();
  if (C.rank(0) != 1) throw ShapeMismatch("cheap_complex expects a rank-one degree 0");
  CheapComplex K;
  K.degree0 = degree0_cheap(L, F, A);
  K.C = induce_resolution(C, L, top);
  int n = L->n();
  MarkedComplex low;
  low.level = L;
  low.modules = {K.degree0.D0};
  low.eta = K.degree0.eta;
  std::vector<ModuleVector> rows;
  std::vector<Carrier> carriers;
  if (top >= 1) {
    for (int s = 0; s < C.rank(1); ++s) {
      ModuleVector y = ModuleVector::zero(K.degree0.D0);
      CrossedElt lam = embed(L, C.d(1)[s][0]);
      for (int c = 0; c < 2; ++c) y.comps[c] = lam * K.degree0.x.comps[c];
      carriers.push_back(supp1(y, n));
      rows.push_back(y);
    }
    low.modules.push_back(MarkedModule{L, carriers});
    low.d.push_back(MarkedMorphism::from_rows(low.modules[1], low.modules[0], rows));
  }
  K.ext = supp1_chain_extend(C, low, top);
  const MarkedComplex& D = K.ext.D;
  K.f.push_back(MarkedMorphism::from_rows(K.C.module(0), D.module(0), {K.degree0.x}));
  for (int r = 1; r <= top; ++r) {
    std::vector<ModuleVector> fr;
    for (int i = 0; i < C.rank(r); ++i) {
      ModuleVector v = ModuleVector::zero(D.module(r));
      v.comps[i] = CrossedElt::chi(L, D.module(r).carriers[i], 0);
      fr.push_back(v);
    }
    K.f.push_back(MarkedMorphism::from_rows(K.C.module(r), D.module(r), fr));
  }
  K.chain_defect = check_chain_map(K.f, K.C, D);
  return K;
}

int cheap_tile(const Rational& eps) {
  if (eps <= 0) throw ConfigError("epsilon must be positive");
  mpz_class c;
  Rational t = 2 / eps;
  mpz_cdiv_q(c.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return std::max(2, static_cast<int>(c.get_si()));
}

bool CheapZ::ok() const {
  bool d = std::all_of(dims.begin(), dims.end(), [&](const Rational& x) { return x < eps; });
  return d && d1_norm <= 2 && res.ledger.all() && degree0_matches;
}

CheapZ cheap_embedding_Z(const Rational& eps, int M) {
  CheapZ Z;
  Z.eps = eps;
  Z.N = cheap_tile(eps);
  Z.M = M;
  if (M < Z.N || !(frac(M % Z.N, M) < eps / 2))
    throw ConfigError("level " + std::to_string(M) + " leaves a remainder too large for epsilon " + eps.get_str());
  Z.res = integers_dyn_resolution(M, Z.N);
  Z.dims = Z.res.D.dims();
  Z.d1_norm = Z.res.d1_norm;
  std::vector<Word> F;
  for (int j = 0; j < Z.N; ++j) F.push_back(Word::gen(0).power(j));
  Degree0Cheap d0 = degree0_cheap(Z.res.tower.level, F, Z.res.tower.A);
  Z.degree0_matches = d0.D0 == Z.res.D.module(0) && d0.x == Z.res.x;
  return Z;
}

}  // namespace torgrad
