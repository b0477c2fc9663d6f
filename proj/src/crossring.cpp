#include "torgrad/crossring.hpp"

#include <algorithm>

#include "torgrad/coeff.hpp"

namespace torgrad {

Level make_level(QuotientPtr q, int64_t p) {
  auto L = std::make_shared<LevelSpace>();
  L->q = std::move(q);
  L->p = p;
  return L;
}

bool same_level(const Level& a, const Level& b) {
  return a && b && (a == b || (a->q == b->q && a->p == b->p));
}

static void check_level(const Level& a, const Level& b) {
  if (!same_level(a, b)) throw LevelMismatch();
}

Carrier Carrier::full(int n) {
  Carrier c(n);
  std::fill(c.bits_.begin(), c.bits_.end(), 1);
  return c;
}

Carrier Carrier::of(int n, const std::vector<int>& points) {
  Carrier c(n);
  for (int x : points) {
    if (x < 0 || x >= n) throw ShapeMismatch("carrier point out of range");
    c.bits_[x] = 1;
  }
  return c;
}

int Carrier::count() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

std::vector<int> Carrier::points() const {
  std::vector<int> p;
  for (int x = 0; x < n(); ++x)
    if (bits_[x]) p.push_back(x);
  return p;
}

#define CARRIER_OP(op, expr)                                                   \
  Carrier Carrier::operator op(const Carrier& o) const {                       \
    if (o.n() != n()) throw ShapeMismatch("carrier size mismatch");            \
    Carrier c(n());                                                            \
    for (int x = 0; x < n(); ++x) {                                            \
      bool a = bits_[x], b = o.bits_[x];                                       \
      c.bits_[x] = (expr) ? 1 : 0;                                             \
    }                                                                          \
    return c;                                                                  \
  }
CARRIER_OP(&, a && b)
CARRIER_OP(|, a || b)
CARRIER_OP(-, a && !b)
CARRIER_OP(^, a != b)
#undef CARRIER_OP

bool Carrier::subset_of(const Carrier& o) const {
  for (int x = 0; x < n(); ++x)
    if (bits_[x] && !o.bits_[x]) return false;
  return true;
}

Carrier Carrier::translate(const FiniteQuotient& q, int g) const {
  Carrier c(n());
  for (int x = 0; x < n(); ++x)
    if (bits_[x]) c.bits_[q.mul(g, x)] = 1;
  return c;
}

CrossedElt CrossedElt::chi(const Level& L, const Carrier& A, int g, int64_t c) {
  CrossedElt z(L);
  Fn f(L->n(), 0);
  for (int x = 0; x < L->n(); ++x)
    if (A.has(x)) f[x] = cnorm(c, L->p);
  z.add_term(g, f);
  return z;
}

CrossedElt CrossedElt::term(const Level& L, int g, const Fn& f) {
  CrossedElt z(L);
  z.add_term(g, f);
  return z;
}

int64_t CrossedElt::at(int g, int x) const {
  auto it = cols_.find(g);
  return it == cols_.end() ? 0 : it->second[x];
}

void CrossedElt::prune(int g) {
  auto it = cols_.find(g);
  if (it == cols_.end()) return;
  for (int64_t v : it->second)
    if (v) return;
  cols_.erase(it);
}

void CrossedElt::add_at(int g, int x, int64_t c) {
  if (!c) return;
  int64_t p = L_->p;
  auto [it, fresh] = cols_.try_emplace(g, Fn(L_->n(), 0));
  it->second[x] = cnorm(cadd(it->second[x], c, p), p);
  if (!it->second[x]) prune(g);
}

void CrossedElt::add_term(int g, const Fn& f, int64_t scale) {
  int64_t p = L_->p;
  auto [it, fresh] = cols_.try_emplace(g, Fn(L_->n(), 0));
  for (int x = 0; x < L_->n(); ++x)
    if (f[x]) it->second[x] = cnorm(cadd(it->second[x], cmul(f[x], scale, p), p), p);
  prune(g);
}

CrossedElt& CrossedElt::operator+=(const CrossedElt& o) {
  if (!L_) L_ = o.L_;
  check_level(L_, o.L_);
  for (const auto& [g, f] : o.cols_) add_term(g, f);
  return *this;
}

CrossedElt CrossedElt::operator+(const CrossedElt& o) const {
  CrossedElt r = *this;
  r += o;
  return r;
}

CrossedElt CrossedElt::operator-(const CrossedElt& o) const { return *this + o.scaled(-1); }

CrossedElt CrossedElt::scaled(int64_t c) const {
  CrossedElt r(L_);
  for (const auto& [g, f] : cols_) r.add_term(g, f, c);
  return r;
}

CrossedElt CrossedElt::left_fn(const Fn& h) const {
  CrossedElt r(L_);
  int64_t p = L_->p;
  for (const auto& [g, f] : cols_) {
    Fn v(L_->n(), 0);
    for (int x = 0; x < L_->n(); ++x) v[x] = cmul(f[x], h[x], p);
    r.add_term(g, v);
  }
  return r;
}

CrossedElt CrossedElt::left_chi(const Carrier& C) const {
  CrossedElt r(L_);
  for (const auto& [g, f] : cols_) {
    Fn v(L_->n(), 0);
    for (int x = 0; x < L_->n(); ++x)
      if (C.has(x)) v[x] = f[x];
    r.add_term(g, v);
  }
  return r;
}

CrossedElt CrossedElt::right_chi(const Carrier& C) const {
  CrossedElt r(L_);
  const FiniteQuotient& q = *L_->q;
  for (const auto& [g, f] : cols_) {
    Fn v(L_->n(), 0);
    for (int x = 0; x < L_->n(); ++x)
      if (f[x] && C.has(q.mul(q.inv(g), x))) v[x] = f[x];
    r.add_term(g, v);
  }
  return r;
}

CrossedElt celt_mul(const CrossedElt& x, const CrossedElt& y) {
  check_level(x.level(), y.level());
  const Level& L = x.level();
  const FiniteQuotient& q = *L->q;
  int n = L->n();
  int64_t p = L->p;
  std::map<int, Fn> acc;
  for (const auto& [g, f] : x.columns()) {
    int gi = q.inv(g);
    std::vector<int> shift(n);
    for (int u = 0; u < n; ++u) shift[u] = q.mul(gi, u);
    for (const auto& [k, h] : y.columns()) {
      auto [it, fresh] = acc.try_emplace(q.mul(g, k), Fn(n, 0));
      Fn& out = it->second;
      for (int u = 0; u < n; ++u) {
        if (!f[u]) continue;
        int64_t hv = h[shift[u]];
        if (hv) out[u] = cadd(out[u], cmul(f[u], hv, p), p);
      }
    }
  }
  CrossedElt r(L);
  for (auto& [g, f] : acc) r.add_term(g, f);
  return r;
}

CrossedElt embed(const Level& L, const GroupRingElt& x) {
  CrossedElt z(L);
  Carrier all = Carrier::full(L->n());
  for (const auto& [w, c] : x.terms()) z += CrossedElt::chi(L, all, L->q->evaluate(w), c);
  return z;
}

CeltStats celt_stats(const CrossedElt& z) {
  CeltStats s;
  const Level& L = z.level();
  int n = L ? L->n() : 0;
  s.supp1 = Carrier(n);
  if (!L) return s;
  int64_t p = L->p;
  const FiniteQuotient& q = *L->q;
  int64_t total = 0;
  std::vector<int> n1(n, 0), n2(n, 0);
  for (const auto& [g, f] : z.columns()) {
    for (int x = 0; x < n; ++x) {
      if (!f[x]) continue;
      int64_t a = cabs(f[x], p);
      total = cadd(total, a);
      s.linf = std::max(s.linf, a);
      s.supp1.set(x);
      n2[x]++;
      n1[q.mul(q.inv(g), x)]++;  // x = g y
    }
  }
  s.l1 = frac(total, n);
  s.l1.canonicalize();
  for (int x = 0; x < n; ++x) {
    s.N1 = std::max(s.N1, n1[x]);
    s.N2 = std::max(s.N2, n2[x]);
  }
  s.size1 = s.supp1.measure();
  return s;
}

Carrier supp1(const CrossedElt& z) { return celt_stats(z).supp1; }
Rational l1_norm(const CrossedElt& z) { return celt_stats(z).l1; }

Rational MarkedModule::dim() const {
  Rational d = 0;
  for (const auto& c : carriers) d += c.measure();
  return d;
}

bool MarkedModule::operator==(const MarkedModule& o) const {
  return same_level(level, o.level) && carriers == o.carriers;
}

MarkedModule full_module(const Level& L, int rank) {
  return {L, std::vector<Carrier>(rank, Carrier::full(L->n()))};
}

ModuleVector ModuleVector::zero(const MarkedModule& M) {
  ModuleVector z;
  z.comps.assign(M.rank(), CrossedElt(M.level));
  return z;
}

ModuleVector ModuleVector::basis(const MarkedModule& M, int i) {
  ModuleVector z = zero(M);
  z.comps[i] = CrossedElt::chi(M.level, M.carriers[i], 0);
  return z;
}

bool ModuleVector::is_zero() const {
  for (const auto& c : comps)
    if (!c.is_zero()) return false;
  return true;
}

ModuleVector ModuleVector::operator+(const ModuleVector& o) const {
  if (o.rank() != rank()) throw ShapeMismatch("vector rank mismatch");
  ModuleVector r = *this;
  for (int i = 0; i < rank(); ++i) r.comps[i] += o.comps[i];
  return r;
}

ModuleVector ModuleVector::operator-(const ModuleVector& o) const {
  if (o.rank() != rank()) throw ShapeMismatch("vector rank mismatch");
  ModuleVector r = *this;
  for (int i = 0; i < rank(); ++i) r.comps[i] += o.comps[i].scaled(-1);
  return r;
}

ModuleVector ModuleVector::left_chi(const Carrier& C) const {
  ModuleVector r = *this;
  for (auto& c : r.comps) c = c.left_chi(C);
  return r;
}

Rational l1_norm(const ModuleVector& z) {
  Rational s = 0;
  for (const auto& c : z.comps) s += l1_norm(c);
  return s;
}

int64_t linf_norm(const ModuleVector& z) {
  int64_t m = 0;
  for (const auto& c : z.comps) m = std::max(m, celt_stats(c).linf);
  return m;
}

int N1(const ModuleVector& z) {
  int s = 0;
  for (const auto& c : z.comps) s += celt_stats(c).N1;
  return s;
}

int N2(const ModuleVector& z) {
  int s = 0;
  for (const auto& c : z.comps) s += celt_stats(c).N2;
  return s;
}

Carrier supp1(const ModuleVector& z, int n) {
  Carrier s(n);
  for (const auto& c : z.comps)
    if (!c.is_zero()) s = s | supp1(c);
  return s;
}

Rational size1(const ModuleVector& z, int n) { return supp1(z, n).measure(); }

bool in_module(const MarkedModule& M, const ModuleVector& z) {
  if (z.rank() != M.rank()) return false;
  const FiniteQuotient& q = *M.level->q;
  for (int i = 0; i < M.rank(); ++i)
    for (const auto& [g, f] : z.comps[i].columns()) {
      Carrier gA = M.carriers[i].translate(q, g);
      for (int x = 0; x < M.level->n(); ++x)
        if (f[x] && !gA.has(x)) return false;
    }
  return true;
}

CrossedElt normalize_entry(const CrossedElt& x, const Carrier& A, const Carrier& B) {
  return x.left_chi(A).right_chi(B);
}

MarkedMorphism::MarkedMorphism(MarkedModule dom, MarkedModule cod, std::vector<std::vector<CrossedElt>> entries)
    : dom_(std::move(dom)), cod_(std::move(cod)), e_(std::move(entries)) {
  check_level(dom_.level, cod_.level);
  if (static_cast<int>(e_.size()) != dom_.rank()) throw ShapeMismatch("morphism row count");
  for (int i = 0; i < dom_.rank(); ++i) {
    if (static_cast<int>(e_[i].size()) != cod_.rank()) throw ShapeMismatch("morphism column count");
    for (int j = 0; j < cod_.rank(); ++j) {
      if (!e_[i][j].level()) e_[i][j] = CrossedElt(dom_.level);
      check_level(e_[i][j].level(), dom_.level);
      e_[i][j] = normalize_entry(e_[i][j], dom_.carriers[i], cod_.carriers[j]);
    }
  }
}

MarkedMorphism MarkedMorphism::zero(const MarkedModule& dom, const MarkedModule& cod) {
  return MarkedMorphism(dom, cod,
                        std::vector<std::vector<CrossedElt>>(dom.rank(), std::vector<CrossedElt>(cod.rank(), CrossedElt(dom.level))));
}

MarkedMorphism MarkedMorphism::identity(const MarkedModule& M) {
  std::vector<int> sigma(M.rank());
  for (int i = 0; i < M.rank(); ++i) sigma[i] = i;
  return marked_inclusion(M, M, sigma);
}

MarkedMorphism MarkedMorphism::from_rows(const MarkedModule& dom, const MarkedModule& cod,
                                         const std::vector<ModuleVector>& rows) {
  if (static_cast<int>(rows.size()) != dom.rank()) throw ShapeMismatch("row count");
  std::vector<std::vector<CrossedElt>> e;
  for (const auto& r : rows) {
    if (r.rank() != cod.rank()) throw ShapeMismatch("row width");
    e.push_back(r.comps);
  }
  return MarkedMorphism(dom, cod, e);
}

ModuleVector MarkedMorphism::row(int i) const {
  ModuleVector z;
  z.comps = e_[i];
  return z;
}

MarkedMorphism MarkedMorphism::operator+(const MarkedMorphism& o) const {
  if (!(dom_ == o.dom_) || !(cod_ == o.cod_)) throw ShapeMismatch("morphism sum needs equal shapes");
  auto e = e_;
  for (int i = 0; i < dom_.rank(); ++i)
    for (int j = 0; j < cod_.rank(); ++j) e[i][j] += o.e_[i][j];
  return MarkedMorphism(dom_, cod_, e);
}

MarkedMorphism MarkedMorphism::operator-() const {
  auto e = e_;
  for (auto& r : e)
    for (auto& x : r) x = x.scaled(-1);
  return MarkedMorphism(dom_, cod_, e);
}

MarkedMorphism MarkedMorphism::operator-(const MarkedMorphism& o) const { return *this + (-o); }

bool MarkedMorphism::operator==(const MarkedMorphism& o) const {
  return dom_ == o.dom_ && cod_ == o.cod_ && e_ == o.e_;
}

bool MarkedMorphism::satisfies_constraints() const {
  for (int i = 0; i < dom_.rank(); ++i)
    for (int j = 0; j < cod_.rank(); ++j)
      if (!(normalize_entry(e_[i][j], dom_.carriers[i], cod_.carriers[j]) == e_[i][j])) return false;
  return true;
}

ModuleVector morphism_apply(const MarkedMorphism& f, const ModuleVector& z) {
  if (z.rank() != f.dom().rank()) throw ShapeMismatch("vector not in the domain");
  ModuleVector out = ModuleVector::zero(f.cod());
  for (int i = 0; i < f.dom().rank(); ++i) {
    if (z.comps[i].is_zero()) continue;
    for (int j = 0; j < f.cod().rank(); ++j)
      if (!f.entry(i, j).is_zero()) out.comps[j] += z.comps[i] * f.entry(i, j);
  }
  return out;
}

MarkedMorphism compose(const MarkedMorphism& g, const MarkedMorphism& f) {
  if (!(f.cod() == g.dom())) throw ShapeMismatch("composition needs cod(f) = dom(g)");
  std::vector<ModuleVector> rows;
  for (int i = 0; i < f.dom().rank(); ++i) rows.push_back(morphism_apply(g, f.row(i)));
  return MarkedMorphism::from_rows(f.dom(), g.cod(), rows);
}

int64_t row_norm(const MarkedMorphism& f, int i, int u) {
  int64_t p = f.level()->p, s = 0;
  for (int j = 0; j < f.cod().rank(); ++j)
    for (const auto& [g, v] : f.entry(i, j).columns()) s = cadd(s, cabs(v[u], p));
  return s;
}

int64_t op_norm(const MarkedMorphism& f) {
  int64_t m = 0;
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int u : f.dom().carriers[i].points()) m = std::max(m, row_norm(f, i, u));
  return m;
}

MorphismStats morphism_stats(const MarkedMorphism& f) {
  MorphismStats s;
  int n = f.level()->n();
  for (int i = 0; i < f.dom().rank(); ++i) {
    int r1 = 0, r2 = 0;
    Carrier rs(n);
    for (int j = 0; j < f.cod().rank(); ++j) {
      CeltStats c = celt_stats(f.entry(i, j));
      s.infty_norm = std::max(s.infty_norm, c.linf);
      r1 += c.N1;
      r2 += c.N2;
      rs = rs | c.supp1;
    }
    s.N1 += r1;
    s.N1_underline = std::max(s.N1_underline, r1);
    s.N2_underline = std::max(s.N2_underline, r2);
    s.size1 += rs.measure();
  }
  s.K_f = cmul(s.N2_underline, s.infty_norm);
  return s;
}

Rational size1(const MarkedMorphism& f) {
  Rational s = 0;
  for (int i = 0; i < f.dom().rank(); ++i) s += size1(f.row(i), f.level()->n());
  return s;
}

AlmostEq almost_eq(const MarkedMorphism& f, const MarkedMorphism& g) {
  MarkedMorphism d = f - g;
  return {size1(d), op_norm(d)};
}

MarkedMorphism marked_inclusion(const MarkedModule& src, const MarkedModule& dst, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != src.rank()) throw ShapeMismatch("inclusion assignment size");
  std::vector<char> used(dst.rank(), 0);
  auto M = MarkedMorphism::zero(src, dst);
  std::vector<std::vector<CrossedElt>> e = M.entries();
  for (int i = 0; i < src.rank(); ++i) {
    int k = sigma[i];
    if (k < 0 || k >= dst.rank() || used[k]) throw ShapeMismatch("inclusion assignment not injective");
    used[k] = 1;
    if (!src.carriers[i].subset_of(dst.carriers[k])) throw ShapeMismatch("inclusion violates carrier containment");
    e[i][k] = CrossedElt::chi(src.level, src.carriers[i], 0);
  }
  return MarkedMorphism(src, dst, e);
}

MarkedMorphism marked_projection(const MarkedModule& src, const MarkedModule& dst, const std::vector<int>& tau) {
  if (static_cast<int>(tau.size()) != dst.rank()) throw ShapeMismatch("projection assignment size");
  std::vector<char> used(src.rank(), 0);
  auto e = MarkedMorphism::zero(src, dst).entries();
  for (int j = 0; j < dst.rank(); ++j) {
    int i = tau[j];
    if (i < 0 || i >= src.rank() || used[i]) throw ShapeMismatch("projection assignment not injective");
    used[i] = 1;
    if (!dst.carriers[j].subset_of(src.carriers[i])) throw ShapeMismatch("projection violates carrier containment");
    e[i][j] = CrossedElt::chi(src.level, dst.carriers[j], 0);
  }
  return MarkedMorphism(src, dst, e);
}

std::vector<Carrier> image_carriers(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  int n = f.level()->n();
  std::vector<Carrier> B(f.cod().rank(), Carrier(n));
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int j = 0; j < f.cod().rank(); ++j)
      for (const auto& [g, v] : f.entry(i, j).columns()) {
        int gi = q.inv(g);
        for (int x = 0; x < n; ++x)
          if (v[x]) B[j].set(q.mul(gi, x));
      }
  return B;
}

Rational marked_rank(const MarkedMorphism& f) {
  Rational r = 0;
  for (const auto& c : image_carriers(f)) r += c.measure();
  return r;
}

MarkedMorphism restrict_domain(const MarkedMorphism& f, const std::vector<Carrier>& pieces) {
  if (static_cast<int>(pieces.size()) != f.dom().rank()) throw ShapeMismatch("restriction needs one piece per summand");
  MarkedModule dom{f.level(), pieces};
  for (int i = 0; i < dom.rank(); ++i)
    if (!pieces[i].subset_of(f.dom().carriers[i])) throw ShapeMismatch("restriction outside the domain");
  return MarkedMorphism(dom, f.cod(), f.entries());
}

}  // namespace torgrad
