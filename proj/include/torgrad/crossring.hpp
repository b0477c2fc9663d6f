#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "torgrad/groups.hpp"

namespace torgrad {

using Rational = mpq_class;

// a/b in lowest terms.
inline Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

struct LevelMismatch : std::logic_error {
  LevelMismatch() : std::logic_error("operands live on different levels") {}
};

struct ShapeMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

// X = G with left multiplication, uniform measure; p == 0 for integer coefficients.
struct LevelSpace {
  QuotientPtr q;
  int64_t p = 0;
  int n() const { return q->order(); }
};

using Level = std::shared_ptr<const LevelSpace>;

Level make_level(QuotientPtr q, int64_t p = 0);
bool same_level(const Level& a, const Level& b);

class Carrier {
 public:
  Carrier() = default;
  explicit Carrier(int n) : bits_(n, 0) {}
  static Carrier full(int n);
  static Carrier of(int n, const std::vector<int>& points);

  int n() const { return static_cast<int>(bits_.size()); }
  bool has(int x) const { return bits_[x] != 0; }
  void set(int x, bool v = true) { bits_[x] = v ? 1 : 0; }
  int count() const;
  bool empty() const { return count() == 0; }
  std::vector<int> points() const;
  Rational measure() const { return frac(count(), n()); }

  Carrier operator&(const Carrier& o) const;
  Carrier operator|(const Carrier& o) const;
  Carrier operator-(const Carrier& o) const;
  Carrier operator^(const Carrier& o) const;
  bool subset_of(const Carrier& o) const;
  // g * A
  Carrier translate(const FiniteQuotient& q, int g) const;
  bool operator==(const Carrier& o) const { return bits_ == o.bits_; }

 private:
  std::vector<char> bits_;
};

using Fn = std::vector<int64_t>;  // a function G -> Z (or Z/p)

// z = sum_g (f_g, g); multiplication (f,g)(h,k) = (f * (g.h), gk) with (g.h)(x) = h(g^-1 x).
class CrossedElt {
 public:
  CrossedElt() = default;
  explicit CrossedElt(Level L) : L_(std::move(L)) {}
  static CrossedElt chi(const Level& L, const Carrier& A, int g, int64_t c = 1);
  static CrossedElt one(const Level& L) { return chi(L, Carrier::full(L->n()), 0); }
  static CrossedElt term(const Level& L, int g, const Fn& f);

  const Level& level() const { return L_; }
  const std::map<int, Fn>& columns() const { return cols_; }
  bool is_zero() const { return cols_.empty(); }
  int64_t at(int g, int x) const;

  void add_at(int g, int x, int64_t c);
  void add_term(int g, const Fn& f, int64_t scale = 1);

  CrossedElt operator+(const CrossedElt& o) const;
  CrossedElt operator-(const CrossedElt& o) const;
  CrossedElt operator-() const { return scaled(-1); }
  CrossedElt scaled(int64_t c) const;
  CrossedElt& operator+=(const CrossedElt& o);
  bool operator==(const CrossedElt& o) const { return cols_ == o.cols_; }

  // chi_C * z
  CrossedElt left_chi(const Carrier& C) const;
  // z * chi_C
  CrossedElt right_chi(const Carrier& C) const;
  CrossedElt left_fn(const Fn& h) const;

 private:
  void prune(int g);
  Level L_;
  std::map<int, Fn> cols_;
};

CrossedElt celt_mul(const CrossedElt& x, const CrossedElt& y);
inline CrossedElt operator*(const CrossedElt& x, const CrossedElt& y) { return celt_mul(x, y); }

// Image of a group ring element at the level: sum a_w (chi_G, w).
CrossedElt embed(const Level& L, const GroupRingElt& x);

struct CeltStats {
  Rational l1;
  int64_t linf = 0;
  int N1 = 0;
  int N2 = 0;
  Carrier supp1;
  Rational size1;
};

CeltStats celt_stats(const CrossedElt& z);
Carrier supp1(const CrossedElt& z);
Rational l1_norm(const CrossedElt& z);

struct MarkedModule {
  Level level;
  std::vector<Carrier> carriers;
  int rank() const { return static_cast<int>(carriers.size()); }
  Rational dim() const;
  bool operator==(const MarkedModule& o) const;
};

MarkedModule full_module(const Level& L, int rank);

struct ModuleVector {
  std::vector<CrossedElt> comps;
  static ModuleVector zero(const MarkedModule& M);
  static ModuleVector basis(const MarkedModule& M, int i);
  int rank() const { return static_cast<int>(comps.size()); }
  bool is_zero() const;
  ModuleVector operator+(const ModuleVector& o) const;
  ModuleVector operator-(const ModuleVector& o) const;
  bool operator==(const ModuleVector& o) const { return comps == o.comps; }
  ModuleVector left_chi(const Carrier& C) const;
};

Rational l1_norm(const ModuleVector& z);
int64_t linf_norm(const ModuleVector& z);
int N1(const ModuleVector& z);
int N2(const ModuleVector& z);
Carrier supp1(const ModuleVector& z, int n);
Rational size1(const ModuleVector& z, int n);
bool in_module(const MarkedModule& M, const ModuleVector& z);

// entries[i][j]: image of chi_{A_i} e_i in codomain summand j; f(z)_j = sum_i z_i * entries[i][j].
class MarkedMorphism {
 public:
  MarkedMorphism() = default;
  MarkedMorphism(MarkedModule dom, MarkedModule cod, std::vector<std::vector<CrossedElt>> entries);
  static MarkedMorphism zero(const MarkedModule& dom, const MarkedModule& cod);
  static MarkedMorphism identity(const MarkedModule& M);
  static MarkedMorphism from_rows(const MarkedModule& dom, const MarkedModule& cod,
                                  const std::vector<ModuleVector>& rows);

  const MarkedModule& dom() const { return dom_; }
  const MarkedModule& cod() const { return cod_; }
  const CrossedElt& entry(int i, int j) const { return e_[i][j]; }
  const std::vector<std::vector<CrossedElt>>& entries() const { return e_; }
  ModuleVector row(int i) const;
  const Level& level() const { return dom_.level; }

  MarkedMorphism operator+(const MarkedMorphism& o) const;
  MarkedMorphism operator-(const MarkedMorphism& o) const;
  MarkedMorphism operator-() const;
  bool operator==(const MarkedMorphism& o) const;
  bool satisfies_constraints() const;

 private:
  MarkedModule dom_, cod_;
  std::vector<std::vector<CrossedElt>> e_;
};

// Restrict x to the support constraint A x gB.
CrossedElt normalize_entry(const CrossedElt& x, const Carrier& A, const Carrier& B);

ModuleVector morphism_apply(const MarkedMorphism& f, const ModuleVector& z);
// (g o f): first f, then g.
MarkedMorphism compose(const MarkedMorphism& g, const MarkedMorphism& f);

// Local row norm at atom (i,u): sum_j sum_g |f_g^{ij}(u)|.
int64_t row_norm(const MarkedMorphism& f, int i, int u);
int64_t op_norm(const MarkedMorphism& f);

struct MorphismStats {
  int64_t infty_norm = 0;
  int N1 = 0;
  int N1_underline = 0;
  int N2_underline = 0;
  Rational size1;
  int64_t K_f = 0;
};

MorphismStats morphism_stats(const MarkedMorphism& f);
Rational size1(const MarkedMorphism& f);

struct AlmostEq {
  Rational delta_min;
  int64_t norm_on_difference = 0;
  bool holds(const Rational& delta, int64_t K) const { return delta_min < delta && norm_on_difference <= K; }
};

AlmostEq almost_eq(const MarkedMorphism& f, const MarkedMorphism& g);

// sigma[i] = target summand of source summand i (inclusion), tau[j] = source summand of target summand j (projection).
MarkedMorphism marked_inclusion(const MarkedModule& src, const MarkedModule& dst, const std::vector<int>& sigma);
MarkedMorphism marked_projection(const MarkedModule& src, const MarkedModule& dst, const std::vector<int>& tau);

std::vector<Carrier> image_carriers(const MarkedMorphism& f);
Rational marked_rank(const MarkedMorphism& f);

// Restrict f to sub-carriers of its domain.
MarkedMorphism restrict_domain(const MarkedMorphism& f, const std::vector<Carrier>& pieces);

}  // namespace torgrad
