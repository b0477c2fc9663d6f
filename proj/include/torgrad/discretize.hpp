#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "torgrad/complexes.hpp"
#include "torgrad/resolution.hpp"

namespace torgrad {

// Sparse integer matrix acting on column vectors.
struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<std::map<int, int64_t>> data;  // data[r][c]

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), data(r) {}
  static IntMatrix dense(const std::vector<std::vector<int64_t>>& a, int cols = -1);
  static IntMatrix identity(int n);

  void add(int r, int c, int64_t v);
  int64_t at(int r, int c) const;
  bool is_zero() const;
  size_t nnz() const;
  std::vector<int64_t> column_l1() const;
  int64_t column_l1_max() const;
  IntMatrix transpose() const;
  bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

// Basis of the coinvariants of a marked module: (summand, point) pairs.
struct CoinvBasis {
  std::vector<std::pair<int, int>> elems;
  std::map<std::pair<int, int>, int> index;
  int rank() const { return static_cast<int>(elems.size()); }
};

CoinvBasis coinvariants_module(const MarkedModule& M);
// Rows: codomain basis (j,v); columns: domain basis (i,u); entry sum_{g : g^-1 u = v} f_g^{ij}(u).
IntMatrix coinvariants_matrix(const MarkedMorphism& f);

// Boundary d[r-1] = ∂_r : C_r -> C_{r-1}.
struct ZComplex {
  std::vector<int> ranks;
  std::vector<IntMatrix> d;
  int top() const { return static_cast<int>(ranks.size()) - 1; }
  bool is_complex() const;
};

ZComplex coinvariants_complex(const MarkedComplex& D);
ZComplex shapiro_complex(const ResolutionData& C, const FiniteQuotient& q, int top = -1);

struct SNF {
  std::vector<mpz_class> factors;  // nonzero invariant factors d_1 | d_2 | ...
  int rank() const { return static_cast<int>(factors.size()); }
  std::vector<mpz_class> torsion() const;  // the factors > 1
};

SNF smith_normal_form(const IntMatrix& A);
double log_of(const mpz_class& z);
double log_torsion(const std::vector<mpz_class>& t);

struct HomologyResult {
  int degree = 0;
  int betti_q = 0;
  std::vector<mpz_class> torsion;
  double logtors = 0;
};

enum class TorsionRoute { automatic, kernel, cokernel };

HomologyResult homology(const ZComplex& C, int n, TorsionRoute route = TorsionRoute::automatic);
// Torsion of ker ∂_n / im ∂_{n+1} through a saturated kernel basis.
std::vector<mpz_class> torsion_by_kernel(const ZComplex& C, int n);
std::vector<mpz_class> cokernel_torsion(const IntMatrix& A);
int rank_mod_p(const IntMatrix& A, int64_t p);
int betti_mod_p(const ZComplex& C, int n, int64_t p);

struct RetractReport {
  int degree = 0;
  int order = 0;
  int betti = 0;
  Rational dim_bound;            // |G| dim(D_n)
  double logtors = 0;
  double logtors_bound = 0;      // log#tors(D_n(i)_Γ / im ∂_{n+1}(i)_Γ)
  bool betti_ok = false, torsion_ok = false;
  bool ok() const { return betti_ok && torsion_ok; }
};

RetractReport retract_inequality_check(const ResolutionData& C, const MarkedComplex& D, const FiniteQuotient& q, int n);
RetractReport retract_inequality_check(const ZComplex& shapiro, const MarkedComplex& D, int n);

}  // namespace torgrad
