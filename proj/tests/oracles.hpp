#pragma once

// Slow reference computations written independently of the library internals.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "torgrad/constructions.hpp"
#include "torgrad/discretize.hpp"

namespace oracle {

using namespace torgrad;
using Dense = std::vector<std::vector<long long>>;  // a[g][x]
using ZMat = std::vector<std::vector<mpz_class>>;   // rows x cols

inline Dense dense(const CrossedElt& z, int n) {
  Dense a(n, std::vector<long long>(n, 0));
  for (const auto& [g, f] : z.columns())
    for (int x = 0; x < n; ++x) a[g][x] = f[x];
  return a;
}

// (f,g)(h,k) = (f · h(g^-1 ·), gk), coordinatewise on the finite space.
inline Dense mul(const FiniteQuotient& q, const Dense& a, const Dense& b) {
  int n = q.order();
  Dense c(n, std::vector<long long>(n, 0));
  for (int g = 0; g < n; ++g)
    for (int k = 0; k < n; ++k)
      for (int x = 0; x < n; ++x) {
        long long v = a[g][x];
        if (!v) continue;
        c[q.mul(g, k)][x] += v * b[k][q.mul(q.inv(g), x)];
      }
  return c;
}

inline long long l1_times_n(const Dense& a) {
  long long s = 0;
  for (const auto& col : a)
    for (long long v : col) s += v < 0 ? -v : v;
  return s;
}

// max over atoms (i,u) of |(δ_u,e)·row_i|_1 / |(δ_u,e)|_1.
inline long long atom_norm(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  int n = q.order();
  long long best = 0;
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int u : f.dom().carriers[i].points()) {
      Dense d(n, std::vector<long long>(n, 0));
      d[0][u] = 1;
      long long s = 0;
      for (int j = 0; j < f.cod().rank(); ++j) s += l1_times_n(mul(q, d, dense(f.entry(i, j), n)));
      best = std::max(best, s);
    }
  return best;
}

inline ZMat to_z(const IntMatrix& A) {
  ZMat m(A.rows, std::vector<mpz_class>(A.cols, 0));
  for (int r = 0; r < A.rows; ++r)
    for (const auto& [c, v] : A.data[r]) m[r][c] = static_cast<long>(v);
  return m;
}

inline int rank_q(ZMat m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a[r][c] = m[r][c];
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) p = r;
    if (p < 0) continue;
    std::swap(a[p], a[rank]);
    for (int r = 0; r < rows; ++r)
      if (r != rank && a[r][c] != 0) {
        mpq_class f = a[r][c] / a[rank][c];
        for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
      }
    ++rank;
  }
  return rank;
}

inline int rank_p(const ZMat& m, long p) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<std::vector<long>> a(rows, std::vector<long>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      mpz_class v = m[r][c] % p;
      if (v < 0) v += p;
      a[r][c] = v.get_si();
    }
  auto inv = [p](long x) {
    long r = 1, b = x, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c]) piv = r;
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    long iv = inv(a[rank][c]);
    for (int r = 0; r < rows; ++r)
      if (r != rank && a[r][c]) {
        long f = a[r][c] * iv % p;
        for (int k = c; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
      }
    ++rank;
  }
  return rank;
}

// Bareiss fraction-free elimination.
inline mpz_class det(ZMat m) {
  int k = static_cast<int>(m.size());
  mpz_class sign = 1, prev = 1;
  for (int i = 0; i < k; ++i) {
    int p = i;
    while (p < k && m[p][i] == 0) ++p;
    if (p == k) return 0;
    if (p != i) {
      std::swap(m[p], m[i]);
      sign = -sign;
    }
    for (int r = i + 1; r < k; ++r) {
      for (int c = i + 1; c < k; ++c) m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
      m[r][i] = 0;
    }
    prev = m[i][i];
  }
  return k ? mpz_class(sign * m[k - 1][k - 1]) : mpz_class(1);
}

inline void subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1}, D_k = gcd of k x k minors.
inline std::vector<mpz_class> invariant_factors(const ZMat& m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<mpz_class> D{1};
  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<int>> rs, cs;
    subsets(rows, k, rs);
    subsets(cols, k, cs);
    mpz_class g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        ZMat sub(k, std::vector<mpz_class>(k));
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) sub[a][b] = m[r[a]][c[b]];
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) break;
    D.push_back(g);
  }
  std::vector<mpz_class> f;
  for (size_t k = 1; k < D.size(); ++k) f.push_back(D[k] / D[k - 1]);
  return f;
}

// ℤ[G] ⊗ C with the element w acting on the basis by right multiplication u -> u w.
inline ZMat shapiro_dense(const ResolutionData& C, const FiniteQuotient& q, int r) {
  int n = q.order();
  ZMat m(C.rank(r - 1) * n, std::vector<mpz_class>(C.rank(r) * n, 0));
  for (int i = 0; i < C.rank(r); ++i)
    for (int j = 0; j < C.rank(r - 1); ++j)
      for (const auto& [w, a] : C.d(r)[i][j].terms()) {
        int g = q.evaluate(w);
        for (int u = 0; u < n; ++u) m[j * n + q.mul(u, g)][i * n + u] += static_cast<long>(a);
      }
  return m;
}

inline int betti(const ResolutionData& C, const FiniteQuotient& q, int k) {
  int n = q.order();
  if (k < 0 || k > C.length()) return 0;
  int b = C.rank(k) * n;
  if (k >= 1) b -= rank_q(shapiro_dense(C, q, k));
  if (k + 1 <= C.length()) b -= rank_q(shapiro_dense(C, q, k + 1));
  return b;
}

// Closure of a set of permutations under composition.
inline int permutation_group_order(const std::vector<std::vector<int>>& gens) {
  size_t m = gens.at(0).size();
  std::vector<int> id(m);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> seen{id};
  for (size_t k = 0; k < seen.size(); ++k)
    for (const auto& g : gens) {
      std::vector<int> c(m);
      for (size_t x = 0; x < m; ++x) c[x] = g[seen[k][x]];
      if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
    }
  return static_cast<int>(seen.size());
}

inline double log_plus(double x) { return x > 1 ? std::log(x) : 0.0; }

// Indices whose vectors (rows of m, or columns when by_column) extend the rank, scanned in order.
inline std::vector<int> independent(const ZMat& m, bool by_column) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int count = by_column ? cols : rows;
  std::vector<int> picked;
  ZMat acc;
  for (int k = 0; k < count; ++k) {
    ZMat trial = acc;
    std::vector<mpz_class> v;
    if (by_column)
      for (int r = 0; r < rows; ++r) v.push_back(m[r][k]);
    else
      v = m[k];
    trial.push_back(v);
    if (rank_q(trial) > static_cast<int>(picked.size())) {
      picked.push_back(k);
      acc = trial;
    }
  }
  return picked;
}

// Order of the torsion of coker m. A nonzero maximal minor d is a multiple of every invariant
// factor, so the Smith form is computed over Z/d with entries kept in [0, d).
inline mpz_class torsion_order(const ZMat& m) {
  std::vector<int> cs = independent(m, true);
  int r = static_cast<int>(cs.size());
  if (r == 0) return 1;
  ZMat sub_cols(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (int c : cs) sub_cols[i].push_back(m[i][c]);
  std::vector<int> rs = independent(sub_cols, false);
  ZMat minor;
  for (int i : rs) minor.push_back(sub_cols[i]);
  mpz_class d = abs(det(minor));
  if (d == 1) return 1;

  int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
  ZMat a = m;
  auto red = [&](mpz_class& x) {
    x %= d;
    if (x < 0) x += d;
  };
  for (auto& row : a)
    for (auto& x : row) red(x);
  std::vector<mpz_class> diag;
  for (int k = 0; k < std::min(rows, cols); ++k) {
    for (;;) {
      int pr = -1, pc = -1;
      for (int i = k; i < rows; ++i)
        for (int j = k; j < cols; ++j)
          if (a[i][j] != 0 && (pr < 0 || a[i][j] < a[pr][pc])) pr = i, pc = j;
      if (pr < 0) break;
      std::swap(a[k], a[pr]);
      for (auto& row : a) std::swap(row[k], row[pc]);
      bool reduced = true;
      for (int i = k + 1; i < rows; ++i) {
        mpz_class f = a[i][k] / a[k][k];
        for (int j = k; j < cols; ++j) {
          a[i][j] -= f * a[k][j];
          red(a[i][j]);
        }
        reduced = reduced && a[i][k] == 0;
      }
      for (int j = k + 1; j < cols; ++j) {
        mpz_class f = a[k][j] / a[k][k];
        for (int i = k; i < rows; ++i) {
          a[i][j] -= f * a[i][k];
          red(a[i][j]);
        }
        reduced = reduced && a[k][j] == 0;
      }
      if (!reduced) continue;
      int bad = -1;
      for (int i = k + 1; i < rows && bad < 0; ++i)
        for (int j = k + 1; j < cols; ++j)
          if (a[i][j] % a[k][k] != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = k; j < cols; ++j) {
        a[k][j] += a[bad][j];
        red(a[k][j]);
      }
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a[k][k].get_mpz_t(), d.get_mpz_t());
    diag.push_back(g);
  }
  std::sort(diag.begin(), diag.end());
  mpz_class t = 1;
  for (int k = 0; k < r; ++k) t *= diag[k];
  return t;
}

inline double log_torsion(const ZMat& m) {
  mpz_class t = torsion_order(m);
  long e = 0;
  double d = mpz_get_d_2exp(&e, t.get_mpz_t());
  return std::log(d) + e * std::log(2.0);
}

// Coinvariants of f: the point u of summand i goes to Σ_g f_g(u) times the point g^-1 u of summand j.
inline ZMat coinvariants(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  int n = q.order();
  std::vector<std::pair<int, int>> src, dst;
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int u : f.dom().carriers[i].points()) src.push_back({i, u});
  for (int j = 0; j < f.cod().rank(); ++j)
    for (int v : f.cod().carriers[j].points()) dst.push_back({j, v});
  ZMat m(dst.size(), std::vector<mpz_class>(src.size(), 0));
  for (size_t c = 0; c < src.size(); ++c) {
    auto [i, u] = src[c];
    for (int j = 0; j < f.cod().rank(); ++j) {
      Dense e = dense(f.entry(i, j), n);
      for (int g = 0; g < n; ++g) {
        if (!e[g][u]) continue;
        auto it = std::find(dst.begin(), dst.end(), std::make_pair(j, q.mul(q.inv(g), u)));
        m[it - dst.begin()][c] += static_cast<long>(e[g][u]);
      }
    }
  }
  return m;
}

struct Atom {
  long long norm = 0;
  std::set<std::pair<int, int>> image;  // (codomain summand, point)
};

inline std::vector<Atom> atoms_of(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  int n = q.order();
  std::vector<Atom> out;
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int u : f.dom().carriers[i].points()) {
      Atom a;
      Dense d(n, std::vector<long long>(n, 0));
      d[0][u] = 1;
      for (int j = 0; j < f.cod().rank(); ++j) {
        Dense e = dense(f.entry(i, j), n);
        a.norm += l1_times_n(mul(q, d, e));
        for (int g = 0; g < n; ++g)
          if (e[g][u]) a.image.insert({j, q.mul(q.inv(g), u)});
      }
      out.push_back(a);
    }
  return out;
}

// Value of the decomposition into single atoms.
inline double atom_lognorm(const MarkedMorphism& f) {
  double s = 0;
  for (const auto& a : atoms_of(f)) s += log_plus(static_cast<double>(a.norm));
  return s / f.level()->n();
}

// Minimum over all set partitions of the atoms.
inline double brute_lognorm(const MarkedMorphism& f) {
  int n = f.level()->n();
  std::vector<Atom> A = atoms_of(f);
  int m = static_cast<int>(A.size());
  if (m == 0) return 0;
  std::vector<int> block(m, 0);
  double best = 1e300;
  std::function<void(int, int)> rec = [&](int k, int used) {
    if (k == m) {
      double v = 0;
      for (int b = 0; b < used; ++b) {
        long long nm = 0;
        int dim = 0;
        std::set<std::pair<int, int>> img;
        for (int a = 0; a < m; ++a)
          if (block[a] == b) {
            ++dim;
            nm = std::max(nm, A[a].norm);
            img.insert(A[a].image.begin(), A[a].image.end());
          }
        v += std::min(dim, static_cast<int>(img.size())) / static_cast<double>(n) * log_plus(static_cast<double>(nm));
      }
      best = std::min(best, v);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      block[k] = b;
      rec(k + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

// Sum of log of column ℓ¹ norms over a minimum-weight column basis.
inline double brute_gabber(const IntMatrix& A) {
  std::vector<int> order(A.cols);
  std::iota(order.begin(), order.end(), 0);
  auto l1 = A.column_l1();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return l1[a] < l1[b]; });
  ZMat all = to_z(A), chosen(A.rows);
  double s = 0;
  int rank = 0;
  for (int c : order) {
    ZMat trial = chosen;
    for (int r = 0; r < A.rows; ++r) trial[r].push_back(all[r][c]);
    int k = rank_q(trial);
    if (k > rank) {
      rank = k;
      chosen = trial;
      s += log_plus(static_cast<double>(l1[c]));
    }
  }
  return s;
}

}  // namespace oracle
