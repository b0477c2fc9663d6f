#include "torgrad/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "torgrad/coeff.hpp"

namespace torgrad {

IntMatrix IntMatrix::dense(const std::vector<std::vector<int64_t>>& a, int cols) {
  int c = cols >= 0 ? cols : (a.empty() ? 0 : static_cast<int>(a[0].size()));
  IntMatrix m(static_cast<int>(a.size()), c);
  for (int r = 0; r < m.rows; ++r)
    for (int k = 0; k < c; ++k)
      if (a[r][k]) m.data[r][k] = a[r][k];
  return m;
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.data[i][i] = 1;
  return m;
}

void IntMatrix::add(int r, int c, int64_t v) {
  if (!v) return;
  auto& row = data[r];
  auto it = row.find(c);
  if (it == row.end()) {
    row.emplace(c, v);
    return;
  }
  it->second = cadd(it->second, v);
  if (!it->second) row.erase(it);
}

int64_t IntMatrix::at(int r, int c) const {
  auto it = data[r].find(c);
  return it == data[r].end() ? 0 : it->second;
}

bool IntMatrix::is_zero() const {
  for (const auto& r : data)
    if (!r.empty()) return false;
  return true;
}

size_t IntMatrix::nnz() const {
  size_t s = 0;
  for (const auto& r : data) s += r.size();
  return s;
}

std::vector<int64_t> IntMatrix::column_l1() const {
  std::vector<int64_t> s(cols, 0);
  for (const auto& r : data)
    for (const auto& [c, v] : r) s[c] = cadd(s[c], cabs(v));
  return s;
}

int64_t IntMatrix::column_l1_max() const {
  auto s = column_l1();
  return s.empty() ? 0 : *std::max_element(s.begin(), s.end());
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (const auto& [c, v] : data[r]) t.data[c][r] = v;
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw ShapeMismatch("matrix product shapes");
  IntMatrix m(a.rows, b.cols);
  for (int r = 0; r < a.rows; ++r)
    for (const auto& [k, v] : a.data[r])
      for (const auto& [c, w] : b.data[k]) m.add(r, c, cmul(v, w));
  return m;
}

CoinvBasis coinvariants_module(const MarkedModule& M) {
  CoinvBasis b;
  for (int i = 0; i < M.rank(); ++i)
    for (int u : M.carriers[i].points()) {
      b.index[{i, u}] = b.rank();
      b.elems.emplace_back(i, u);
    }
  return b;
}

IntMatrix coinvariants_matrix(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  CoinvBasis src = coinvariants_module(f.dom()), dst = coinvariants_module(f.cod());
  IntMatrix m(dst.rank(), src.rank());
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int j = 0; j < f.cod().rank(); ++j)
      for (const auto& [g, fg] : f.entry(i, j).columns()) {
        int gi = q.inv(g);
        for (int u = 0; u < q.order(); ++u) {
          if (!fg[u]) continue;
          int v = q.mul(gi, u);
          auto a = src.index.find({i, u});
          auto b = dst.index.find({j, v});
          if (a == src.index.end() || b == dst.index.end()) throw ShapeMismatch("entry violates its support constraint");
          m.add(b->second, a->second, fg[u]);
        }
      }
  return m;
}

bool ZComplex::is_complex() const {
  for (size_t r = 1; r < d.size(); ++r)
    if (!(d[r - 1] * d[r]).is_zero()) return false;
  return true;
}

ZComplex coinvariants_complex(const MarkedComplex& D) {
  ZComplex Z;
  for (const auto& M : D.modules) Z.ranks.push_back(coinvariants_module(M).rank());
  for (const auto& b : D.d) Z.d.push_back(coinvariants_matrix(b));
  return Z;
}

ZComplex shapiro_complex(const ResolutionData& C, const FiniteQuotient& q, int top) {
  if (top < 0) top = C.length();
  if (top > C.length()) throw ShapeMismatch("resolution does not reach the requested degree");
  if (C.presentation.generators != q.num_generators())
    throw ConfigError("quotient has the wrong number of generators for " + C.name);
  q.verify_relators(C.presentation);
  int n = q.order();
  ZComplex Z;
  for (int r = 0; r <= top; ++r) Z.ranks.push_back(C.rank(r) * n);
  for (int r = 1; r <= top; ++r) {
    IntMatrix m(C.rank(r - 1) * n, C.rank(r) * n);
    for (int i = 0; i < C.rank(r); ++i)
      for (int j = 0; j < C.rank(r - 1); ++j)
        for (const auto& [w, a] : C.d(r)[i][j].terms()) {
          int gi = q.inv(q.evaluate(w));
          for (int u = 0; u < n; ++u) m.add(j * n + q.mul(gi, u), i * n + u, a);
        }
    Z.d.push_back(std::move(m));
  }
  return Z;
}

std::vector<mpz_class> SNF::torsion() const {
  std::vector<mpz_class> t;
  for (const auto& d : factors)
    if (d > 1) t.push_back(d);
  return t;
}

double log_of(const mpz_class& z) {
  long e;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

double log_torsion(const std::vector<mpz_class>& t) {
  double s = 0;
  for (const auto& d : t) s += log_of(abs(d));
  return s;
}

namespace {

using DenseZ = std::vector<std::vector<mpz_class>>;

// Sparse elimination on unit pivots; the survivors form a dense Schur complement.
struct UnitEliminator {
  std::vector<std::map<int, int64_t>> rows;
  std::vector<std::set<int>> col_rows;
  std::vector<char> row_alive, col_alive;
  int units = 0;

  explicit UnitEliminator(const IntMatrix& A)
      : rows(A.data), col_rows(A.cols), row_alive(A.rows, 1), col_alive(A.cols, 1) {
    for (int r = 0; r < A.rows; ++r)
      for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
  }

  bool step() {
    long best = -1;
    int br = -1, bc = -1;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (!row_alive[r]) continue;
      long rc = static_cast<long>(rows[r].size()) - 1;
      for (const auto& [c, v] : rows[r]) {
        if (v != 1 && v != -1) continue;
        long cost = rc * (static_cast<long>(col_rows[c].size()) - 1);
        if (best < 0 || cost < best) {
          best = cost;
          br = static_cast<int>(r);
          bc = c;
          if (cost == 0) break;
        }
      }
      if (best == 0) break;
    }
    if (br < 0) return false;
    int64_t pv = rows[br][bc];
    std::vector<int> targets(col_rows[bc].begin(), col_rows[bc].end());
    const auto prow = rows[br];
    for (int r : targets) {
      if (r == br) continue;
      int64_t factor = cmul(rows[r][bc], pv);  // pv = ±1 so pv^-1 = pv
      for (const auto& [c, v] : prow) {
        auto& row = rows[r];
        int64_t nv = cadd(row.count(c) ? row[c] : 0, -cmul(factor, v));
        if (nv) {
          if (!row.count(c)) col_rows[c].insert(r);
          row[c] = nv;
        } else if (row.count(c)) {
          row.erase(c);
          col_rows[c].erase(r);
        }
      }
    }
    for (const auto& [c, v] : prow) col_rows[c].erase(br);
    rows[br].clear();
    row_alive[br] = 0;
    col_alive[bc] = 0;
    ++units;
    return true;
  }

  DenseZ remainder() const {
    std::vector<int> cidx(col_alive.size(), -1);
    int nc = 0;
    for (size_t c = 0; c < col_alive.size(); ++c)
      if (col_alive[c] && !col_rows[c].empty()) cidx[c] = nc++;
    DenseZ M;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (!row_alive[r] || rows[r].empty()) continue;
      std::vector<mpz_class> row(nc);
      for (const auto& [c, v] : rows[r]) row[cidx[c]] = mpz_class(static_cast<long>(v));
      M.push_back(std::move(row));
    }
    return M;
  }
};

DenseZ to_dense(const IntMatrix& A) {
  DenseZ M(A.rows, std::vector<mpz_class>(A.cols));
  for (int r = 0; r < A.rows; ++r)
    for (const auto& [c, v] : A.data[r]) M[r][c] = mpz_class(static_cast<long>(v));
  return M;
}

// Diagonalize in place; returns the nonzero diagonal.
std::vector<mpz_class> dense_diagonal(DenseZ M) {
  std::vector<mpz_class> diag;
  int m = static_cast<int>(M.size());
  int n = m ? static_cast<int>(M[0].size()) : 0;
  mpz_class q;
  for (int t = 0; t < std::min(m, n); ++t) {
    while (true) {
      int pr = -1, pc = -1;
      for (int r = t; r < m; ++r)
        for (int c = t; c < n; ++c)
          if (sgn(M[r][c]) != 0 && (pr < 0 || mpz_cmpabs(M[r][c].get_mpz_t(), M[pr][pc].get_mpz_t()) < 0)) pr = r, pc = c;
      if (pr < 0) return diag;
      std::swap(M[t], M[pr]);
      if (pc != t)
        for (int r = 0; r < m; ++r) std::swap(M[r][t], M[r][pc]);
      bool clean = true;
      const mpz_class piv = M[t][t];
      for (int r = t + 1; r < m; ++r) {
        if (sgn(M[r][t]) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), M[r][t].get_mpz_t(), piv.get_mpz_t());
        for (int c = t; c < n; ++c)
          if (sgn(M[t][c]) != 0) M[r][c] -= q * M[t][c];
        if (sgn(M[r][t]) != 0) clean = false;
      }
      for (int c = t + 1; c < n; ++c) {
        if (sgn(M[t][c]) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), M[t][c].get_mpz_t(), piv.get_mpz_t());
        for (int r = t; r < m; ++r)
          if (sgn(M[r][t]) != 0) M[r][c] -= q * M[r][t];
        if (sgn(M[t][c]) != 0) clean = false;
      }
      if (clean) break;
    }
    diag.push_back(abs(M[t][t]));
  }
  return diag;
}

std::vector<mpz_class> normalize_factors(std::vector<mpz_class> d) {
  std::vector<mpz_class> ones, rest;
  for (auto& x : d) (x == 1 ? ones : rest).push_back(x);
  for (size_t i = 0; i < rest.size(); ++i)
    for (size_t j = i + 1; j < rest.size(); ++j) {
      mpz_class g = gcd(rest[i], rest[j]);
      mpz_class l = lcm(rest[i], rest[j]);
      rest[i] = g;
      rest[j] = l;
    }
  std::sort(rest.begin(), rest.end());
  ones.insert(ones.end(), rest.begin(), rest.end());
  return ones;
}

}  // namespace

SNF smith_normal_form(const IntMatrix& A) {
  std::vector<mpz_class> diag;
  DenseZ rest;
  try {
    UnitEliminator E(A);
    while (E.step()) {
    }
    diag.assign(E.units, mpz_class(1));
    rest = E.remainder();
  } catch (const OverflowError&) {
    diag.clear();
    rest = to_dense(A);
  }
  auto d2 = dense_diagonal(std::move(rest));
  diag.insert(diag.end(), d2.begin(), d2.end());
  return SNF{normalize_factors(std::move(diag))};
}

std::vector<mpz_class> cokernel_torsion(const IntMatrix& A) { return smith_normal_form(A).torsion(); }

std::vector<mpz_class> torsion_by_kernel(const ZComplex& C, int n) {
  if (n < 0 || n > C.top()) return {};
  int dim = C.ranks[n];
  if (n + 1 > C.top()) return {};
  if (n == 0) return cokernel_torsion(C.d[0]);
  // Column echelon of ∂_n with the inverse transform tracked as row operations.
  DenseZ A = to_dense(C.d[n - 1]);
  int m = C.ranks[n - 1];
  DenseZ Vinv(dim, std::vector<mpz_class>(dim));
  for (int i = 0; i < dim; ++i) Vinv[i][i] = 1;
  auto col_add = [&](int dst, int src, const mpz_class& c) {  // col_dst += c col_src
    for (int r = 0; r < m; ++r)
      if (sgn(A[r][src]) != 0) A[r][dst] += c * A[r][src];
    for (int k = 0; k < dim; ++k)
      if (sgn(Vinv[dst][k]) != 0) Vinv[src][k] -= c * Vinv[dst][k];
  };
  auto col_swap = [&](int a, int b) {
    for (int r = 0; r < m; ++r) std::swap(A[r][a], A[r][b]);
    std::swap(Vinv[a], Vinv[b]);
  };
  int k = 0;
  mpz_class q;
  for (int r = 0; r < m && k < dim; ++r) {
    while (true) {
      int best = -1;
      for (int c = k; c < dim; ++c)
        if (sgn(A[r][c]) != 0 && (best < 0 || mpz_cmpabs(A[r][c].get_mpz_t(), A[r][best].get_mpz_t()) < 0)) best = c;
      if (best < 0) break;
      if (best != k) col_swap(best, k);
      bool done = true;
      for (int c = k + 1; c < dim; ++c) {
        if (sgn(A[r][c]) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), A[r][c].get_mpz_t(), A[r][k].get_mpz_t());
        col_add(c, k, -q);
        if (sgn(A[r][c]) != 0) done = false;
      }
      if (done) {
        ++k;
        break;
      }
    }
  }
  // Kernel coordinates of im ∂_{n+1}: rows k.. of Vinv · ∂_{n+1}.
  const IntMatrix& B = C.d[n];
  int kd = dim - k;
  DenseZ coords(kd, std::vector<mpz_class>(B.cols));
  for (int i = 0; i < kd; ++i)
    for (int s = 0; s < dim; ++s) {
      const mpz_class& v = Vinv[k + i][s];
      if (sgn(v) == 0) continue;
      for (const auto& [c, w] : B.data[s]) coords[i][c] += v * static_cast<long>(w);
    }
  auto d = dense_diagonal(std::move(coords));
  auto f = normalize_factors(d);
  std::vector<mpz_class> t;
  for (auto& x : f)
    if (x > 1) t.push_back(x);
  return t;
}

int rank_mod_p(const IntMatrix& A, int64_t p) {
  std::vector<std::map<int, int64_t>> rows;
  for (const auto& r : A.data) {
    std::map<int, int64_t> row;
    for (const auto& [c, v] : r)
      if (cnorm(v, p)) row[c] = cnorm(v, p);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  auto inv_mod = [p](int64_t a) {
    int64_t r = 1, b = a, e = p - 2;
    while (e) {
      if (e & 1) r = cmul(r, b, p);
      b = cmul(b, b, p);
      e >>= 1;
    }
    return r;
  };
  // pivots keyed by leading column
  std::map<int, std::map<int, int64_t>> piv;
  int rank = 0;
  for (auto row : rows) {
    while (!row.empty()) {
      int lead = row.begin()->first;
      auto it = piv.find(lead);
      if (it == piv.end()) {
        int64_t s = inv_mod(row.begin()->second);
        for (auto& [c, v] : row) v = cmul(v, s, p);
        piv.emplace(lead, std::move(row));
        ++rank;
        break;
      }
      int64_t f = row.begin()->second;
      for (const auto& [c, v] : it->second) {
        int64_t nv = cnorm(cadd(row.count(c) ? row[c] : 0, -cmul(f, v, p), p), p);
        if (nv) row[c] = nv;
        else row.erase(c);
      }
    }
  }
  return rank;
}

int betti_mod_p(const ZComplex& C, int n, int64_t p) {
  if (n < 0 || n > C.top()) return 0;
  int b = C.ranks[n];
  if (n >= 1) b -= rank_mod_p(C.d[n - 1], p);
  if (n + 1 <= C.top()) b -= rank_mod_p(C.d[n], p);
  return b;
}

HomologyResult homology(const ZComplex& C, int n, TorsionRoute route) {
  HomologyResult h;
  h.degree = n;
  if (n < 0 || n > C.top()) return h;
  int b = C.ranks[n];
  if (n >= 1) b -= smith_normal_form(C.d[n - 1]).rank();
  if (n + 1 <= C.top()) {
    SNF s = smith_normal_form(C.d[n]);
    b -= s.rank();
    if (route == TorsionRoute::automatic) route = C.ranks[n] <= 256 ? TorsionRoute::kernel : TorsionRoute::cokernel;
    h.torsion = route == TorsionRoute::kernel ? torsion_by_kernel(C, n) : s.torsion();
  }
  h.betti_q = b;
  h.logtors = log_torsion(h.torsion);
  return h;
}

RetractReport retract_inequality_check(const ZComplex& Z, const MarkedComplex& D, int n) {
  RetractReport rep;
  rep.degree = n;
  rep.order = D.level->n();
  HomologyResult h = homology(Z, n);
  rep.betti = h.betti_q;
  rep.logtors = h.logtors;
  rep.dim_bound = n <= D.top() ? D.module(n).dim() * rep.order : Rational(0);
  if (n + 1 <= D.top()) rep.logtors_bound = log_torsion(cokernel_torsion(coinvariants_matrix(D.boundary(n + 1))));
  rep.betti_ok = Rational(rep.betti) <= rep.dim_bound;
  rep.torsion_ok = rep.logtors <= rep.logtors_bound + 1e-9;
  return rep;
}

RetractReport retract_inequality_check(const ResolutionData& C, const MarkedComplex& D, const FiniteQuotient& q, int n) {
  return retract_inequality_check(shapiro_complex(C, q, std::min(C.length(), n + 1)), D, n);
}

}  // namespace torgrad
