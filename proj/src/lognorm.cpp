#include "torgrad/lognorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "torgrad/coeff.hpp"

namespace torgrad {

double log_plus(double x) { return x > 1 ? std::log(x) : 0.0; }

void validate_decomposition(const MarkedModule& M, const Decomposition& D) {
  int n = M.level->n();
  for (const auto& b : D.blocks)
    if (static_cast<int>(b.size()) != M.rank()) throw std::invalid_argument("block has the wrong number of pieces");
  for (int i = 0; i < M.rank(); ++i) {
    Carrier seen(n);
    for (const auto& b : D.blocks) {
      if (b[i].n() != n) throw std::invalid_argument("piece on the wrong level");
      if (!(b[i] & seen).empty()) throw std::invalid_argument("pieces overlap");
      seen = seen | b[i];
    }
    if (!(seen == M.carriers[i])) throw std::invalid_argument("pieces do not partition the carrier");
  }
}

Decomposition atom_decomposition(const MarkedModule& M) {
  Decomposition D;
  int n = M.level->n();
  for (int i = 0; i < M.rank(); ++i)
    for (int u : M.carriers[i].points()) {
      std::vector<Carrier> b(M.rank(), Carrier(n));
      b[i].set(u);
      D.blocks.push_back(std::move(b));
    }
  return D;
}

Decomposition single_block(const MarkedModule& M) { return {{M.carriers}}; }

LognormCert lognorm_of_decomposition(const MarkedMorphism& f, const Decomposition& D) {
  validate_decomposition(f.dom(), D);
  LognormCert c;
  c.decomposition = D;
  for (const auto& pieces : D.blocks) {
    MarkedMorphism g = restrict_domain(f, pieces);
    BlockCert b;
    b.dim = g.dom().dim();
    b.rank = marked_rank(g);
    b.norm = op_norm(g);
    b.rank_branch = b.rank < b.dim;
    double lp = log_plus(static_cast<double>(b.norm));
    b.value = (b.rank_branch ? b.rank : b.dim).get_d() * lp;
    c.value += b.value;
    c.blocks.push_back(b);
  }
  return c;
}

namespace {

// Per-atom data: local row norm and the codomain atoms hit.
struct AtomTable {
  int n = 0;
  std::vector<std::pair<int, int>> atoms;
  std::vector<int64_t> norm;
  std::vector<std::vector<int>> image;  // sorted codomain atom indices
  int cod_atoms = 0;

  explicit AtomTable(const MarkedMorphism& f) {
    const FiniteQuotient& q = *f.level()->q;
    n = q.order();
    cod_atoms = f.cod().rank() * n;
    for (int i = 0; i < f.dom().rank(); ++i)
      for (int u : f.dom().carriers[i].points()) {
        atoms.emplace_back(i, u);
        norm.push_back(row_norm(f, i, u));
        std::set<int> img;
        for (int j = 0; j < f.cod().rank(); ++j)
          for (const auto& [g, fg] : f.entry(i, j).columns())
            if (fg[u]) img.insert(j * n + q.mul(q.inv(g), u));
        image.emplace_back(img.begin(), img.end());
      }
  }

  int size() const { return static_cast<int>(atoms.size()); }

  double cost(const std::vector<int>& block) const {
    int64_t m = 0;
    std::set<int> img;
    for (int a : block) {
      m = std::max(m, norm[a]);
      img.insert(image[a].begin(), image[a].end());
    }
    double w = static_cast<double>(std::min(block.size(), img.size())) / n;
    return w * log_plus(static_cast<double>(m));
  }

  Decomposition to_decomposition(const MarkedMorphism& f, const std::vector<std::vector<int>>& blocks) const {
    Decomposition D;
    for (const auto& b : blocks) {
      std::vector<Carrier> pieces(f.dom().rank(), Carrier(n));
      for (int a : b) pieces[atoms[a].first].set(atoms[a].second);
      D.blocks.push_back(std::move(pieces));
    }
    return D;
  }
};

std::vector<std::vector<int>> singletons(int k) {
  std::vector<std::vector<int>> b;
  for (int a = 0; a < k; ++a) b.push_back({a});
  return b;
}

std::vector<std::vector<int>> grouped_by_norm(const AtomTable& T) {
  std::map<int64_t, std::vector<int>> g;
  for (int a = 0; a < T.size(); ++a) g[T.norm[a]].push_back(a);
  std::vector<std::vector<int>> b;
  for (auto& [k, v] : g) b.push_back(std::move(v));
  return b;
}

double total(const AtomTable& T, const std::vector<std::vector<int>>& blocks) {
  double s = 0;
  for (const auto& b : blocks) s += T.cost(b);
  return s;
}

// Merge equal-norm blocks while the total drops.
std::vector<std::vector<int>> greedy_blocks(const AtomTable& T) {
  auto blocks = singletons(T.size());
  std::vector<double> c;
  for (const auto& b : blocks) c.push_back(T.cost(b));
  bool improved = true;
  while (improved) {
    improved = false;
    double best_gain = 1e-12;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j) {
        if (T.norm[blocks[i][0]] != T.norm[blocks[j][0]]) continue;
        std::vector<int> m = blocks[i];
        m.insert(m.end(), blocks[j].begin(), blocks[j].end());
        double gain = c[i] + c[j] - T.cost(m);
        if (gain > best_gain) best_gain = gain, bi = i, bj = j;
      }
    if (best_gain > 1e-12) {
      blocks[bi].insert(blocks[bi].end(), blocks[bj].begin(), blocks[bj].end());
      c[bi] = T.cost(blocks[bi]);
      blocks.erase(blocks.begin() + static_cast<long>(bj));
      c.erase(c.begin() + static_cast<long>(bj));
      improved = true;
    }
  }
  return blocks;
}

}  // namespace

Strategy parse_strategy(const std::string& s) {
  if (s == "atoms") return Strategy::atoms;
  if (s == "greedy") return Strategy::greedy;
  if (s == "block") return Strategy::block;
  throw ConfigError("unknown lognorm strategy: " + s);
}

LognormCert lognorm_upper(const MarkedMorphism& f, Strategy s) {
  if (s == Strategy::block) {
    LognormCert c = lognorm_of_decomposition(f, single_block(f.dom()));
    c.strategy = "block";
    return c;
  }
  AtomTable T(f);
  std::vector<std::vector<std::vector<int>>> tries;
  if (s == Strategy::atoms) {
    tries.push_back(grouped_by_norm(T));
    tries.push_back(singletons(T.size()));
  } else {
    tries.push_back(greedy_blocks(T));
  }
  size_t best = 0;
  for (size_t k = 1; k < tries.size(); ++k)
    if (total(T, tries[k]) < total(T, tries[best])) best = k;
  LognormCert c = lognorm_of_decomposition(f, T.to_decomposition(f, tries[best]));
  c.strategy = s == Strategy::atoms ? "atoms" : "greedy";
  return c;
}

double lognorm_exact(const MarkedMorphism& f, int cap) {
  AtomTable T(f);
  int k = T.size();
  if (k > cap) throw CapExceeded("lognorm_exact: " + std::to_string(k) + " atoms exceed the cap of " + std::to_string(cap));
  int full = (1 << k) - 1;
  std::vector<double> cost(full + 1, 0.0), best(full + 1, 0.0);
  for (int m = 1; m <= full; ++m) {
    std::vector<int> b;
    for (int a = 0; a < k; ++a)
      if (m >> a & 1) b.push_back(a);
    cost[m] = T.cost(b);
  }
  for (int m = 1; m <= full; ++m) {
    int low = m & -m;
    double v = cost[m];
    for (int s = (m - 1) & m; s; s = (s - 1) & m)
      if (s & low) v = std::min(v, cost[s] + best[m ^ s]);
    best[m] = v;
  }
  return best[full];
}

namespace {

// Incremental rational column basis in echelon form.
struct RationalSpan {
  std::vector<std::pair<int, std::vector<mpq_class>>> basis;  // (pivot row, vector)

  bool extends(std::vector<mpq_class> v) {
    for (const auto& [p, b] : basis)
      if (sgn(v[p]) != 0) {
        mpq_class f = v[p] / b[p];
        for (size_t r = 0; r < v.size(); ++r) v[r] -= f * b[r];
      }
    for (size_t r = 0; r < v.size(); ++r)
      if (sgn(v[r]) != 0) {
        basis.emplace_back(static_cast<int>(r), std::move(v));
        return true;
      }
    return false;
  }
};

}  // namespace

double gabber_column_bound(const IntMatrix& A) {
  auto l1 = A.column_l1();
  std::vector<int> order(A.cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return l1[a] < l1[b]; });
  IntMatrix T = A.transpose();
  RationalSpan span;
  double s = 0;
  for (int c : order) {
    if (!l1[c]) continue;
    std::vector<mpq_class> v(A.rows);
    for (const auto& [r, x] : T.data[c]) v[r] = static_cast<long>(x);
    if (span.extends(std::move(v))) s += log_plus(static_cast<double>(l1[c]));
  }
  return s;
}

std::vector<SplitBlock> trivial_split(const IntMatrix& A) {
  SplitBlock b;
  b.cols.resize(A.cols);
  std::iota(b.cols.begin(), b.cols.end(), 0);
  std::vector<int> rows(A.rows);
  std::iota(rows.begin(), rows.end(), 0);
  b.rows = rows;
  return {b};
}

double gabber_split_bound(const IntMatrix& A, const std::vector<SplitBlock>& blocks) {
  std::vector<int> seen(A.cols, 0);
  for (const auto& b : blocks)
    for (int c : b.cols) {
      if (c < 0 || c >= A.cols || seen[c]++) throw std::invalid_argument("split blocks must partition the columns");
    }
  for (int c = 0; c < A.cols; ++c)
    if (!seen[c]) throw std::invalid_argument("split blocks must partition the columns");
  auto l1 = A.column_l1();
  IntMatrix T = A.transpose();
  double s = 0;
  for (const auto& b : blocks) {
    int64_t m = 0;
    for (int c : b.cols) m = std::max(m, l1[c]);
    size_t weight = b.cols.size();
    if (b.rows) {
      std::set<int> allowed(b.rows->begin(), b.rows->end());
      for (int c : b.cols)
        for (const auto& [r, x] : T.data[c])
          if (!allowed.count(r)) throw std::invalid_argument("block image leaves its codomain summand");
      weight = allowed.size();
    }
    s += static_cast<double>(weight) * log_plus(static_cast<double>(m));
  }
  return s;
}

}  // namespace torgrad
