#include "torgrad/strictify.hpp"

#include <algorithm>
#include <limits>

#include "torgrad/coeff.hpp"

namespace torgrad {

ModuleVector pad(const ModuleVector& z, const MarkedModule& M) {
  ModuleVector r = ModuleVector::zero(M);
  if (z.rank() > M.rank()) throw ShapeMismatch("cannot pad into a smaller module");
  for (int i = 0; i < z.rank(); ++i) r.comps[i] = z.comps[i];
  return r;
}

static MarkedModule extend(const MarkedModule& M, const std::vector<Carrier>& extra) {
  MarkedModule r = M;
  r.carriers.insert(r.carriers.end(), extra.begin(), extra.end());
  return r;
}

ChainMap leading_inclusion(const MarkedComplex& D, const MarkedComplex& Dhat) {
  ChainMap f;
  for (int r = 0; r <= D.top(); ++r) {
    std::vector<int> s(D.module(r).rank());
    for (size_t i = 0; i < s.size(); ++i) s[i] = static_cast<int>(i);
    f.push_back(marked_inclusion(D.module(r), Dhat.module(r), s));
  }
  return f;
}

GHWitness measured_witness(const MarkedComplex& D, const MarkedComplex& Dhat) {
  GHWitness w;
  w.P = Dhat.modules;
  for (int r = 0; r <= D.top(); ++r) {
    std::vector<int> a(D.module(r).rank()), b(Dhat.module(r).rank());
    for (size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i);
    for (size_t i = 0; i < b.size(); ++i) b[i] = static_cast<int>(i);
    w.phi.push_back(a);
    w.phi2.push_back(b);
  }
  Rational big = 1;
  for (const auto& M : Dhat.modules) big += M.rank();
  w.delta = big;
  w.K = std::numeric_limits<int64_t>::max() / 4;
  GHCheck c = gh_verify(w, D, Dhat);
  Rational m = 0;
  int64_t k = 0;
  for (const auto& x : c.sym_diff) m = std::max(m, x);
  for (const auto& x : c.map_delta) m = std::max(m, x);
  for (auto x : c.map_norm) k = std::max(k, x);
  w.delta = m + frac(1, D.level->n());
  w.K = k;
  return w;
}

std::pair<MarkedComplex, StrictifyCert> make_surjective(const MarkedComplex& D, const ModuleVector& z) {
  if (!D.eta) throw ShapeMismatch("complex has no augmentation");
  const Level& L = D.level;
  int n = L->n();
  Fn e = D.eta->apply(L, z);
  Carrier B(n);
  Fn v(n, 0);
  for (int x = 0; x < n; ++x)
    if (cnorm(e[x] - 1, L->p)) {
      B.set(x);
      v[x] = cnorm(1 - e[x], L->p);
    }
  StrictifyCert cert;
  MarkedComplex H = D;
  ModuleVector zh = z;
  if (!B.empty()) {
    H.modules[0] = extend(D.module(0), {B});
    H.eta->v.push_back(v);
    if (D.top() >= 1) {
      std::vector<ModuleVector> rows;
      for (int i = 0; i < D.module(1).rank(); ++i) rows.push_back(pad(D.boundary(1).row(i), H.modules[0]));
      H.d[0] = MarkedMorphism::from_rows(H.modules[1], H.modules[0], rows);
    }
    zh = pad(z, H.modules[0]);
    zh.comps.back() = CrossedElt::chi(L, B, 0);
  }
  cert.E.assign(1, MarkedModule{L, B.empty() ? std::vector<Carrier>{} : std::vector<Carrier>{B}});
  cert.dim_growth = {cert.E[0].dim()};
  cert.surjectivity_growth = B.measure();
  cert.total_growth = cert.surjectivity_growth;
  cert.inclusion_defect = check_chain_map(leading_inclusion(D, H), D, H);
  cert.witness = measured_witness(D, H);
  cert.z_hat = zh;
  return {H, cert};
}

std::pair<MarkedComplex, StrictifyCert> strictify_complex(const MarkedComplex& D, const std::optional<ModuleVector>& z) {
  validate(D);
  const Level& L = D.level;
  int n = L->n();
  int top = D.top();
  DefectReport input = defect_report(D, z);

  MarkedComplex S = D;
  StrictifyCert cert;
  if (D.eta && z) {
    auto [H, c0] = make_surjective(D, *z);
    S = H;
    cert.surjectivity_growth = c0.surjectivity_growth;
    cert.z_hat = c0.z_hat;
  }
  MarkedComplex Hc;
  Hc.level = L;
  Hc.modules = S.modules;
  Hc.eta = S.eta;
  cert.E.assign(top + 1, MarkedModule{L, {}});

  // tilde: ∂~_r on the old D_r, landing in the hatted D_{r-1}.
  std::optional<MarkedMorphism> tilde;
  for (int r = 0; r < top; ++r) {
    const MarkedMorphism& up = S.boundary(r + 1);
    std::vector<Carrier> B;
    std::vector<int> slot(up.dom().rank(), -1);
    std::vector<ModuleVector> ys;
    if (r == 0) {
      if (!Hc.eta) {
        tilde = up;
        continue;
      }
      for (int i = 0; i < up.dom().rank(); ++i) {
        Fn y = S.eta->apply(L, up.row(i));
        Carrier b = support(y);
        if (b.empty()) continue;
        slot[i] = static_cast<int>(B.size());
        B.push_back(b);
        Hc.eta->v.push_back(y);
      }
      Hc.modules[0] = extend(S.module(0), B);
    } else {
      for (int i = 0; i < up.dom().rank(); ++i) {
        ModuleVector y = morphism_apply(*tilde, up.row(i));
        Carrier b = supp1(y, n);
        if (b.empty()) continue;
        slot[i] = static_cast<int>(B.size());
        B.push_back(b);
        ys.push_back(y);
      }
      Hc.modules[r] = extend(S.module(r), B);
      std::vector<ModuleVector> rows;
      for (int i = 0; i < tilde->dom().rank(); ++i) rows.push_back(tilde->row(i));
      rows.insert(rows.end(), ys.begin(), ys.end());
      Hc.d.push_back(MarkedMorphism::from_rows(Hc.modules[r], Hc.modules[r - 1], rows));
    }
    cert.E[r] = MarkedModule{L, B};
    std::vector<ModuleVector> next;
    for (int i = 0; i < up.dom().rank(); ++i) {
      ModuleVector v = pad(up.row(i), Hc.modules[r]);
      if (slot[i] >= 0) v.comps[S.module(r).rank() + slot[i]] = CrossedElt::chi(L, B[slot[i]], 0, -1);
      next.push_back(v);
    }
    tilde = MarkedMorphism::from_rows(S.module(r + 1), Hc.modules[r], next);
  }
  if (top >= 1) Hc.d.push_back(*tilde);
  validate(Hc);
  if (cert.z_hat) cert.z_hat = pad(*cert.z_hat, Hc.modules[0]);

  for (int r = 0; r <= top; ++r) cert.dim_growth.push_back(cert.E[r].dim());
  cert.total_growth = cert.surjectivity_growth;
  for (const auto& g : cert.dim_growth) cert.total_growth += g;
  cert.delta = input.delta;
  for (int r = 0; r < top; ++r) {
    Rational carried = r == 0 ? Rational(0) : cert.dim_growth[r - 1];
    MorphismStats ms = morphism_stats(S.boundary(r + 1));
    cert.carried.push_back(carried);
    cert.display_bound.push_back(input.delta[r] + ms.N1 * carried);
    Rational eff = std::max(input.delta[r], carried);
    cert.bound.push_back(eff * (1 + S.module(r + 1).rank() * ms.N1_underline));
  }
  cert.inclusion_defect = check_chain_map(leading_inclusion(D, Hc), D, Hc);
  cert.witness = measured_witness(D, Hc);
  return {Hc, cert};
}

std::tuple<MarkedComplex, ChainMap, StrictifyCert> strictify_map(const ChainMap& f, const MarkedComplex& C,
                                                                 const MarkedComplex& D) {
  if (!defect_report(C).strict() || !defect_report(D).strict())
    throw std::invalid_argument("strictify_map needs strict source and target complexes");
  const Level& L = D.level;
  int n = L->n();
  int top = std::min(C.top(), D.top());
  check_chain_map(f, C, D);
  MarkedComplex Hc = D;
  ChainMap fh;
  StrictifyCert cert;
  cert.E.assign(D.top() + 1, MarkedModule{L, {}});
  for (int r = 0; r <= top; ++r) {
    std::vector<Carrier> B;
    std::vector<int> slot(C.module(r).rank(), -1);
    std::vector<ModuleVector> deltas;
    if (r == 0) {
      if (C.eta && D.eta) {
        Augmentation diff = compose(*D.eta, f[0]) - *C.eta;
        for (int i = 0; i < C.module(0).rank(); ++i) {
          Carrier b = support(diff.v[i]);
          if (b.empty()) continue;
          slot[i] = static_cast<int>(B.size());
          B.push_back(b);
          Hc.eta->v.push_back(diff.v[i]);
        }
        Hc.modules[0] = extend(D.module(0), B);
      }
    } else {
      MarkedMorphism Delta = compose(Hc.boundary(r), f[r]) - compose(fh[r - 1], C.boundary(r));
      for (int i = 0; i < C.module(r).rank(); ++i) {
        ModuleVector y = Delta.row(i);
        Carrier b = supp1(y, n);
        if (b.empty()) continue;
        slot[i] = static_cast<int>(B.size());
        B.push_back(b);
        deltas.push_back(y);
      }
      Hc.modules[r] = extend(D.module(r), B);
      std::vector<ModuleVector> rows;
      for (int i = 0; i < D.module(r).rank(); ++i) rows.push_back(Hc.boundary(r).row(i));
      rows.insert(rows.end(), deltas.begin(), deltas.end());
      Hc.d[r - 1] = MarkedMorphism::from_rows(Hc.modules[r], Hc.modules[r - 1], rows);
    }
    if (r + 1 <= D.top()) {
      std::vector<ModuleVector> rows;
      for (int i = 0; i < D.module(r + 1).rank(); ++i) rows.push_back(pad(D.boundary(r + 1).row(i), Hc.modules[r]));
      Hc.d[r] = MarkedMorphism::from_rows(D.module(r + 1), Hc.modules[r], rows);
    }
    cert.E[r] = MarkedModule{L, B};
    std::vector<ModuleVector> rows;
    for (int i = 0; i < C.module(r).rank(); ++i) {
      ModuleVector v = pad(f[r].row(i), Hc.modules[r]);
      if (slot[i] >= 0) v.comps[D.module(r).rank() + slot[i]] = CrossedElt::chi(L, B[slot[i]], 0, -1);
      rows.push_back(v);
    }
    fh.push_back(MarkedMorphism::from_rows(C.module(r), Hc.modules[r], rows));
  }
  validate(Hc);
  for (const auto& E : cert.E) cert.dim_growth.push_back(E.dim());
  cert.total_growth = 0;
  for (const auto& g : cert.dim_growth) cert.total_growth += g;
  cert.inclusion_defect = check_chain_map(leading_inclusion(D, Hc), D, Hc);
  cert.witness = measured_witness(D, Hc);
  return {Hc, fh, cert};
}

}  // namespace torgrad
