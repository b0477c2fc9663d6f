#pragma once

#include <optional>
#include <vector>

#include "torgrad/crossring.hpp"
#include "torgrad/resolution.hpp"

namespace torgrad {

// An L∞-valued map out of a marked module, stored by its generator values v_i with supp(v_i) ⊆ A_i.
struct Augmentation {
  std::vector<Fn> v;

  Fn apply(const Level& L, const ModuleVector& z) const;
  int64_t infty_norm(const Level& L) const;
  // K_eta = N2_underline * |eta|_inf with N2_underline <= 1 for rank-one columns.
  int64_t K(const Level& L) const;
  Augmentation operator-(const Augmentation& o) const;
  bool operator==(const Augmentation& o) const { return v == o.v; }
};

// eta o f
Augmentation compose(const Augmentation& eta, const MarkedMorphism& f);
Rational size1(const Augmentation& eta, int n);
Fn ones(int n);
Carrier support(const Fn& f);

struct MarkedComplex {
  Level level;
  std::vector<MarkedModule> modules;   // D_0 .. D_top
  std::vector<MarkedMorphism> d;       // d[r-1] = ∂_r : D_r -> D_{r-1}
  std::optional<Augmentation> eta;

  int top() const { return static_cast<int>(modules.size()) - 1; }
  const MarkedModule& module(int r) const { return modules.at(r); }
  const MarkedMorphism& boundary(int r) const { return d.at(r - 1); }
  std::vector<Rational> dims() const;
  bool operator==(const MarkedComplex& o) const;
};

void validate(const MarkedComplex& D);

struct DefectReport {
  std::vector<Rational> delta;  // delta[r] = size1(∂_r o ∂_{r+1}), with ∂_0 = eta
  Rational delta_eta;           // μ(supp(η(z) − 1))
  Rational overall;
  bool strict() const { return overall == 0; }
};

DefectReport defect_report(const MarkedComplex& D, const std::optional<ModuleVector>& z = std::nullopt);

// A δ-surjectivity witness covering each atom by single ±1 terms; reports the uncovered measure.
std::pair<ModuleVector, Rational> surjectivity_witness(const MarkedComplex& D);

struct ComplexStats {
  int64_t kappa = 0;        // max operator norm
  int nu = 0;               // max N1
  int nu_underline = 0;     // max N1_underline
  int64_t eta_infty = 0;
  int max_rank = 0;
  int z_N1 = 0, z_N2 = 0;
  int64_t z_infty = 0;
};

ComplexStats complex_stats(const MarkedComplex& D, const std::optional<ModuleVector>& z = std::nullopt);

using ChainMap = std::vector<MarkedMorphism>;  // f_0 .. f_top

// eps[r] = size1(∂ᴰ_r f_r − f_{r−1} ∂ᶜ_r), eps[0] from η_D f_0 vs η_C.
std::vector<Rational> check_chain_map(const ChainMap& f, const MarkedComplex& C, const MarkedComplex& D);
ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap identity_map(const MarkedComplex& C);

MarkedComplex induce_resolution(const ResolutionData& C, const Level& L, int top = -1);

MarkedComplex mapping_cone(const ChainMap& phi, const MarkedComplex& D, const MarkedComplex& E);
MarkedComplex tensor_complex(const MarkedComplex& D, const MarkedComplex& E);
MarkedComplex trivial_complex(const Level& L);

struct GHWitness {
  std::vector<MarkedModule> P;          // P_0 .. P_top
  std::vector<std::vector<int>> phi;    // phi[r][i]: summand of P_r receiving D_r summand i
  std::vector<std::vector<int>> phi2;   // same for D'
  Rational delta;
  int64_t K = 0;
};

struct GHCheck {
  bool ok = false;
  std::string reason;
  std::vector<Rational> sym_diff;
  std::vector<Rational> map_delta;
  std::vector<int64_t> map_norm;
  ChainMap Phi;   // D -> D'
  ChainMap Phi2;  // D' -> D
};

GHWitness identity_witness(const MarkedComplex& D);
GHCheck gh_verify(const GHWitness& w, const MarkedComplex& D, const MarkedComplex& D2);
GHWitness gh_compose(const GHWitness& w1, const MarkedComplex& D, const MarkedComplex& D2,
                     const GHWitness& w2, const MarkedComplex& D3);

}  // namespace torgrad
