#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torgrad/complexes.hpp"
#include "torgrad/resolution.hpp"

namespace torgrad {

ResolutionData resolution_free(int d);
ResolutionData resolution_Z();
ResolutionData resolution_surface(int genus);
ResolutionData resolution_Zd(int d);
// Cellular chains of the presentation complex: ∂_1 = 1 − s, ∂_2 = Fox matrix. Exact through degree 1.
ResolutionData resolution_presentation(const FinitePresentation& p);
// Product group resolution; the second alphabet is shifted after the first.
ResolutionData tensor_resolution(const ResolutionData& a, const ResolutionData& b);
// ∂_{r-1} ∂_r evaluated in the quotient; true when every product vanishes.
bool resolution_is_complex(const ResolutionData& C, const FiniteQuotient& q);

struct CoverFailure : std::runtime_error {
  Rational uncovered;
  Rational dim;
  CoverFailure(const Rational& u, const Rational& d)
      : std::runtime_error("cover failure: uncovered measure " + u.get_str() + ", dim " + d.get_str()), uncovered(u), dim(d) {}
};

struct Degree0Cheap {
  MarkedModule D0;   // <A> ⊕ <B>
  ModuleVector x;    // η(x) = 1
  Augmentation eta;
  Carrier A, B;
  std::vector<Carrier> pieces;  // the disjointified A_j ⊆ γ_j A
  Rational dim;
};

// B = G \ F·A. Without A, a base is chosen greedily so that F·A covers G.
Degree0Cheap degree0_cheap(const Level& L, const std::vector<Word>& F, const std::optional<Carrier>& A = std::nullopt,
                           const std::optional<Rational>& eps = std::nullopt);

struct RokhlinTower {
  int M = 0, N = 0, q = 0;
  Level level;
  Carrier A, B;
  std::vector<long> A_exponents, B_exponents;
  bool partition_ok = false;  // A ⊔ tA ⊔ ... ⊔ t^{N-1}A ⊔ B = ℤ/M
};

// Element t^k of the cyclic level.
int tpow(const FiniteQuotient& q, long k);
RokhlinTower rokhlin_partition(int M, int N);

struct Ledger {
  std::vector<std::pair<std::string, bool>> checks;
  void add(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
  bool all() const;
};

struct IntegersResolution {
  RokhlinTower tower;
  MarkedComplex D;   // D_1 -> D_0, both <A> ⊕ <B>
  ModuleVector x;
  Rational dim_bound;  // 1/N + (M mod N)/M
  int64_t d1_norm = 0;
  Ledger ledger;
};

IntegersResolution integers_dyn_resolution(int M, int N);

struct IntegersEmbedding {
  IntegersResolution res;
  MarkedComplex C;      // induced ℤ-resolution
  ChainMap f;           // C -> D
  ChainMap r;           // D -> C
  MarkedMorphism h0;    // C_0 -> C_1
  int64_t norm_f0 = 0, norm_f1 = 0, norm_r0 = 0, norm_r1 = 0, norm_h0 = 0;
  Ledger ledger;
};

IntegersEmbedding integers_embedding(int M, int N);

int64_t kappa(const std::vector<std::vector<GroupRingElt>>& Lambda);

struct Supp1Extension {
  std::vector<Carrier> A;
  MarkedMorphism f;   // <A> -> <B>, f(χ_{A_i} e_i) = Σ_j λ_ij χ_{B_j} e_j
  int64_t kappa = 0;
  Rational measure;        // Σ μ(A_i)
  Rational measure_bound;  // #I · κ · Σ μ(B_j)
  int64_t norm = 0;
  int64_t norm_bound = 0;  // κ² · #J
  bool well_defined = false;
  bool ok() const;
};

Supp1Extension supp1_extend(const Level& L, const std::vector<std::vector<GroupRingElt>>& Lambda,
                            const std::vector<Carrier>& targets);

struct ChainExtension {
  MarkedComplex D;
  std::vector<Rational> dim_bound;      // per degree, from degree 2 on
  std::vector<int64_t> norm_bound;
  std::vector<int64_t> kappas;
  bool strict = false;
  bool ok() const;
};

// Extends D_{≤1} along Λ_2..Λ_{n+1} of C.
ChainExtension supp1_chain_extend(const ResolutionData& C, const MarkedComplex& low, int top = -1);

struct CheapComplex {
  Degree0Cheap degree0;
  ChainExtension ext;
  MarkedComplex C;   // induced resolution
  ChainMap f;        // C -> D
  std::vector<Rational> chain_defect;
};

// D_0 from degree0_cheap, D_1 with carriers supp1(λ_s x), and the support-extended tail.
CheapComplex cheap_complex(const ResolutionData& C, const Level& L, const std::vector<Word>& F,
                           const std::optional<Carrier>& A = std::nullopt, int top = -1);

struct CheapZ {
  Rational eps;
  int N = 0, M = 0;
  IntegersResolution res;
  std::vector<Rational> dims;
  int64_t d1_norm = 0;
  bool degree0_matches = false;  // degree0_cheap on the tower reproduces D_0 and x
  bool ok() const;
};

// N = ceil(2/ε); M must satisfy (M mod N)/M < ε/2.
CheapZ cheap_embedding_Z(const Rational& eps, int M);
// Smallest tile length for ε and a default family of admissible levels.
int cheap_tile(const Rational& eps);

}  // namespace torgrad
