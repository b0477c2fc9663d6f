#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "torgrad/complexes.hpp"

namespace torgrad {

struct StrictifyCert {
  std::vector<MarkedModule> E;         // E[r] is appended to degree r
  std::vector<Rational> dim_growth;    // dim E[r]
  Rational surjectivity_growth;        // dim of the summand added by make_surjective
  Rational total_growth;
  std::vector<Rational> delta;         // input defects size1(∂_r ∂_{r+1}), ∂_0 = η
  std::vector<Rational> carried;       // size1(∂~_r − ∂_r) = dim E[r−1]
  std::vector<Rational> display_bound; // δ_r + N1(∂_{r+1}) · carried_r
  std::vector<Rational> bound;         // (1 + rk D_{r+1} · N1_(∂_{r+1})) · max(δ_r, carried_r)
  std::vector<Rational> inclusion_defect;
  GHWitness witness;
  std::optional<ModuleVector> z_hat;
};

// Append zero components so z lives in M.
ModuleVector pad(const ModuleVector& z, const MarkedModule& M);

std::pair<MarkedComplex, StrictifyCert> make_surjective(const MarkedComplex& D, const ModuleVector& z);
std::pair<MarkedComplex, StrictifyCert> strictify_complex(const MarkedComplex& D,
                                                          const std::optional<ModuleVector>& z = std::nullopt);
std::tuple<MarkedComplex, ChainMap, StrictifyCert> strictify_map(const ChainMap& f, const MarkedComplex& C,
                                                                 const MarkedComplex& D);

// The chain map D -> D^ putting each D_r as the leading summands.
ChainMap leading_inclusion(const MarkedComplex& D, const MarkedComplex& Dhat);
// Witness with ambient D^, parameters measured and rounded up to strict inequalities.
GHWitness measured_witness(const MarkedComplex& D, const MarkedComplex& Dhat);

}  // namespace torgrad
