#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torgrad/crossring.hpp"
#include "torgrad/discretize.hpp"

namespace torgrad {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double log_plus(double x);

// blocks[k][i] is the piece of carrier A_i placed in block M_k.
struct Decomposition {
  std::vector<std::vector<Carrier>> blocks;
};

void validate_decomposition(const MarkedModule& M, const Decomposition& D);
Decomposition atom_decomposition(const MarkedModule& M);
Decomposition single_block(const MarkedModule& M);

struct BlockCert {
  Rational dim;
  Rational rank;
  int64_t norm = 0;
  bool rank_branch = false;
  double value = 0;
};

struct LognormCert {
  std::string strategy;
  Decomposition decomposition;
  std::vector<BlockCert> blocks;
  double value = 0;
};

LognormCert lognorm_of_decomposition(const MarkedMorphism& f, const Decomposition& D);

enum class Strategy { atoms, greedy, block };
Strategy parse_strategy(const std::string& s);
LognormCert lognorm_upper(const MarkedMorphism& f, Strategy s = Strategy::atoms);
// Minimum over all groupings of atoms; refuses more than cap atoms.
double lognorm_exact(const MarkedMorphism& f, int cap = 12);

double gabber_column_bound(const IntMatrix& A);

struct SplitBlock {
  std::vector<int> cols;
  std::optional<std::vector<int>> rows;
};

std::vector<SplitBlock> trivial_split(const IntMatrix& A);
double gabber_split_bound(const IntMatrix& A, const std::vector<SplitBlock>& blocks);

}  // namespace torgrad
