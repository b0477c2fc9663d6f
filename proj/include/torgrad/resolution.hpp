#pragma once

#include <string>
#include <vector>

#include "torgrad/groups.hpp"

namespace torgrad {

// A free ZΓ-resolution of Z truncated at its top degree.
// boundary[r-1][i][j] is the coefficient of e_j in d_r(e_i) (right multiplication).
struct ResolutionData {
  std::string name;
  FinitePresentation presentation;
  std::vector<int> ranks;
  std::vector<std::vector<std::vector<GroupRingElt>>> boundary;

  int length() const { return static_cast<int>(ranks.size()) - 1; }
  int rank(int r) const { return r >= 0 && r <= length() ? ranks[r] : 0; }
  const std::vector<std::vector<GroupRingElt>>& d(int r) const { return boundary.at(r - 1); }
};

}  // namespace torgrad
