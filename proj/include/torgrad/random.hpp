#pragma once

#include <random>
#include <vector>

#include "torgrad/discretize.hpp"
#include "torgrad/json_io.hpp"

namespace torgrad {

using Rng = std::mt19937_64;

// Small levels of order <= max_order drawn from a fixed menu of groups and quotients.
std::vector<LevelData> level_menu(int max_order, int64_t p = 0);
LevelData random_level(Rng& rng, int max_order, int64_t p = 0);

Carrier random_carrier(Rng& rng, int n, double density = 0.5);
MarkedModule random_module(Rng& rng, const Level& L, int rank);
// Each entry uses at most max_terms group elements with values in [-c, c].
MarkedMorphism random_morphism(Rng& rng, const MarkedModule& dom, const MarkedModule& cod, int max_terms = 4,
                               int64_t c = 3);
MarkedMorphism random_morphism(Rng& rng, const Level& L, int max_rank = 3, int max_terms = 4, int64_t c = 3);
// An element of M: columns g with coefficient functions supported in g A_i.
ModuleVector random_vector(Rng& rng, const MarkedModule& M, int max_terms = 4, int64_t c = 5);
IntMatrix random_int_matrix(Rng& rng, int max_rows = 8, int max_cols = 8, int64_t c = 9);

int uniform(Rng& rng, int lo, int hi);

}  // namespace torgrad
