#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torgrad/constructions.hpp"
#include "torgrad/json_io.hpp"
#include "torgrad/lognorm.hpp"

namespace torgrad {

enum class Embedding { none, induced, rokhlin, cheap };

struct ExperimentConfig {
  json group;
  FinitePresentation pres;
  ResolutionData res;
  int max_degree = 0;            // highest degree the resolution computes correctly
  std::vector<json> chain;       // quotient specs in chain order
  int64_t p = 0;                 // 0: integer coefficients only
  std::vector<int> degrees;
  Embedding embedding = Embedding::none;
  int tile = 2;                  // rokhlin
  Rational eps = frac(1, 4);     // cheap
  Strategy strategy = Strategy::atoms;
  std::string output;            // CSV path; the JSON goes next to it
};

ResolutionData resolution_for(const json& group, int* max_degree = nullptr);
ExperimentConfig parse_config(const json& j);

struct GradientRow {
  int level = 0;
  std::string quotient;
  int order = 0;
  int degree = 0;
  int betti_q = 0;
  std::optional<int> betti_p;
  double logtors = 0;
  std::vector<mpz_class> torsion;
  bool bounded = false;
  Rational dim_upper;        // dim(D_n)
  double lognorm_upper = 0;  // lognorm upper bound of ∂_{n+1}
  Rational betti_bound;      // |G| dim(D_n)
  double logtors_bound = 0;  // log#tors of coker ∂_{n+1} after coinvariants
  double lognorm_bound = 0;  // |G| lognorm_upper
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct GradientTable {
  std::vector<GradientRow> rows;
  bool ok() const;
};

GradientTable run_gradient(const ExperimentConfig& cfg);
const std::vector<std::string>& gradient_columns();
std::string gradient_csv(const GradientTable& t);
json gradient_json(const GradientTable& t);
// Twelve significant digits.
std::string fmt_double(double x);

struct VerifyReport {
  std::string suite;
  int trials = 0;
  int passed = 0;
  std::vector<json> failures;  // at most a handful are kept
  bool ok() const { return passed == trials; }
  json to_json() const;
};

const std::vector<std::string>& verify_suites();
VerifyReport run_verify(const std::string& suite, int trials, uint64_t seed);

}  // namespace torgrad
