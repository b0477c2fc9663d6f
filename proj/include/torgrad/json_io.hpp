#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "torgrad/complexes.hpp"
#include "torgrad/discretize.hpp"
#include "torgrad/lognorm.hpp"
#include "torgrad/strictify.hpp"

namespace torgrad {

using json = nlohmann::json;

// Accepts {"generators": d, "relators": [...]} or {"family": "free"|"Z"|"surface"|"Zd", ...}.
FinitePresentation presentation_from_json(const json& j);
json presentation_to_json(const FinitePresentation& p);

// {"kind":"abelian","moduli":[...],"images"?:[[...]]} or {"kind":"permutation","degree":m,"images":[[...]]}.
QuotientPtr quotient_from_json(const json& j, const FinitePresentation& pres);

// A level together with the data needed to rebuild it bit for bit.
struct LevelData {
  FinitePresentation pres;
  json group;
  json quotient;
  int64_t p = 0;
  Level level;
};

LevelData level_from_json(const json& j);
json level_to_json(const LevelData& L);
LevelData make_level_data(const json& group, const json& quotient, int64_t p = 0);

// Shortest word for each element, generators tried in order.
std::vector<Word> element_words(const FiniteQuotient& q);

json carrier_to_json(const Carrier& c);
Carrier carrier_from_json(const json& j, int n);
json module_to_json(const MarkedModule& M);
MarkedModule module_from_json(const json& j, const Level& L);
json morphism_to_json(const MarkedMorphism& f);
MarkedMorphism morphism_from_json(const json& j, const Level& L);
json complex_to_json(const MarkedComplex& D);
MarkedComplex complex_from_json(const json& j, const Level& L);

// Morphism file: {"level": ..., "domain": ..., "codomain": ..., "entries": ...}.
json morphism_file(const LevelData& L, const MarkedMorphism& f);
std::pair<LevelData, MarkedMorphism> read_morphism_file(const json& j);

json matrix_to_json(const IntMatrix& A, bool sparse = true);
IntMatrix matrix_from_json(const json& j);

json rational_to_json(const Rational& r);
json lognorm_cert_to_json(const LognormCert& c);
json strictify_cert_to_json(const StrictifyCert& c);

}  // namespace torgrad
