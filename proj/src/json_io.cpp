#include "torgrad/json_io.hpp"

#include <deque>

namespace torgrad {

namespace {

int get_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw ConfigError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

std::vector<std::vector<int>> int_rows(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<int>> r;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError(std::string(what) + " must be an array of arrays");
    std::vector<int> v;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw ConfigError(std::string(what) + " entries must be integers");
      v.push_back(x.get<int>());
    }
    r.push_back(v);
  }
  return r;
}

}  // namespace

FinitePresentation presentation_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("group must be an object");
  if (j.contains("family")) {
    std::string f = j["family"].get<std::string>();
    if (f == "Z") return presentation_Z();
    if (f == "free") return presentation_free(get_int(j, "rank"));
    if (f == "surface") return presentation_surface(get_int(j, "genus"));
    if (f == "Zd") return presentation_Zd(get_int(j, "rank"));
    throw ConfigError("unknown group family: " + f);
  }
  FinitePresentation p;
  p.generators = get_int(j, "generators");
  if (p.generators < 1 || p.generators > 26) throw ConfigError("generators must lie in 1..26");
  if (j.contains("relators")) {
    for (const auto& r : j["relators"]) {
      if (!r.is_string()) throw ConfigError("relators must be strings");
      p.relators.push_back(parse_word(r.get<std::string>(), p.generators));
    }
  }
  return p;
}

json presentation_to_json(const FinitePresentation& p) {
  json r = json::array();
  for (const auto& w : p.relators) r.push_back(format_word(w));
  return {{"generators", p.generators}, {"relators", r}};
}

QuotientPtr quotient_from_json(const json& j, const FinitePresentation& pres) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("quotient needs a 'kind'");
  std::string kind = j["kind"].get<std::string>();
  QuotientPtr q;
  if (kind == "abelian") {
    if (!j.contains("moduli")) throw ConfigError("abelian quotient needs 'moduli'");
    std::vector<int> moduli = j["moduli"].get<std::vector<int>>();
    std::vector<std::vector<int>> images;
    if (j.contains("images")) {
      images = int_rows(j["images"], "images");
    } else {
      // generator k goes to the k-th coordinate vector, surplus generators to 0
      if (static_cast<int>(moduli.size()) > pres.generators)
        throw ConfigError("more moduli than generators; supply 'images'");
      images.assign(pres.generators, std::vector<int>(moduli.size(), 0));
      for (size_t k = 0; k < moduli.size(); ++k) images[k][k] = 1;
    }
    if (static_cast<int>(images.size()) != pres.generators) throw ConfigError("need one image per generator");
    q = abelian_quotient_images(moduli, images);
  } else if (kind == "permutation") {
    auto images = int_rows(j.at("images"), "images");
    if (j.contains("degree"))
      for (const auto& img : images)
        if (static_cast<int>(img.size()) != j["degree"].get<int>()) throw ConfigError("permutation length differs from degree");
    q = permutation_quotient(pres, images);
  } else {
    throw ConfigError("unknown quotient kind: " + kind);
  }
  q->verify_relators(pres);
  return q;
}

LevelData make_level_data(const json& group, const json& quotient, int64_t p) {
  LevelData L;
  L.group = group;
  L.quotient = quotient;
  L.p = p;
  L.pres = presentation_from_json(group);
  L.level = make_level(quotient_from_json(quotient, L.pres), p);
  return L;
}

LevelData level_from_json(const json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("quotient"))
    throw ConfigError("level needs 'group' and 'quotient'");
  return make_level_data(j["group"], j["quotient"], j.value("p", 0));
}

json level_to_json(const LevelData& L) { return {{"group", L.group}, {"quotient", L.quotient}, {"p", L.p}}; }

std::vector<Word> element_words(const FiniteQuotient& q) {
  std::vector<Word> w(q.order());
  std::vector<char> seen(q.order(), 0);
  std::deque<int> todo{q.identity()};
  seen[q.identity()] = 1;
  const auto& gens = q.generator_images();
  while (!todo.empty()) {
    int x = todo.front();
    todo.pop_front();
    for (int s = 0; s < static_cast<int>(gens.size()); ++s)
      for (int sign : {1, -1}) {
        int y = q.mul(x, sign == 1 ? gens[s] : q.inv(gens[s]));
        if (seen[y]) continue;
        seen[y] = 1;
        w[y] = w[x] * Word::gen(s, sign);
        todo.push_back(y);
      }
  }
  return w;
}

json carrier_to_json(const Carrier& c) { return c.points(); }

Carrier carrier_from_json(const json& j, int n) {
  if (!j.is_array()) throw ConfigError("carrier must be an array of points");
  Carrier c(n);
  for (const auto& x : j) {
    int v = x.get<int>();
    if (v < 0 || v >= n) throw ConfigError("carrier point out of range");
    c.set(v);
  }
  return c;
}

json module_to_json(const MarkedModule& M) {
  json c = json::array();
  for (const auto& A : M.carriers) c.push_back(carrier_to_json(A));
  return {{"carriers", c}};
}

MarkedModule module_from_json(const json& j, const Level& L) {
  MarkedModule M{L, {}};
  for (const auto& c : j.at("carriers")) M.carriers.push_back(carrier_from_json(c, L->n()));
  return M;
}

json morphism_to_json(const MarkedMorphism& f) {
  const FiniteQuotient& q = *f.level()->q;
  auto words = element_words(q);
  json rows = json::array();
  for (int i = 0; i < f.dom().rank(); ++i) {
    json row = json::array();
    for (int j = 0; j < f.cod().rank(); ++j) {
      json terms = json::array();
      for (const auto& [g, fg] : f.entry(i, j).columns()) {
        json coeffs = json::array();
        for (int x = 0; x < static_cast<int>(fg.size()); ++x)
          if (fg[x]) coeffs.push_back({x, fg[x]});
        terms.push_back({{"word", format_word(words[g])}, {"coeffs", coeffs}});
      }
      row.push_back(terms);
    }
    rows.push_back(row);
  }
  return {{"domain", module_to_json(f.dom())}, {"codomain", module_to_json(f.cod())}, {"entries", rows}};
}

MarkedMorphism morphism_from_json(const json& j, const Level& L) {
  MarkedModule dom = module_from_json(j.at("domain"), L), cod = module_from_json(j.at("codomain"), L);
  const json& e = j.at("entries");
  if (static_cast<int>(e.size()) != dom.rank()) throw ConfigError("entries need one row per domain summand");
  int gens = L->q->num_generators();
  std::vector<std::vector<CrossedElt>> entries(dom.rank(), std::vector<CrossedElt>(cod.rank(), CrossedElt(L)));
  for (int i = 0; i < dom.rank(); ++i) {
    if (static_cast<int>(e[i].size()) != cod.rank()) throw ConfigError("entries need one column per codomain summand");
    for (int k = 0; k < cod.rank(); ++k)
      for (const auto& t : e[i][k]) {
        int g = L->q->evaluate(parse_word(t.at("word").get<std::string>(), gens));
        for (const auto& c : t.at("coeffs")) {
          int x = c.at(0).get<int>();
          if (x < 0 || x >= L->n()) throw ConfigError("coefficient point out of range");
          entries[i][k].add_at(g, x, c.at(1).get<int64_t>());
        }
      }
  }
  return MarkedMorphism(dom, cod, entries);
}

json complex_to_json(const MarkedComplex& D) {
  json mods = json::array(), ds = json::array();
  for (const auto& M : D.modules) mods.push_back(module_to_json(M));
  for (const auto& f : D.d) ds.push_back(morphism_to_json(f)["entries"]);
  json r = {{"modules", mods}, {"boundaries", ds}};
  if (D.eta) r["augmentation"] = D.eta->v;
  return r;
}

MarkedComplex complex_from_json(const json& j, const Level& L) {
  MarkedComplex D;
  D.level = L;
  for (const auto& m : j.at("modules")) D.modules.push_back(module_from_json(m, L));
  const json& ds = j.value("boundaries", json::array());
  if (static_cast<int>(ds.size()) != std::max(0, D.top())) throw ConfigError("need one boundary per positive degree");
  for (int r = 1; r <= D.top(); ++r) {
    json m = {{"domain", module_to_json(D.module(r))}, {"codomain", module_to_json(D.module(r - 1))}, {"entries", ds[r - 1]}};
    D.d.push_back(morphism_from_json(m, L));
  }
  if (j.contains("augmentation")) D.eta = Augmentation{j["augmentation"].get<std::vector<Fn>>()};
  validate(D);
  return D;
}

json morphism_file(const LevelData& L, const MarkedMorphism& f) {
  json j = morphism_to_json(f);
  j["level"] = level_to_json(L);
  return j;
}

std::pair<LevelData, MarkedMorphism> read_morphism_file(const json& j) {
  if (!j.contains("level")) throw ConfigError("morphism file needs a 'level'");
  LevelData L = level_from_json(j["level"]);
  return {L, morphism_from_json(j, L.level)};
}

json matrix_to_json(const IntMatrix& A, bool sparse) {
  if (sparse) {
    json e = json::array();
    for (int r = 0; r < A.rows; ++r)
      for (const auto& [c, v] : A.data[r]) e.push_back({r, c, v});
    return {{"format", "coo"}, {"rows", A.rows}, {"cols", A.cols}, {"entries", e}};
  }
  json d = json::array();
  for (int r = 0; r < A.rows; ++r) {
    std::vector<int64_t> row(A.cols, 0);
    for (const auto& [c, v] : A.data[r]) row[c] = v;
    d.push_back(row);
  }
  return {{"format", "dense"}, {"rows", A.rows}, {"cols", A.cols}, {"data", d}};
}

IntMatrix matrix_from_json(const json& j) {
  std::string f = j.value("format", "dense");
  if (f == "dense") return IntMatrix::dense(j.at("data").get<std::vector<std::vector<int64_t>>>(), j.value("cols", -1));
  if (f != "coo") throw ConfigError("unknown matrix format: " + f);
  IntMatrix A(j.at("rows").get<int>(), j.at("cols").get<int>());
  for (const auto& e : j.at("entries")) {
    int r = e.at(0).get<int>(), c = e.at(1).get<int>();
    if (r < 0 || r >= A.rows || c < 0 || c >= A.cols) throw ConfigError("matrix entry out of range");
    A.add(r, c, e.at(2).get<int64_t>());
  }
  return A;
}

json rational_to_json(const Rational& r) { return r.get_str(); }

json lognorm_cert_to_json(const LognormCert& c) {
  json blocks = json::array();
  for (size_t k = 0; k < c.blocks.size(); ++k) {
    const BlockCert& b = c.blocks[k];
    json pieces = json::array();
    for (const auto& p : c.decomposition.blocks[k]) pieces.push_back(carrier_to_json(p));
    blocks.push_back({{"pieces", pieces},
                      {"dim", rational_to_json(b.dim)},
                      {"rank", rational_to_json(b.rank)},
                      {"norm", b.norm},
                      {"branch", b.rank_branch ? "rank" : "dim"},
                      {"value", b.value}});
  }
  return {{"strategy", c.strategy}, {"value", c.value}, {"blocks", blocks}};
}

json strictify_cert_to_json(const StrictifyCert& c) {
  auto rats = [](const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rational_to_json(x));
    return a;
  };
  json E = json::array();
  for (const auto& M : c.E) E.push_back(module_to_json(M)["carriers"]);
  return {{"error_carriers", E},
          {"dim_growth", rats(c.dim_growth)},
          {"surjectivity_growth", rational_to_json(c.surjectivity_growth)},
          {"total_growth", rational_to_json(c.total_growth)},
          {"delta", rats(c.delta)},
          {"carried", rats(c.carried)},
          {"display_bound", rats(c.display_bound)},
          {"bound", rats(c.bound)},
          {"inclusion_defect", rats(c.inclusion_defect)},
          {"witness", {{"delta", rational_to_json(c.witness.delta)}, {"K", c.witness.K}}}};
}

}  // namespace torgrad
