#include "torgrad/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "torgrad/random.hpp"
#include "torgrad/strictify.hpp"

namespace torgrad {

ResolutionData resolution_for(const json& group, int* max_degree) {
  int top = std::numeric_limits<int>::max();
  ResolutionData C;
  if (group.contains("family")) {
    std::string f = group["family"].get<std::string>();
    auto num = [&](const char* k) {
      if (!group.contains(k) || !group[k].is_number_integer()) throw ConfigError(std::string("group needs '") + k + "'");
      return group[k].get<int>();
    };
    if (f == "Z") C = resolution_Z();
    else if (f == "free") C = resolution_free(num("rank"));
    else if (f == "surface") C = resolution_surface(num("genus"));
    else if (f == "Zd") C = resolution_Zd(num("rank"));
    else throw ConfigError("unknown group family: " + f);
  } else {
    C = resolution_presentation(presentation_from_json(group));
    top = 1;
  }
  if (max_degree) *max_degree = top;
  return C;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("group")) throw ConfigError("config needs 'group'");
  c.group = j["group"];
  c.pres = presentation_from_json(c.group);
  c.res = resolution_for(c.group, &c.max_degree);

  if (j.contains("coefficients")) {
    const json& k = j["coefficients"];
    std::string ring = k.is_string() ? k.get<std::string>() : k.value("ring", "Z");
    if (ring == "Z") {
      c.p = 0;
    } else if (ring == "Fp" || (ring.size() > 1 && ring[0] == 'F')) {
      c.p = ring == "Fp" ? k.value("p", 0) : std::stoll(ring.substr(1));
      if (c.p < 2) throw ConfigError("field characteristic must be a prime");
      for (int64_t d = 2; d * d <= c.p; ++d)
        if (c.p % d == 0) throw ConfigError("field characteristic must be a prime");
    } else {
      throw ConfigError("unknown coefficient ring: " + ring);
    }
  }

  if (!j.contains("degrees") || !j["degrees"].is_array() || j["degrees"].empty())
    throw ConfigError("config needs a non-empty 'degrees' array");
  for (const auto& d : j["degrees"]) {
    if (!d.is_number_integer() || d.get<int>() < 0) throw ConfigError("degrees must be non-negative integers");
    if (d.get<int>() > c.max_degree) throw ConfigError("degree " + d.dump() + " lies beyond the resolution range");
    c.degrees.push_back(d.get<int>());
  }

  if (!j.contains("chain") || !j["chain"].is_array() || j["chain"].empty())
    throw ConfigError("config needs a non-empty 'chain' array");
  std::vector<QuotientPtr> qs;
  for (const auto& q : j["chain"]) {
    c.chain.push_back(q);
    qs.push_back(quotient_from_json(q, c.pres));
  }
  for (size_t k = 1; k < qs.size(); ++k)
    if (qs[k]->order() <= qs[k - 1]->order()) throw ConfigError("chain orders must increase");

  if (j.contains("embedding")) {
    const json& e = j["embedding"];
    std::string kind = e.is_string() ? e.get<std::string>() : e.value("kind", "none");
    if (kind == "none") c.embedding = Embedding::none;
    else if (kind == "induced") c.embedding = Embedding::induced;
    else if (kind == "rokhlin") c.embedding = Embedding::rokhlin;
    else if (kind == "cheap") c.embedding = Embedding::cheap;
    else throw ConfigError("unknown embedding: " + kind);
    if (e.is_object()) {
      c.tile = e.value("tile", 2);
      if (e.contains("eps")) {
        const json& x = e["eps"];
        if (x.is_string()) {
          try {
            c.eps = Rational(x.get<std::string>());
          } catch (const std::invalid_argument&) {
            throw ConfigError("eps is not a rational: " + x.get<std::string>());
          }
          c.eps.canonicalize();
        } else {
          c.eps = Rational(x.get<double>());
        }
      }
      if (e.contains("strategy")) c.strategy = parse_strategy(e["strategy"].get<std::string>());
    }
    bool cyclic = c.pres.generators == 1 && c.pres.relators.empty();
    if ((c.embedding == Embedding::rokhlin || c.embedding == Embedding::cheap) && !cyclic)
      throw ConfigError("rokhlin and cheap embeddings are available for the integers only");
    if (c.embedding == Embedding::rokhlin && c.tile < 2) throw ConfigError("tile must be at least 2");
    if (c.embedding == Embedding::cheap && c.eps <= 0) throw ConfigError("eps must be positive");
  }
  c.output = j.value("output", "");
  return c;
}

bool GradientTable::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const GradientRow& r) { return r.ok(); });
}

namespace {

std::vector<GradientRow> evaluate_level(const ExperimentConfig& cfg, int k) {
  QuotientPtr q = quotient_from_json(cfg.chain[k], cfg.pres);
  int G = q->order();
  int maxdeg = *std::max_element(cfg.degrees.begin(), cfg.degrees.end());
  int top = std::min(cfg.res.length(), maxdeg + 1);
  ZComplex Z = shapiro_complex(cfg.res, *q, top);

  std::optional<MarkedComplex> D;
  switch (cfg.embedding) {
    case Embedding::none:
      break;
    case Embedding::induced:
      D = induce_resolution(cfg.res, make_level(q), top);
      break;
    case Embedding::rokhlin:
      if (G < cfg.tile)
        throw ConfigError("level of order " + std::to_string(G) + " is shorter than the tile " + std::to_string(cfg.tile));
      D = integers_dyn_resolution(G, cfg.tile).D;
      break;
    case Embedding::cheap:
      D = cheap_embedding_Z(cfg.eps, G).res.D;
      break;
  }

  std::vector<GradientRow> rows;
  for (int n : cfg.degrees) {
    GradientRow r;
    r.level = k;
    r.quotient = q->description();
    r.order = G;
    r.degree = n;
    HomologyResult h = homology(Z, n);
    r.betti_q = h.betti_q;
    r.torsion = h.torsion;
    r.logtors = h.logtors;
    if (cfg.p) r.betti_p = betti_mod_p(Z, n, cfg.p);
    if (D) {
      r.bounded = true;
      RetractReport rep = retract_inequality_check(Z, *D, n);
      r.dim_upper = n <= D->top() ? D->module(n).dim() : Rational(0);
      r.betti_bound = rep.dim_bound;
      r.logtors_bound = rep.logtors_bound;
      r.lognorm_upper = n + 1 <= D->top() ? lognorm_upper(D->boundary(n + 1), cfg.strategy).value : 0.0;
      r.lognorm_bound = G * r.lognorm_upper;
      if (!rep.betti_ok) r.failures.push_back("betti exceeds |G| dim(D_n)");
      if (!rep.torsion_ok) r.failures.push_back("logtors exceeds the cokernel torsion of the embedding");
      if (r.logtors_bound > r.lognorm_bound + 1e-9) r.failures.push_back("cokernel torsion exceeds |G| lognorm");
      if (r.betti_p && Rational(*r.betti_p) > r.betti_bound) r.failures.push_back("mod-p betti exceeds |G| dim(D_n)");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

std::string torsion_string(const std::vector<mpz_class>& t) {
  std::string s;
  for (size_t k = 0; k < t.size(); ++k) s += (k ? ";" : "") + t[k].get_str();
  return s;
}

}  // namespace

GradientTable run_gradient(const ExperimentConfig& cfg) {
  std::vector<std::future<std::vector<GradientRow>>> jobs;
  for (int k = 0; k < static_cast<int>(cfg.chain.size()); ++k)
    jobs.push_back(std::async(std::launch::async, evaluate_level, std::cref(cfg), k));
  GradientTable t;
  for (auto& j : jobs) {
    auto rows = j.get();
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  }
  return t;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

const std::vector<std::string>& gradient_columns() {
  static const std::vector<std::string> cols = {
      "level",      "quotient",     "order",         "degree",      "betti_q",       "betti_p",
      "logtors",    "torsion",      "betti_q_norm",  "logtors_norm", "dim_upper",    "lognorm_upper",
      "betti_bound", "logtors_bound", "lognorm_bound", "verdict"};
  return cols;
}

std::string gradient_csv(const GradientTable& t) {
  std::ostringstream o;
  const auto& cols = gradient_columns();
  for (size_t k = 0; k < cols.size(); ++k) o << (k ? "," : "") << cols[k];
  o << "\n";
  for (const auto& r : t.rows) {
    std::vector<std::string> f = {std::to_string(r.level),
                                  csv_field(r.quotient),
                                  std::to_string(r.order),
                                  std::to_string(r.degree),
                                  std::to_string(r.betti_q),
                                  r.betti_p ? std::to_string(*r.betti_p) : "",
                                  fmt_double(r.logtors),
                                  torsion_string(r.torsion),
                                  fmt_double(static_cast<double>(r.betti_q) / r.order),
                                  fmt_double(r.logtors / r.order)};
    if (r.bounded) {
      f.insert(f.end(), {r.dim_upper.get_str(), fmt_double(r.lognorm_upper), r.betti_bound.get_str(),
                         fmt_double(r.logtors_bound), fmt_double(r.lognorm_bound), r.ok() ? "pass" : "fail"});
    } else {
      f.insert(f.end(), {"", "", "", "", "", "n/a"});
    }
    for (size_t k = 0; k < f.size(); ++k) o << (k ? "," : "") << f[k];
    o << "\n";
  }
  return o.str();
}

json gradient_json(const GradientTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json x = {{"level", r.level},
              {"quotient", r.quotient},
              {"order", r.order},
              {"degree", r.degree},
              {"betti_q", r.betti_q},
              {"logtors", r.logtors},
              {"torsion", torsion_string(r.torsion)},
              {"betti_q_norm", static_cast<double>(r.betti_q) / r.order},
              {"logtors_norm", r.logtors / r.order}};
    x["betti_p"] = r.betti_p ? json(*r.betti_p) : json(nullptr);
    if (r.bounded) {
      x["dim_upper"] = r.dim_upper.get_str();
      x["lognorm_upper"] = r.lognorm_upper;
      x["betti_bound"] = r.betti_bound.get_str();
      x["logtors_bound"] = r.logtors_bound;
      x["lognorm_bound"] = r.lognorm_bound;
      x["verdict"] = r.ok() ? "pass" : "fail";
      x["failures"] = r.failures;
    } else {
      x["verdict"] = "n/a";
    }
    rows.push_back(x);
  }
  return {{"columns", gradient_columns()}, {"rows", rows}, {"ok", t.ok()}};
}

json VerifyReport::to_json() const {
  return {{"suite", suite}, {"trials", trials}, {"passed", passed}, {"failures", failures}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s = {"opnorm", "gabber", "strictify", "rokhlin", "lognorm", "retract"};
  return s;
}

namespace {

constexpr size_t kKeptFailures = 5;

void record(VerifyReport& rep, bool ok, const std::function<json()>& describe) {
  if (ok) {
    ++rep.passed;
  } else if (rep.failures.size() < kKeptFailures) {
    rep.failures.push_back(describe());
  }
}

// Largest ℓ¹ ratio over the atoms χ_{u} e_i.
Rational atom_max_ratio(const MarkedMorphism& f) {
  const Level& L = f.level();
  Rational best = 0;
  for (int i = 0; i < f.dom().rank(); ++i)
    for (int u : f.dom().carriers[i].points()) {
      ModuleVector x = ModuleVector::zero(f.dom());
      x.comps[i] = CrossedElt::chi(L, Carrier::of(L->n(), {u}), 0);
      Rational r = l1_norm(morphism_apply(f, x)) / l1_norm(x);
      best = std::max(best, r);
    }
  return best;
}

void suite_opnorm(VerifyReport& rep, Rng& rng) {
  for (int t = 0; t < rep.trials; ++t) {
    LevelData L = random_level(rng, 8);
    MarkedMorphism f = random_morphism(rng, L.level, 3, 4);
    int64_t k = op_norm(f);
    Rational brute = atom_max_ratio(f);
    bool ok = brute == k;
    for (int s = 0; s < 1000 && ok; ++s) {
      ModuleVector x = random_vector(rng, f.dom());
      Rational nx = l1_norm(x);
      if (nx == 0) continue;
      ok = l1_norm(morphism_apply(f, x)) <= k * nx;
    }
    record(rep, ok, [&] { return json{{"morphism", morphism_file(L, f)}, {"op_norm", k}, {"brute", brute.get_str()}}; });
  }
}

void suite_gabber(VerifyReport& rep, Rng& rng) {
  for (int t = 0; t < rep.trials; ++t) {
    IntMatrix A = random_int_matrix(rng, 8, 8, 9);
    double exact = log_torsion(smith_normal_form(A).torsion());
    double col = gabber_column_bound(A);
    double split = gabber_split_bound(A, trivial_split(A));
    bool ok = exact <= col + 1e-9 && col <= split + 1e-9;
    record(rep, ok, [&] {
      return json{{"matrix", matrix_to_json(A, false)}, {"logtors", exact}, {"column_bound", col}, {"split_bound", split}};
    });
  }
}

// The induced resolution truncated at degree <= 2, with the witness z = e_0.
std::pair<MarkedComplex, ModuleVector> strict_base(const LevelData& L) {
  ResolutionData C = resolution_for(L.group);
  MarkedComplex D = induce_resolution(C, L.level, std::min(C.length(), 2));
  ModuleVector z = ModuleVector::basis(D.module(0), 0);
  return {D, z};
}

// Adds one random term c·(δ_u, g) to entry (i, j) of ∂_r.
MarkedMorphism perturb_atom(Rng& rng, const MarkedMorphism& f, int* atom_row = nullptr) {
  const Level& L = f.level();
  int n = L->n();
  auto e = f.entries();
  for (int tries = 0; tries < 64; ++tries) {
    int i = uniform(rng, 0, f.dom().rank() - 1), j = uniform(rng, 0, f.cod().rank() - 1);
    auto pts = f.dom().carriers[i].points();
    if (pts.empty()) continue;
    int u = pts[uniform(rng, 0, static_cast<int>(pts.size()) - 1)];
    int g = uniform(rng, 0, n - 1);
    if (!f.cod().carriers[j].translate(*L->q, g).has(u)) continue;
    int64_t c = uniform(rng, 1, 3) * (uniform(rng, 0, 1) ? 1 : -1);
    e[i][j].add_at(g, u, c);
    if (atom_row) *atom_row = i;
    return MarkedMorphism(f.dom(), f.cod(), e);
  }
  return f;
}

void suite_strictify(VerifyReport& rep, Rng& rng) {
  for (int t = 0; t < rep.trials; ++t) {
    LevelData L = random_level(rng, 8);
    auto [D, z] = strict_base(L);
    int top = D.top();
    int n = L.level->n();
    MarkedComplex P = D;
    DefectReport in;
    for (int tries = 0; tries < 32 && in.overall == 0; ++tries) {
      P.d[top - 1] = perturb_atom(rng, D.boundary(top));
      in = defect_report(P, z);
    }
    std::vector<std::string> why;
    if (in.overall > frac(1, n)) why.push_back("perturbation exceeds 1/|G|");
    auto [S, cert] = strictify_complex(P, z);
    if (!defect_report(S, cert.z_hat).strict()) why.push_back("output not strict");
    for (int r = 0; r < top; ++r) {
      MorphismStats ms = morphism_stats(P.boundary(r + 1));
      Rational proof_bound = (1 + P.module(r + 1).rank() * ms.N1_underline) * in.overall;
      if (cert.inclusion_defect[r + 1] > cert.bound[r] || cert.inclusion_defect[r + 1] > proof_bound)
        why.push_back("inclusion defect above bound in degree " + std::to_string(r + 1));
      if (cert.inclusion_defect[r + 1] != cert.dim_growth[r]) why.push_back("inclusion defect differs from dim E");
    }
    if (!gh_verify(cert.witness, P, S).ok) why.push_back("GH witness fails");
    if (!(strictify_complex(D, z).first == D)) why.push_back("strict input changed");

    // Strictify a one-atom perturbation of the identity chain map D -> D.
    ChainMap f = identity_map(D);
    int r = uniform(rng, 0, top);
    f[r] = perturb_atom(rng, f[r]);
    auto [H, fh, mc] = strictify_map(f, D, D);
    auto eps = check_chain_map(fh, D, H);
    if (!std::all_of(eps.begin(), eps.end(), [](const Rational& x) { return x == 0; }))
      why.push_back("strictified map is not a chain map");
    if (!defect_report(H).strict()) why.push_back("map target not strict");
    for (int s = 0; s <= top; ++s)
      if (op_norm(fh[s]) > op_norm(f[s]) + 1) why.push_back("map norm grew by more than 1");
    record(rep, why.empty(), [&] {
      return json{{"level", level_to_json(L)}, {"complex", complex_to_json(P)}, {"reasons", why}};
    });
  }
}

void suite_rokhlin(VerifyReport& rep, Rng& rng) {
  static const std::vector<std::pair<int, int>> fixed = {{6, 2}, {7, 2}, {12, 4}, {100, 10}, {12, 3}, {3, 3}};
  for (int t = 0; t < rep.trials; ++t) {
    int M, N;
    if (t < static_cast<int>(fixed.size())) {
      std::tie(M, N) = fixed[t];
    } else {
      M = uniform(rng, 2, 60);
      N = uniform(rng, 2, std::max(2, std::min(M, 12)));
      if (N > M) N = M;
    }
    IntegersEmbedding E = integers_embedding(M, N);
    bool ok = E.res.ledger.all() && E.ledger.all();
    record(rep, ok, [&] {
      json bad = json::array();
      for (const auto& [name, pass] : E.res.ledger.checks)
        if (!pass) bad.push_back(name);
      for (const auto& [name, pass] : E.ledger.checks)
        if (!pass) bad.push_back(name);
      return json{{"M", M}, {"N", N}, {"failed", bad}};
    });
  }
}

void suite_lognorm(VerifyReport& rep, Rng& rng) {
  const double tol = 1e-12;
  for (int t = 0; t < rep.trials; ++t) {
    LevelData L = random_level(rng, 4);
    const Level& lv = L.level;
    MarkedMorphism f;
    do {
      f = random_morphism(rng, lv, 2, 3);
    } while (f.dom().dim() * lv->n() > 10);
    std::vector<std::string> why;
    double ex = lognorm_exact(f);
    double lp = log_plus(static_cast<double>(op_norm(f)));
    for (Strategy s : {Strategy::atoms, Strategy::greedy, Strategy::block})
      if (ex > lognorm_upper(f, s).value + tol) why.push_back("exact above an upper certificate");
    if (ex > std::min(f.dom().dim(), marked_rank(f)).get_d() * lp + tol) why.push_back("dimension estimate fails");

    std::vector<Carrier> P, Q;
    for (const auto& A : f.dom().carriers) {
      Carrier c = random_carrier(rng, lv->n()) & A;
      P.push_back(c);
      Q.push_back(A - c);
    }
    double ep = lognorm_exact(restrict_domain(f, P)), eq = lognorm_exact(restrict_domain(f, Q));
    if (ex > ep + eq + tol) why.push_back("subadditivity fails");
    if (ep > ex + tol) why.push_back("precomposition with an inclusion increased lognorm");

    MarkedModule big = f.cod();
    int at = uniform(rng, 0, big.rank());
    big.carriers.insert(big.carriers.begin() + at, random_carrier(rng, lv->n()));
    std::vector<int> sigma;
    for (int j = 0; j < f.cod().rank(); ++j) sigma.push_back(j < at ? j : j + 1);
    MarkedMorphism jf = compose(marked_inclusion(f.cod(), big, sigma), f);
    if (std::abs(lognorm_exact(jf) - ex) > tol) why.push_back("marked inclusion changed lognorm");

    MarkedMorphism g = perturb_atom(rng, f);
    AlmostEq ae = almost_eq(f, g);
    std::vector<Carrier> M1;
    MarkedMorphism diff = f - g;
    for (int i = 0; i < diff.dom().rank(); ++i) M1.push_back(supp1(diff.row(i), lv->n()));
    int64_t K = std::max(ae.norm_on_difference, op_norm(restrict_domain(f, M1)));
    if (ex > lognorm_exact(g) + ae.delta_min.get_d() * log_plus(static_cast<double>(K)) + tol)
      why.push_back("almost-equality stability fails");
    record(rep, why.empty(), [&] { return json{{"morphism", morphism_file(L, f)}, {"reasons", why}}; });
  }
}

void suite_retract(VerifyReport& rep, Rng& rng) {
  for (int t = 0; t < rep.trials; ++t) {
    std::vector<std::string> why;
    json where;
    if (t % 2 == 0) {
      LevelData L = random_level(rng, 12);
      where = level_to_json(L);
      ResolutionData C = resolution_for(L.group);
      MarkedComplex D = induce_resolution(C, L.level);
      ZComplex Z = shapiro_complex(C, *L.level->q);
      for (int n = 0; n <= C.length(); ++n) {
        RetractReport r = retract_inequality_check(Z, D, n);
        if (!r.ok()) why.push_back("inequality fails in degree " + std::to_string(n));
        if (std::abs(r.logtors - r.logtors_bound) > 1e-9) why.push_back("self-retract torsion not equal");
      }
    } else {
      int M = uniform(rng, 2, 64), N = uniform(rng, 2, std::min(M, 10));
      if (N > M) N = M;
      where = {{"M", M}, {"N", N}};
      MarkedComplex D = integers_dyn_resolution(M, N).D;
      ZComplex Z = shapiro_complex(resolution_Z(), *abelian_quotient(1, {M}));
      for (int n = 0; n <= 1; ++n)
        if (!retract_inequality_check(Z, D, n).ok()) why.push_back("inequality fails in degree " + std::to_string(n));
    }
    record(rep, why.empty(), [&] { return json{{"case", where}, {"reasons", why}}; });
  }
}

}  // namespace

VerifyReport run_verify(const std::string& suite, int trials, uint64_t seed) {
  VerifyReport rep;
  rep.suite = suite;
  rep.trials = trials;
  Rng rng(seed);
  if (suite == "opnorm") suite_opnorm(rep, rng);
  else if (suite == "gabber") suite_gabber(rep, rng);
  else if (suite == "strictify") suite_strictify(rep, rng);
  else if (suite == "rokhlin") suite_rokhlin(rep, rng);
  else if (suite == "lognorm") suite_lognorm(rep, rng);
  else if (suite == "retract") suite_retract(rep, rng);
  else throw ConfigError("unknown verify suite: " + suite);
  return rep;
}

}  // namespace torgrad
