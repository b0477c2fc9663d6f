#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "torgrad/constructions.hpp"
#include "torgrad/json_io.hpp"
#include "torgrad/lognorm.hpp"
#include "torgrad/pipeline.hpp"
#include "torgrad/strictify.hpp"

using namespace torgrad;

namespace {

constexpr int kOk = 0, kConfig = 1, kFailed = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string sibling_json(const std::string& path) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ".json";
  return path + ".json";
}

int cmd_gradient(const std::string& config) {
  ExperimentConfig cfg = parse_config(read_json(config));
  GradientTable t = run_gradient(cfg);
  std::string csv = gradient_csv(t);
  std::cout << csv;
  if (!cfg.output.empty()) {
    write_file(cfg.output, csv);
    write_file(sibling_json(cfg.output), gradient_json(t).dump(2) + "\n");
  }
  if (!t.ok()) {
    for (const auto& r : t.rows)
      for (const auto& f : r.failures)
        std::cerr << "level " << r.level << " degree " << r.degree << ": " << f << "\n";
    return kFailed;
  }
  return kOk;
}

int cmd_verify(const std::string& suite, int trials, uint64_t seed) {
  std::vector<std::string> suites = suite == "all" ? verify_suites() : std::vector<std::string>{suite};
  bool ok = true;
  for (const auto& s : suites) {
    VerifyReport r = run_verify(s, trials, seed);
    std::cout << s << ": " << r.passed << "/" << r.trials << " passed\n";
    if (!r.ok()) {
      ok = false;
      for (const auto& f : r.failures) std::cout << f.dump() << "\n";
    }
  }
  return ok ? kOk : kFailed;
}

void print_ledger(const Ledger& L) {
  for (const auto& [name, pass] : L.checks) std::cout << "  [" << (pass ? "ok" : "FAIL") << "] " << name << "\n";
}

int cmd_rokhlin(int M, int N, bool embedding) {
  if (N < 2 || M < N) throw ConfigError("need modulus >= tile >= 2");
  IntegersResolution R = integers_dyn_resolution(M, N);
  const RokhlinTower& T = R.tower;
  std::cout << "tower M=" << M << " N=" << N << " q=" << T.q << "\n";
  std::cout << "  A exponents:";
  for (long e : T.A_exponents) std::cout << " " << e;
  std::cout << "\n  B exponents:";
  for (long e : T.B_exponents) std::cout << " " << e;
  std::cout << "\n  mu(A)=" << T.A.measure() << " mu(B)=" << T.B.measure()
            << " partition " << (T.partition_ok ? "ok" : "FAIL") << "\n";
  std::cout << "dims: D0=" << R.D.module(0).dim() << " D1=" << R.D.module(1).dim() << " bound=" << R.dim_bound
            << "\n|d1|=" << R.d1_norm << "\nresolution identities:\n";
  print_ledger(R.ledger);
  bool ok = R.ledger.all() && T.partition_ok;
  if (embedding) {
    IntegersEmbedding E = integers_embedding(M, N);
    std::cout << "norms: |f0|=" << E.norm_f0 << " |f1|=" << E.norm_f1 << " |r0|=" << E.norm_r0 << " |r1|=" << E.norm_r1
              << " (<= " << N << ") |h0|=" << E.norm_h0 << " (<= " << N * N << ")\nembedding identities:\n";
    print_ledger(E.ledger);
    ok = ok && E.ledger.all();
  }
  return ok ? kOk : kFailed;
}

int cmd_lognorm(const std::string& input, const std::string& strategy, int cap) {
  auto [L, f] = read_morphism_file(read_json(input));
  json out;
  if (strategy == "exact") {
    out = {{"strategy", "exact"}, {"value", lognorm_exact(f, cap)}};
  } else {
    LognormCert c = lognorm_upper(f, parse_strategy(strategy));
    out = lognorm_cert_to_json(c);
  }
  std::cout << fmt_double(out["value"].get<double>()) << "\n" << out.dump(2) << "\n";
  return kOk;
}

int cmd_strictify_demo(int modulus, uint64_t seed) {
  if (modulus < 1) throw ConfigError("modulus must be positive");
  Level L = make_level(abelian_quotient(1, {modulus}));
  MarkedComplex D = induce_resolution(resolution_Z(), L);
  ModuleVector z = ModuleVector::basis(D.module(0), 0);
  std::mt19937_64 rng(seed);
  int u = std::uniform_int_distribution<int>(0, modulus - 1)(rng);
  auto e = D.boundary(1).entries();
  e[0][0].add_at(0, u, 1);
  D.d[0] = MarkedMorphism(D.module(1), D.module(0), e);
  DefectReport in = defect_report(D, z);
  auto [S, cert] = strictify_complex(D, z);
  DefectReport outrep = defect_report(S, cert.z_hat);
  std::cout << "perturbed atom " << u << " of d1 at Z/" << modulus << "\n";
  std::cout << "input defect delta=" << in.overall << "\n";
  for (size_t r = 0; r < cert.delta.size(); ++r)
    std::cout << "degree " << r << ": delta=" << cert.delta[r] << " dim E=" << cert.dim_growth[r]
              << " inclusion defect=" << cert.inclusion_defect[r + 1] << " bound=" << cert.bound[r] << "\n";
  GHCheck gh = gh_verify(cert.witness, D, S);
  std::cout << "output strict: " << (outrep.strict() ? "yes" : "no") << "\nwitness delta=" << cert.witness.delta
            << " K=" << cert.witness.K << " verifies: " << (gh.ok ? "yes" : "no") << "\n";
  std::cout << strictify_cert_to_json(cert).dump(2) << "\n";
  return outrep.strict() && gh.ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsion and Betti gradient toolkit"};
  app.require_subcommand(1);

  std::string config;
  auto* grad = app.add_subcommand("gradient", "Betti and torsion table along a quotient chain");
  grad->add_option("--config", config, "experiment JSON")->required();

  std::string suite;
  int trials = 100;
  uint64_t seed = 1;
  auto* ver = app.add_subcommand("verify", "seeded property suite");
  ver->add_option("suite", suite, "opnorm|gabber|strictify|rokhlin|lognorm|retract|all")->required();
  ver->add_option("--trials", trials, "number of trials");
  ver->add_option("--seed", seed, "random seed");

  int modulus = 0, tile = 0;
  bool embedding = false;
  auto* rok = app.add_subcommand("rokhlin", "integers Rokhlin resolution ledger");
  rok->add_option("--modulus", modulus, "M")->required();
  rok->add_option("--tile", tile, "N")->required();
  rok->add_flag("--embedding", embedding, "also check chain maps and the homotopy");

  std::string input, strategy = "atoms";
  int cap = 12;
  auto* ln = app.add_subcommand("lognorm", "lognorm of a morphism file");
  ln->add_option("--input", input, "morphism JSON")->required();
  ln->add_option("--strategy", strategy, "atoms|greedy|exact|block");
  ln->add_option("--cap", cap, "atom cap for exact");

  int demo_mod = 8;
  uint64_t demo_seed = 1;
  auto* sd = app.add_subcommand("strictify-demo", "strictify a one-atom perturbation");
  sd->add_option("--modulus", demo_mod, "order of the cyclic level");
  sd->add_option("--seed", demo_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*grad) return cmd_gradient(config);
    if (*ver) return cmd_verify(suite, trials, seed);
    if (*rok) return cmd_rokhlin(modulus, tile, embedding);
    if (*ln) return cmd_lognorm(input, strategy, cap);
    if (*sd) return cmd_strictify_demo(demo_mod, demo_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const OrderCapExceeded& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const RelatorViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const CapExceeded& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
