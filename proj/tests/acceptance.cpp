// Acceptance suite: one criterion per line, wall-clock limits enforced.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "syswork/pipeline.hpp"
#include "syswork/simplicial.hpp"
#include "test_models.hpp"

using namespace syswork;

namespace {

constexpr double kMarginTol = 1e-12;    // chain margins may not dip below zero
constexpr double kScaleTol = 1e-6;      // margin drift under metric scaling
constexpr double kEnvelopeTol = 1e-9;   // transference product comparisons
constexpr double kValueTol = 1e-6;      // numeric spot checks

std::string models_dir() { return SYSWORK_MODELS_DIR; }

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

RatMatrix diag(std::vector<Rat> entries) {
  RatMatrix g(entries.size(), entries.size());
  for (size_t i = 0; i < entries.size(); ++i) g.at(i, i) = entries[i];
  return g;
}

// ---- criterion 1: differential and product structure of every bundled model

std::string run_dga_validity() {
  std::vector<CochainModel> models;
  models.push_back(heisenberg_model());
  for (size_t n = 3; n <= 7; ++n) models.push_back(torus_model(n));
  models.push_back(filiform_model(5, {Rat(1), Rat(1), Rat(1)}));
  models.push_back(build_chevalley_eilenberg(
      LieStructure(7, {{0, 1, 6, Rat(1)}, {2, 3, 6, Rat(1)}, {4, 5, 6, Rat(1)}})));
  models.push_back(build_chevalley_eilenberg(LieStructure(7, {{0, 1, 4, Rat(1)},
                                                              {2, 3, 4, Rat(1)},
                                                              {0, 2, 5, Rat(1)},
                                                              {1, 3, 5, Rat(-1)},
                                                              {0, 3, 6, Rat(1)},
                                                              {1, 2, 6, Rat(1)}})));
  models.push_back(load_model_file(models_dir() + "/solv8.json").model);
  models.push_back(build_simplicial_cochains(circle_complex()));
  models.push_back(build_simplicial_cochains(torus7_complex()));
  models.push_back(build_simplicial_cochains(rp2_complex()));
  for (const CochainModel& m : models) {
    ValidityReport v = m.validate();
    expect(v.ok, "model '" + m.name + "' failed validation: " +
                     (v.failures.empty() ? "?" : v.failures.front()));
  }
  CochainModel bad = heisenberg_model();
  bad.d[1].at(0, 0) = Rat(1);
  expect(!bad.validate().ok, "tampered differential slipped through validation");
  std::ostringstream os;
  os << models.size() << " models valid, tampered copy rejected";
  return os.str();
}

// ---- criterion 2: exact benchmark values on the dim-3 nilmanifold

std::string run_heisenberg_exact() {
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  expect(ring.betti_numbers() == std::vector<size_t>{1, 2, 2, 1}, "betti numbers");
  expect(ring.cup_is_zero_on_degree(1), "degree-1 cup products must vanish");

  // triple products of the degree-1 basis classes, frozen coordinates
  struct Row {
    size_t s, t, r;
    long c0, c1;
  };
  const std::vector<Row> table = {{0, 0, 1, -1, 0}, {0, 1, 0, 2, 0},  {0, 1, 1, 0, 1},
                                  {1, 0, 0, -1, 0}, {1, 0, 1, 0, -2}, {1, 1, 0, 0, 1}};
  for (const Row& row : table) {
    MasseyCoset c = massey_triple(ring, ring.basis_class(1, row.s), ring.basis_class(1, row.t),
                                  ring.basis_class(1, row.r));
    expect(c.indet.dim() == 0, "nonzero indeterminacy");
    expect(c.rep.coords == RatVec{Rat(row.c0), Rat(row.c1)}, "frozen triple product changed");
    expect(massey_is_nontrivial(c), "triple product should avoid its indeterminacy");
  }
  for (size_t s : {0, 1}) {
    MasseyCoset c = massey_triple(ring, ring.basis_class(1, s), ring.basis_class(1, s),
                                  ring.basis_class(1, s));
    expect(vec_is_zero(c.rep.coords), "cube triple should contain zero");
  }
  expect(massey_spanning_check(ring, 1).spans, "triple products span the target");

  IntegralityResult i1 =
      integrality_check(ring, massey_triple(ring, ring.basis_class(1, 0), ring.basis_class(1, 0),
                                            ring.basis_class(1, 1)),
                        vec({1, 0}));
  expect(i1.value == -1, "integral pairing of <u,u,v>");
  IntegralityResult i2 =
      integrality_check(ring, massey_triple(ring, ring.basis_class(1, 0), ring.basis_class(1, 1),
                                            ring.basis_class(1, 0)),
                        vec({1, 0}));
  expect(i2.value == 2, "integral pairing of <u,v,u>");
  return "betti, cup, six frozen triples, spanning, integral pairings";
}

// ---- criterion 3: tori refuse every gate they should refuse

std::string run_torus_controls() {
  CochainModel t3 = torus_model(3);
  CohomologyRing r3(t3);
  expect(!r3.cup_is_zero_on_degree(1), "torus cup products do not vanish");
  bool threw = false;
  try {
    massey_triple(r3, r3.basis_class(1, 0), r3.basis_class(1, 1), r3.basis_class(1, 2));
  } catch (const MasseyUndefinedError&) {
    threw = true;
  }
  expect(threw, "triple product must be undefined without vanishing cups");
  expect(!massey_spanning_check(r3, 1).spans, "no spanning without defined triples");
  expect(!check_hypotheses(r3, 1)["all"].get<bool>(), "gate must reject the 3-torus");

  CochainModel t7 = torus_model(7);
  CohomologyRing r7(t7);
  MetricGeometry g7(t7, RatMatrix::identity(7));
  MetricOptions opt;
  threw = false;
  try {
    verify_chain_thm222(r7, g7, opt);
  } catch (const HypothesisError&) {
    threw = true;
  }
  expect(threw, "degree-2 chain must reject the 7-torus");
  return "cup witness, undefined triples, gate refusals";
}

// ---- criterion 4: successive minima against exhaustive enumeration

struct BruteMinima {
  std::vector<Rat> sq;
  size_t box;
};

BruteMinima brute_minima(const RatMatrix& basis, const RatMatrix& gram, int radius) {
  size_t b = basis.rows(), n = basis.cols();
  std::vector<std::pair<Rat, std::vector<long>>> cands;
  std::vector<long> c(b, -radius);
  while (true) {
    bool zero = std::all_of(c.begin(), c.end(), [](long x) { return x == 0; });
    if (!zero) {
      RatVec v(n, Rat(0));
      for (size_t i = 0; i < b; ++i)
        for (size_t j = 0; j < n; ++j) v[j] += Rat(c[i]) * basis.at(i, j);
      Rat q(0);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) q += v[i] * gram.at(i, j) * v[j];
      cands.emplace_back(q, c);
    }
    size_t k = 0;
    while (k < b && c[k] == radius) c[k++] = -radius;
    if (k == b) break;
    ++c[k];
  }
  std::sort(cands.begin(), cands.end(),
            [](const auto& a, const auto& b2) { return a.first < b2.first; });
  // greedy sweep keeping vectors that enlarge the span
  std::vector<RatVec> pivots;
  BruteMinima out;
  out.box = cands.size();
  for (const auto& [q, coeff] : cands) {
    if (pivots.size() == b) break;
    RatVec row(b);
    for (size_t i = 0; i < b; ++i) row[i] = Rat(coeff[i]);
    for (const RatVec& p : pivots) {
      size_t lead = 0;
      while (lead < b && p[lead] == 0) ++lead;
      if (lead < b && row[lead] != 0) {
        Rat f = row[lead] / p[lead];
        for (size_t i = 0; i < b; ++i) row[i] -= f * p[i];
      }
    }
    if (std::any_of(row.begin(), row.end(), [](const Rat& x) { return x != 0; })) {
      pivots.push_back(row);
      out.sq.push_back(q);
    }
  }
  return out;
}

std::string run_minima_exhaustive() {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> entry(-2, 2);
  size_t total_enumerated = 0;
  for (int round = 0; round < 50; ++round) {
    size_t b = 1 + round % 4;
    RatMatrix basis(b, b);
    while (true) {
      for (size_t i = 0; i < b; ++i)
        for (size_t j = 0; j < b; ++j) basis.at(i, j) = Rat(entry(rng));
      if (Subspace::span(basis).dim() == b) break;
    }
    RatMatrix m(b, b);
    for (size_t i = 0; i < b; ++i)
      for (size_t j = 0; j < b; ++j) m.at(i, j) = Rat(entry(rng));
    RatMatrix gram(b, b);
    for (size_t i = 0; i < b; ++i)
      for (size_t j = 0; j < b; ++j) {
        Rat s(0);
        for (size_t k = 0; k < b; ++k) s += m.at(k, i) * m.at(k, j);
        gram.at(i, j) = s + (i == j ? Rat(1) : Rat(0));
      }

    NormedLattice lat{basis, NormOracle::quadratic(gram)};
    MinimaResult got = successive_minima(lat);
    BruteMinima want = brute_minima(basis, gram, 6);
    total_enumerated += want.box;
    expect(got.minima.size() == b, "minima count");
    for (size_t i = 0; i < b; ++i) {
      expect(got.minima[i].exact(), "quadratic minima should be exact");
      expect(got.minima[i].q == want.sq[i],
             "lambda_" + std::to_string(i + 1) + " disagrees with enumeration (round " +
                 std::to_string(round) + ")");
    }
  }
  std::ostringstream os;
  os << "50 lattices, " << total_enumerated << " vectors enumerated";
  return os.str();
}

// ---- criterion 5: transference products stay inside the envelope

std::string run_transference_envelopes() {
  std::vector<NormedLattice> lats;
  for (size_t k = 1; k <= 5; ++k)
    lats.push_back({RatMatrix::identity(k), NormOracle::quadratic(RatMatrix::identity(k))});
  lats.push_back(load_lattice_file(models_dir() + "/d4half.json"));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-2, 2);
  while (lats.size() < 16) {
    size_t b = 2 + lats.size() % 3;
    RatMatrix basis(b, b);
    for (size_t i = 0; i < b; ++i)
      for (size_t j = 0; j < b; ++j) basis.at(i, j) = Rat(entry(rng));
    if (Subspace::span(basis).dim() < b) continue;
    lats.push_back({basis, NormOracle::quadratic(RatMatrix::identity(b))});
    lats.push_back({basis.scaled(Rat(3)), NormOracle::quadratic(RatMatrix::identity(b))});
  }
  for (size_t i = 0; i < lats.size(); ++i) {
    TransferenceProfile p = transference_profile(lats[i]);
    size_t b = p.primal.size();
    expect(p.min_product >= 1.0 - kEnvelopeTol,
           "product below one on lattice " + std::to_string(i));
    expect(p.max_product <= double(b) + kEnvelopeTol,
           "product beyond the rank envelope on lattice " + std::to_string(i));
  }
  std::ostringstream os;
  os << lats.size() << " lattices inside [1, rank]";
  return os.str();
}

// ---- criterion 6: flat-torus norms and the isoperimetric scan

std::string run_flat_norms_and_iq() {
  CochainModel t3 = torus_model(3);
  CohomologyRing r3(t3);
  MetricGeometry geo(t3, diag({Rat(1), Rat(4), Rat(9)}));
  MetricOptions opt;

  ValueBracket n1 = geo.stable_norm(r3, 1, vec({0, 1, 0}), opt);
  expect(n1.exact && n1.value() == 2.0, "stable norm of the second circle");
  ValueBracket n2 = geo.stable_norm(r3, 2, vec({0, 0, 1}), opt);
  expect(n2.exact && n2.value() == 6.0, "stable norm of the 23-face");
  expect(geo.volume().exact && geo.volume().value() == 6.0, "volume of the flat torus");

  auto s1 = geo.stable_systole(r3, 1, opt);
  auto s2 = geo.stable_systole(r3, 2, opt);
  expect(s1.exact && s1.value.value() == 1.0, "shortest circle");
  expect(s2.exact && s2.value.value() == 2.0, "smallest face");
  expect(s1.value.value() * s2.value.value() <= geo.volume().value() + kValueTol,
         "systole product exceeds the volume");

  ValueBracket c1 = geo.comass(1, t3.basis_cochain(1, 0), opt);
  expect(c1.exact && c1.value() == 1.0, "comass of a unit covector");
  Cochain e12 = t3.basis_cochain(2, 0);
  ValueBracket c2 = geo.comass(2, e12, opt);
  expect(c2.exact && std::abs(c2.value() - 0.5) < kValueTol, "comass of the 12-coframe");

  // isoperimetric quotient of the nilmanifold falls monotonically in t
  CochainModel h = heisenberg_model();
  CohomologyRing rh(h);
  double prev = 0;
  bool first = true;
  for (const RatMatrix& g : metric_grid(3)) {
    MetricGeometry hg(h, g);
    auto iq = geo_quotient_value(rh, hg, opt);
    if (!first) expect(iq <= prev * (1 + kValueTol), "quotient increased along the scan");
    prev = iq;
    first = false;
  }
  expect(std::abs(prev - 0.1) < kValueTol, "quotient at the stiff end");
  return "exact norms, systole product, monotone quotient scan";
}

// ---- criterion 7: chain margins across the metric grid

std::string run_grid_margins() {
  ScenarioSpec s;
  s.model_path = models_dir() + "/heisenberg.json";
  s.selector = "thm22";
  s.grid = true;
  ScenarioResult res = run_scenario(s);
  expect(res.exit_code == 0, "grid scenario exit code");
  expect(res.report["metrics"].size() == 9, "nine grid metrics");
  expect(res.report["iq_monotone"].get<std::string>() == "nonincreasing", "quotient monotone");
  for (const auto& entry : res.report["metrics"]) {
    const ReportJson& chain = entry["report"]["chain"];
    expect(chain["all_hold"].get<bool>(), "a chain line failed");
    expect(chain["all_certified"].get<bool>(), "a chain line lost certification");
    expect(chain["min_margin"].get<double>() >= -kMarginTol, "negative margin");
  }

  // scaling the metric by 4 must leave every margin in place
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  MetricOptions opt;
  ReportJson r1 = verify_chain_thm22(ring, MetricGeometry(m, RatMatrix::identity(3)), 1, opt);
  ReportJson r4 =
      verify_chain_thm22(ring, MetricGeometry(m, RatMatrix::identity(3).scaled(Rat(4))), 1, opt);
  for (const auto& line : r1["chain"]["lines"]) {
    for (const auto& other : r4["chain"]["lines"]) {
      if (other["name"] != line["name"]) continue;
      double a = line["margin"].get<double>(), b = other["margin"].get<double>();
      expect(std::abs(a - b) <= kScaleTol, "margin moved under scaling: " +
                                               line["name"].get<std::string>());
    }
  }
  return "9 metrics hold certified, margins scale-invariant";
}

// ---- criterion 8: the installed binary reports deterministically

std::string run_cli(const std::string& cmd, std::string& out) {
  out.clear();
  FILE* p = popen(cmd.c_str(), "r");
  expect(p != nullptr, "failed to launch the binary");
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  int status = pclose(p);
  std::ostringstream os;
  os << "exit " << (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
  return os.str();
}

std::string run_cli_determinism() {
  const char* cli = std::getenv("SYSWORK_CLI");
  expect(cli != nullptr && *cli, "SYSWORK_CLI is not set");
  std::string cmd = std::string("'") + cli + "' verify thm22 '" + models_dir() +
                    "/heisenberg.json' --m 1 --seed 7 2>/dev/null";
  std::string a, b;
  std::string ea = run_cli(cmd, a);
  std::string eb = run_cli(cmd, b);
  expect(ea == "exit 0" && eb == "exit 0", "binary exit codes: " + ea + ", " + eb);
  expect(!a.empty() && a.front() == '{', "report is not a JSON object");
  expect(a == b, "two runs differ byte for byte");
  std::ostringstream os;
  os << "two runs, " << a.size() << " identical bytes";
  return os.str();
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"differential validity", 5, run_dga_validity},
      {"nilmanifold benchmark", 1, run_heisenberg_exact},
      {"torus negative controls", 1, run_torus_controls},
      {"minima vs enumeration", 60, run_minima_exhaustive},
      {"transference envelopes", 120, run_transference_envelopes},
      {"flat norms and quotient scan", 120, run_flat_norms_and_iq},
      {"grid chain margins", 180, run_grid_margins},
      {"binary determinism", 30, run_cli_determinism},
  };
  int passed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.limit_s) {
      ok = false;
      detail = "over the time limit";
    }
    std::printf("[%zu/%zu] %s: %s (%.2fs, limit %.0fs) %s\n", i + 1, criteria.size(), c.name,
                ok ? "PASS" : "FAIL", secs, c.limit_s, detail.c_str());
    if (ok) ++passed;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, int(criteria.size()) == passed ? criteria.size() : criteria.size());
  return passed == int(criteria.size()) ? 0 : 1;
}
