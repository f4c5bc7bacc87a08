#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "syswork/pipeline.hpp"
#include "test_models.hpp"

using namespace syswork;

namespace {

std::string model_path(const std::string& file) {
  return std::string(SYSWORK_MODELS_DIR) + "/" + file;
}

ScenarioSpec scenario(const std::string& file, const std::string& selector) {
  ScenarioSpec s;
  s.model_path = model_path(file);
  s.selector = selector;
  return s;
}

const ReportJson& chain_line(const ReportJson& report, const std::string& name) {
  for (const auto& line : report["chain"]["lines"])
    if (line["name"] == name) return line;
  static ReportJson missing;
  return missing;
}

RatMatrix diag3(const Rat& t) {
  RatMatrix g = RatMatrix::identity(3);
  g.at(2, 2) = t;
  return g;
}

CochainModel heis7_model() {
  LieStructure lie(7, {{0, 1, 6, Rat(1)}, {2, 3, 6, Rat(1)}, {4, 5, 6, Rat(1)}});
  CochainModel m = build_chevalley_eilenberg(lie);
  m.name = "heis7";
  return m;
}

}  // namespace

TEST_CASE("hypothesis gate accepts the heisenberg model") {
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  ReportJson h = check_hypotheses(ring, 1);
  CHECK(h["cup_zero_on_m"]["ok"].get<bool>());
  CHECK(h["massey_type"]["ok"].get<bool>());
  CHECK(h["massey_type"]["target_dim"].get<size_t>() == 2);
  CHECK(h["massey_type"]["achieved_dim"].get<size_t>() == 2);
  CHECK_FALSE(h["massey_type"]["vacuous"].get<bool>());
  CHECK(h["torsion_free"]["ok"].get<bool>());
  CHECK(h["torsion_free"]["degree"].get<size_t>() == 2);
  CHECK(h["all"].get<bool>());
}

TEST_CASE("hypothesis gate rejects the torus") {
  CochainModel m = torus_model(3);
  CohomologyRing ring(m);
  ReportJson h = check_hypotheses(ring, 1);
  CHECK_FALSE(h["cup_zero_on_m"]["ok"].get<bool>());
  CHECK_FALSE(h["massey_type"]["ok"].get<bool>());
  CHECK(h["massey_type"]["achieved_dim"].get<size_t>() == 0);
  CHECK_FALSE(h["all"].get<bool>());
}

TEST_CASE("hypothesis gate is vacuous when the target degree is empty") {
  CochainModel m = torus_model(1);
  CohomologyRing ring(m);
  ReportJson h = check_hypotheses(ring, 1);
  CHECK(h["massey_type"]["vacuous"].get<bool>());
  CHECK(h["massey_type"]["target_dim"].get<size_t>() == 0);
  CHECK(h["massey_type"]["ok"].get<bool>());
}

TEST_CASE("degree-1 chain margins are metric-scale invariant") {
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  MetricOptions opt;
  for (long num : {1L, 4L}) {
    for (long den : {1L, 4L}) {
      if (num != 1 && den != 1) continue;
      Rat t(num, den);
      MetricGeometry geo(m, diag3(t));
      ReportJson r = verify_chain_thm22(ring, geo, 1, opt);
      CAPTURE(rat_str(t));
      CHECK(r["pass"].get<bool>());
      CHECK(r["chain"]["all_hold"].get<bool>());
      CHECK(r["chain"]["all_certified"].get<bool>());
      CHECK(r["chain_monotone"].get<bool>());
      CHECK(chain_line(r, "integrality_floor")["margin"].get<double>() == doctest::Approx(0.0));
      CHECK(chain_line(r, "pairing_vs_norms")["margin"].get<double>() == doctest::Approx(0.0));
      CHECK(chain_line(r, "wedge_expansion")["margin"].get<double>() == doctest::Approx(0.5));
      CHECK(chain_line(r, "lambda_products")["margin"].get<double>() == doctest::Approx(0.0));
      CHECK(chain_line(r, "headline_sys2a")["margin"].get<double>() == doctest::Approx(0.875));
      // smallest class is e13 + t e23 scaled; systole squares to t exactly
      CHECK(r["x0"]["stsys"]["exact"].get<bool>());
      CHECK(r["x0"]["stsys"]["sq"].get<std::string>() == rat_str(t));
      CHECK(r["headline"]["implied_constant"]["sq"].get<std::string>() == "64");
    }
  }
}

TEST_CASE("chain selections do not depend on the seed") {
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  MetricGeometry geo(m, RatMatrix::identity(3));
  MetricOptions a, b;
  a.seed = 7;
  b.seed = 1234;
  ReportJson ra = verify_chain_thm22(ring, geo, 1, a);
  ReportJson rb = verify_chain_thm22(ring, geo, 1, b);
  CHECK(ra["x0"]["cycle"] == rb["x0"]["cycle"]);
  CHECK(ra["triple"]["s"] == rb["triple"]["s"]);
  CHECK(ra["triple"]["t"] == rb["triple"]["t"]);
  CHECK(ra["triple"]["r"] == rb["triple"]["r"]);
  CHECK(ra["x0"]["stsys"]["sq"] == rb["x0"]["stsys"]["sq"]);
  CHECK(ra["iq"]["value"]["sq"] == rb["iq"]["value"]["sq"]);
}

TEST_CASE("degree-2 chain rejects torsion in the fourth integral group") {
  CochainModel m = heis7_model();
  CohomologyRing ring(m);
  MetricGeometry geo(m, RatMatrix::identity(7));
  MetricOptions opt;
  try {
    verify_chain_thm222(ring, geo, opt);
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    const ReportJson& h = e.details["hypotheses"];
    CHECK(h["cup_zero_on_m"]["ok"].get<bool>());
    CHECK(h["massey_nontrivial"]["ok"].get<bool>());
    CHECK_FALSE(h["torsion_free"]["ok"].get<bool>());
    CHECK(h["torsion_free"]["degree"].get<size_t>() == 4);
    CHECK_FALSE(h["all"].get<bool>());
  }
}

TEST_CASE("degree-2 chain rejects a torus without triple products") {
  CochainModel m = torus_model(7);
  CohomologyRing ring(m);
  MetricGeometry geo(m, RatMatrix::identity(7));
  MetricOptions opt;
  try {
    verify_chain_thm222(ring, geo, opt);
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    const ReportJson& h = e.details["hypotheses"];
    CHECK_FALSE(h["cup_zero_on_m"]["ok"].get<bool>());
    CHECK_FALSE(h["massey_nontrivial"]["ok"].get<bool>());
  }
}

TEST_CASE("degree-pattern scenario picks the cup branch on the solvable model") {
  ScenarioSpec s = scenario("solv8.json", "prop81");
  ScenarioResult res = run_scenario(s);
  CHECK(res.exit_code == 0);
  CHECK(res.report["pass"].get<bool>());
  const ReportJson& rep = res.report["metrics"][0]["report"];
  CHECK(rep["branch"].get<std::string>() == "cup");
  CHECK_FALSE(rep["branches"]["massey_applicable"].get<bool>());
  CHECK(rep["branches"]["cup_applicable"].get<bool>());
  CHECK(rep["selection"]["element_pairing"].get<std::string>() == "1");
  CHECK(rep["selection"]["integral_pairing"].get<std::string>() == "1");
  CHECK(rep["chain"]["all_hold"].get<bool>());
  CHECK(rep["chain"]["all_certified"].get<bool>());
  CHECK(rep["chain"]["min_margin"].get<double>() >= 0.0);
  CHECK(rep["x0"]["stsys"]["sq"].get<std::string>() == "1");
}

TEST_CASE("degree-pattern scenario fails when no branch pairs with the base class") {
  ScenarioSpec s = scenario("solv8_degenerate.json", "prop81");
  ScenarioResult res = run_scenario(s);
  CHECK(res.exit_code == 2);
  CHECK_FALSE(res.report["pass"].get<bool>());
  CHECK(res.report["error"]["kind"].get<std::string>() == "hypothesis");
}

TEST_CASE("lattice file scenario reports transference products") {
  ScenarioSpec s = scenario("d4half.json", "banaszczyk-only");
  ScenarioResult res = run_scenario(s);
  CHECK(res.exit_code == 0);
  const ReportJson& lat = res.report["lattice"];
  CHECK(lat["rank"].get<size_t>() == 4);
  for (const auto& v : lat["lambdas"]) CHECK(v["sq"].get<std::string>() == "1");
  for (const auto& v : lat["dual_lambdas"]) CHECK(v["sq"].get<std::string>() == "2");
  CHECK(lat["max_product"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(lat["products_at_least_one"].get<bool>());
  CHECK(lat["envelope_ok"].get<bool>());
}

TEST_CASE("model scenario runs transference on every paired homology degree") {
  ScenarioSpec s = scenario("torus3.json", "banaszczyk-only");
  ScenarioResult res = run_scenario(s);
  CHECK(res.exit_code == 0);
  const ReportJson& degrees = res.report["degrees"];
  CHECK(degrees.size() == 2);
  for (const auto& d : degrees) {
    CHECK(d["rank"].get<size_t>() == 3);
    CHECK(d["envelope_ok"].get<bool>());
    CHECK(d["pass"].get<bool>());
  }
}

TEST_CASE("metric grid sweeps nine metrics with nonincreasing quotient") {
  ScenarioSpec s = scenario("heisenberg.json", "thm22");
  s.grid = true;
  ScenarioResult res = run_scenario(s);
  CHECK(res.exit_code == 0);
  CHECK(res.report["metrics"].size() == 9);
  CHECK(res.report["iq_monotone"].get<std::string>() == "nonincreasing");
  double prev = 0;
  bool first = true;
  for (const auto& entry : res.report["metrics"]) {
    const ReportJson& rep = entry["report"];
    CHECK(rep["pass"].get<bool>());
    CHECK(rep["chain"]["min_margin"].get<double>() == doctest::Approx(0.0));
    double iq = rep["iq"]["value"]["value"].get<double>();
    if (!first) CHECK(iq < prev);
    prev = iq;
    first = false;
  }
  // endpoints and center of the grid hit exact powers of ten
  CHECK(res.report["metrics"][0]["report"]["x0"]["stsys"]["sq"].get<std::string>() == "1/100");
  CHECK(res.report["metrics"][4]["report"]["x0"]["stsys"]["sq"].get<std::string>() == "1");
  CHECK(res.report["metrics"][8]["report"]["x0"]["stsys"]["sq"].get<std::string>() == "100");
}

TEST_CASE("grid matrices use exact rational steps") {
  std::vector<RatMatrix> grid = metric_grid(3);
  REQUIRE(grid.size() == 9);
  CHECK(grid[0].at(2, 2) == Rat(1, 100));
  CHECK(grid[4].at(2, 2) == Rat(1));
  CHECK(grid[5].at(2, 2) == Rat(27379, 8658));
  CHECK(grid[8].at(2, 2) == Rat(100));
  for (const RatMatrix& g : grid) {
    CHECK(g.at(0, 0) == Rat(1));
    CHECK(g.at(0, 2) == Rat(0));
  }
}

TEST_CASE("scenario reports are byte identical across runs") {
  ScenarioSpec s = scenario("heisenberg.json", "thm22");
  s.seed = 7;
  ScenarioResult a = run_scenario(s);
  ScenarioResult b = run_scenario(s);
  CHECK(a.exit_code == 0);
  CHECK(a.report.dump(2) == b.report.dump(2));
}

TEST_CASE("scenario failures map to exit code two with a typed error") {
  ScenarioSpec bad = scenario("heisenberg.json", "thm23");
  ScenarioResult r1 = run_scenario(bad);
  CHECK(r1.exit_code == 2);
  CHECK(r1.report["error"]["kind"].get<std::string>() == "usage");

  ScenarioSpec missing = scenario("no_such_model.json", "thm22");
  ScenarioResult r2 = run_scenario(missing);
  CHECK(r2.exit_code == 2);
  CHECK(r2.report["error"]["kind"].get<std::string>() == "load");

  ScenarioSpec torus = scenario("torus3.json", "thm22");
  ScenarioResult r3 = run_scenario(torus);
  CHECK(r3.exit_code == 2);
  CHECK(r3.report["error"]["kind"].get<std::string>() == "hypothesis");
  CHECK_FALSE(r3.report["error"]["details"]["hypotheses"]["all"].get<bool>());
}

TEST_CASE("scaling the metric moves systoles but not margins") {
  CochainModel m = heisenberg_model();
  CohomologyRing ring(m);
  MetricOptions opt;
  MetricGeometry g1(m, RatMatrix::identity(3));
  MetricGeometry g4(m, RatMatrix::identity(3).scaled(Rat(4)));
  ReportJson r1 = verify_chain_thm22(ring, g1, 1, opt);
  ReportJson r4 = verify_chain_thm22(ring, g4, 1, opt);
  for (const auto& line : r1["chain"]["lines"]) {
    const ReportJson& other = chain_line(r4, line["name"].get<std::string>());
    REQUIRE(!other.is_null());
    CHECK(line["margin"].get<double>() ==
          doctest::Approx(other["margin"].get<double>()).epsilon(1e-6));
  }
  // areas scale by the factor: the degree-2 systole doubles
  CHECK(r4["x0"]["stsys"]["sq"].get<std::string>() == "16");
}

TEST_CASE("model files round trip string rationals and metric blocks") {
  std::filesystem::path p = std::filesystem::temp_directory_path() / "unit_pipeline_model.json";
  {
    std::ofstream out(p);
    out << R"({"type": "lie", "dim": 3, "c": [[1, 2, 3, "1/2"]],
               "metric": {"gram": [[1,0,0],[0,1,0],[0,0,"1/4"]]}})";
  }
  ModelFile mf = load_model_file(p.string());
  CHECK(mf.model.dims == std::vector<size_t>{1, 3, 3, 1});
  REQUIRE(mf.gram.has_value());
  CHECK(mf.gram->at(2, 2) == Rat(1, 4));
  CHECK(mf.model.validate().ok);
  CHECK_FALSE(is_lattice_file(p.string()));
  CHECK(is_lattice_file(model_path("d4half.json")));
  std::filesystem::remove(p);
}
