#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "syswork/massey.hpp"
#include "syswork/pipeline.hpp"

using namespace syswork;

namespace {

std::string show(const ValueBracket& v) {
  if (v.exact) return std::to_string(v.value()) + " (exact, squared " + rat_str(v.exact_sq) + ")";
  return std::to_string(v.value()) + " in [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) +
         "]";
}

std::string show(const NormVal& v) {
  if (v.kind == NormVal::Kind::Rational) return rat_str(v.q);
  if (v.kind == NormVal::Kind::SqrtRational)
    return std::to_string(v.value()) + " (sqrt of " + rat_str(v.q) + ")";
  return std::to_string(v.value()) + " in [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) +
         "]";
}

std::string show_rat_vec(const RatVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + rat_str(v[i]);
  return s + ")";
}

std::string show_int_vec(const IntVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

int cmd_cohomology(const std::string& path) {
  ModelFile mf = load_model_file(path);
  CohomologyRing ring(mf.model);
  std::cout << "model: " << mf.model.name << "\n";
  std::cout << "top degree: " << mf.model.top_degree << "\n";
  for (size_t k = 0; k <= mf.model.top_degree; ++k) {
    std::cout << "degree " << k << ": dim " << mf.model.dims[k] << ", betti " << ring.betti(k);
    if (ring.has_integral()) {
      std::cout << (ring.torsion_free(k) ? ", torsion-free" : ", HAS TORSION");
      if (k < mf.model.cycles.size() && mf.model.cycles[k].rows() == ring.betti(k) &&
          ring.betti(k) > 0)
        std::cout << (ring.pairing_unimodular(k) ? ", cycles unimodular" : ", cycles NOT unimodular");
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_massey(const std::string& path, size_t m) {
  ModelFile mf = load_model_file(path);
  CohomologyRing ring(mf.model);
  size_t b = ring.betti(m);
  std::cout << "model: " << mf.model.name << ", degree " << m << ", betti " << b << "\n";
  if (3 * m - 1 <= ring.top_degree()) {
    SpanningCheck sc = massey_spanning_check(ring, m);
    std::cout << "spanning check: " << (sc.spans ? "true" : "false") << " (achieved "
              << sc.achieved.dim() << " of " << sc.target_dim << ")\n";
  }
  for (size_t i = 0; i < b; ++i)
    for (size_t j = 0; j < b; ++j)
      for (size_t k = 0; k < b; ++k) {
        std::cout << "<" << i << "," << j << "," << k << ">: ";
        try {
          MasseyCoset c = massey_triple(ring, ring.basis_class(m, i), ring.basis_class(m, j),
                                        ring.basis_class(m, k));
          std::cout << "rep " << show_rat_vec(c.rep.coords) << ", indeterminacy dim "
                    << c.indet.dim()
                    << (massey_is_nontrivial(c) ? ", nontrivial" : ", contains zero") << "\n";
        } catch (const MasseyUndefinedError& e) {
          std::cout << "undefined (" << e.what() << ")\n";
        }
      }
  return 0;
}

int cmd_minima(const std::string& path) {
  NormedLattice lat = load_lattice_file(path);
  MinimaResult mr = successive_minima(lat);
  std::cout << "rank " << lat.basis.rows() << "\n";
  for (size_t i = 0; i < mr.minima.size(); ++i)
    std::cout << "lambda_" << i + 1 << " = " << show(mr.minima[i]) << "  witness "
              << show_int_vec(mr.witnesses.row(i)) << "\n";
  TransferenceProfile tp = transference_profile(lat);
  std::cout << "transference products:";
  for (double p : tp.products) std::cout << " " << p;
  std::cout << "\nmax product " << tp.max_product << ", c_obs " << tp.c_obs << "\n";
  return 0;
}

int cmd_systoles(const std::string& path, std::vector<size_t> degrees, double tol,
                 uint64_t seed) {
  ModelFile mf = load_model_file(path);
  CohomologyRing ring(mf.model);
  RatMatrix gram = mf.gram ? *mf.gram : RatMatrix::identity(mf.model.dims[1]);
  MetricGeometry geo(mf.model, gram);
  MetricOptions opt;
  opt.tol = tol;
  opt.seed = seed;
  if (degrees.empty())
    for (size_t k = 1; k <= mf.model.top_degree; ++k) degrees.push_back(k);
  for (size_t k : degrees) {
    if (k > mf.model.top_degree || ring.betti(k) == 0) continue;
    if (k >= mf.model.cycles.size() || mf.model.cycles[k].rows() != ring.betti(k)) {
      std::cout << "degree " << k << ": no declared cycle basis, skipped\n";
      continue;
    }
    auto sys = geo.stable_systole(ring, k, opt);
    std::cout << "degree " << k << ": stsys = " << show(sys.value) << ", cycle "
              << show_int_vec(sys.cycle) << "\n";
  }
  return 0;
}

int cmd_verify(const ScenarioSpec& spec, const std::string& out_path) {
  ScenarioResult res = run_scenario(spec);
  std::string text = res.report.dump(2);
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant-model systolic inequality toolkit"};
  app.require_subcommand(1);

  std::string model_path, lattice_path, out_path, selector;
  size_t degree = 1;
  std::vector<size_t> degrees;
  ScenarioSpec spec;

  auto* coh = app.add_subcommand("cohomology", "Betti numbers and integral structure");
  coh->add_option("model", model_path, "model json file")->required();

  auto* mas = app.add_subcommand("massey", "triple products over the basis classes");
  mas->add_option("model", model_path, "model json file")->required();
  mas->add_option("--degree", degree, "class degree")->capture_default_str();

  auto* min = app.add_subcommand("minima", "successive minima and transference profile");
  min->add_option("lattice", lattice_path, "lattice json file")->required();

  auto* sys = app.add_subcommand("systoles", "stable systoles of declared homology lattices");
  sys->add_option("model", model_path, "model json file")->required();
  sys->add_option("--degrees", degrees, "degrees to compute")->delimiter(',');
  sys->add_option("--tol", spec.tol, "bracket tolerance")->capture_default_str();
  sys->add_option("--seed", spec.seed, "search seed")->capture_default_str();

  auto* ver = app.add_subcommand("verify", "run an inequality chain and emit the report");
  ver->add_option("selector", selector, "thm22 | thm222 | prop81 | banaszczyk-only")->required();
  ver->add_option("model", spec.model_path, "model or lattice json file")->required();
  ver->add_option("--m", spec.m, "class degree for thm22")->capture_default_str();
  ver->add_option("--tol", spec.tol, "bracket tolerance")->capture_default_str();
  ver->add_option("--seed", spec.seed, "search seed")->capture_default_str();
  ver->add_flag("--grid", spec.grid, "sweep the nine-point diag(1,..,1,t) metric grid");
  ver->add_option("--out", out_path, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (coh->parsed()) return cmd_cohomology(model_path);
    if (mas->parsed()) return cmd_massey(model_path, degree);
    if (min->parsed()) return cmd_minima(lattice_path);
    if (sys->parsed()) return cmd_systoles(model_path, degrees, spec.tol, spec.seed);
    spec.selector = selector;
    return cmd_verify(spec, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
