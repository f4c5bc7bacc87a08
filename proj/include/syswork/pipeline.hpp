#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "syswork/massey.hpp"
#include "syswork/metric.hpp"
#include "syswork/model_io.hpp"

namespace syswork {

using ReportJson = nlohmann::ordered_json;

// Model fails the gate of the selected chain (or lacks the structure the
// chain needs).  Carries the partial report for the CLI.
struct HypothesisError : std::runtime_error {
  ReportJson details;
  explicit HypothesisError(const std::string& msg, ReportJson d = ReportJson::object())
      : std::runtime_error(msg), details(std::move(d)) {}
};

struct ScenarioSpec {
  std::string model_path;
  std::string selector;  // thm22 | thm222 | prop81 | banaszczyk-only
  size_t m = 1;
  double tol = 1e-6;
  uint64_t seed = 1;
  bool grid = false;              // diag(1,..,1,t) over t in logspace(-2,2,9)
  std::optional<RatMatrix> gram;  // overrides the model's declared metric
};

struct ScenarioResult {
  ReportJson report;
  int exit_code = 0;  // 0 pass, 1 inequality failed its bracket, 2 usage/hypothesis
};

// Hypothesis gate for the degree-m chain: cup product zero on H^m, the
// Massey-type sufficient condition in H^{3m-1}, torsion-freeness.
ReportJson check_hypotheses(const CohomologyRing& ring, size_t m);

// Single-metric verifiers; throw HypothesisError when the gate fails.
ReportJson verify_chain_thm22(const CohomologyRing& ring, const MetricGeometry& geo, size_t m,
                              const MetricOptions& opt);
ReportJson verify_chain_thm222(const CohomologyRing& ring, const MetricGeometry& geo,
                               const MetricOptions& opt);
ReportJson verify_prop81(const CohomologyRing& ring, const MetricGeometry& geo,
                         const MetricOptions& opt);

// Transference products and the empirical envelope for one normed lattice.
ReportJson banaszczyk_report(const NormedLattice& lat, double tol);

// Loads the file named by the spec, dispatches on the selector, serializes
// the full report.  Never throws on verification failures: those are coded
// in the report and the exit code.
ScenarioResult run_scenario(const ScenarioSpec& spec);

// The nine-point metric grid diag(1,..,1,t), t = 10^{k/2} for k = -4..4
// (odd powers use an exact rational convergent of sqrt(10)).
std::vector<RatMatrix> metric_grid(size_t n);

}  // namespace syswork
