#pragma once

#include <optional>

#include "syswork/cohomology.hpp"
#include "syswork/lattice.hpp"

namespace syswork {

struct MetricOptions {
  double tol = 1e-6;
  uint64_t seed = 1;
  int multistarts = 16;
  int iterations = 400;
  // rounds of coordinate descent over exact shifts in min-comass searches;
  // 0 keeps only the least-squares and zero candidates
  int descent_rounds = 40;
};

// A value known either exactly (as sqrt of a rational) or as a bracket.
struct ValueBracket {
  double lo = 0, hi = 0;
  bool exact = false;
  Rat exact_sq;
  double value() const;
  static ValueBracket from_sq(const Rat& sq);
  static ValueBracket interval(double lo, double hi);
};

// Norm and systole computations for an invariant-forms model under a metric
// given by the Gram matrix of the frame e_1..e_n.  Degrees 0, 1, n-1, n have
// exact Euclidean comass; degree 2 uses the spectral norm in an orthonormal
// coframe; everything else gets certified brackets from multistart ascent
// over decomposable directions.
class MetricGeometry {
 public:
  MetricGeometry(const CochainModel& model, const RatMatrix& gram);

  size_t n() const { return n_; }
  const CochainModel& model() const { return *model_; }
  const RatMatrix& gram() const { return gram_; }
  const RatMatrix& coframe_gram() const { return gstar_; }

  // True when comass in degree k coincides with the induced Euclidean norm.
  bool euclid_degree(size_t k) const { return k <= 1 || k + 1 >= n_; }

  // Exact Gram matrix of the induced inner product on degree-k monomials.
  const RatMatrix& lambda_gram(size_t k) const;

  ValueBracket comass(size_t k, const Cochain& alpha, const MetricOptions& opt) const;

  struct MinComass {
    ValueBracket value;
    Cochain witness;  // form attaining (or best approaching) the minimum
  };
  // Minimal comass over the affine family alpha + d(degree k-1).
  MinComass min_comass_form(size_t k, const Cochain& alpha, const MetricOptions& opt) const;
  // Same, over the representatives of a cohomology class.
  MinComass min_comass_in_class(const CohomologyRing& ring, const CohomologyClass& c,
                                const MetricOptions& opt) const;
  // Minimal comass over the primitives of an exact degree-k form: the family
  // solve_primitive(eta) + ker(d) in degree k-1.
  MinComass min_comass_primitive(size_t k, const Cochain& eta, const MetricOptions& opt) const;

  // Exact profile M of the least-squares representative norm on class
  // coordinates: min Euclidean mass^2 over the class = h^T M h.  This equals
  // the min-comass profile exactly in Euclidean degrees and upper-bounds the
  // min-comass elsewhere.
  RatMatrix class_euclid_profile(const CohomologyRing& ring, size_t k) const;

  // Homology pairing matrix P: <class coords a, cycle coords h> = a^T P h.
  RatMatrix pairing_matrix(const CohomologyRing& ring, size_t k) const;

  ValueBracket stable_norm(const CohomologyRing& ring, size_t k, const RatVec& h,
                           const MetricOptions& opt) const;

  struct Systole {
    ValueBracket value;
    IntVec cycle;            // realizing homology class, cycle coordinates
    std::vector<NormVal> minima;
    bool exact = false;
  };
  Systole stable_systole(const CohomologyRing& ring, size_t k, const MetricOptions& opt) const;

  struct Isoperimetric {
    ValueBracket value;
    Cochain witness;         // exact form attaining (or approaching) the sup
    bool no_exact_forms = false;
  };
  // sup over nonzero exact invariant k-forms of
  //   (min comass of a primitive) / (comass of the form).
  Isoperimetric isoperimetric_quotient(const CohomologyRing& ring, size_t k,
                                       const MetricOptions& opt) const;

  ValueBracket volume() const;  // sqrt(det gram) * declared covolume

  // Stable-norm oracle on cycle coordinates of H_k, for lattice work.
  // Exact quadratic in Euclidean degrees; otherwise an external oracle with
  // exact quadratic bounds on both sides.
  NormOracle stable_norm_oracle(const CohomologyRing& ring, size_t k,
                                const MetricOptions& opt) const;

 private:
  const CochainModel* model_;
  size_t n_ = 0;
  RatMatrix gram_, gstar_;
  mutable std::vector<std::optional<RatMatrix>> lambda_;
  std::vector<double> chol_;  // row-major upper factor R with R^T R = gstar

  std::vector<double> hat_coords(size_t k, const Cochain& alpha) const;
  ValueBracket comass_two_form(const Cochain& alpha) const;
  ValueBracket comass_general(size_t k, const Cochain& alpha, const MetricOptions& opt) const;
  MinComass min_comass_over(size_t k, const Cochain& alpha, const RatMatrix& e,
                            const MetricOptions& opt) const;
};

size_t binomial(size_t n, size_t k);

}  // namespace syswork
