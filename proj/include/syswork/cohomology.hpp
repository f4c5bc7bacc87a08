#pragma once

#include <optional>

#include "syswork/cochain_model.hpp"
#include "syswork/subspace.hpp"

namespace syswork {

// A cohomology class: coordinates in the ring's basis of its degree.
struct CohomologyClass {
  size_t degree = 0;
  RatVec coords;
};

// Cohomology of a CochainModel with the induced ring structure, canonical
// representatives, and (for integral models) the integer class lattice in
// each degree together with integral cocycle lifts.
class CohomologyRing {
 public:
  explicit CohomologyRing(const CochainModel& model);

  const CochainModel& model() const { return *model_; }
  size_t top_degree() const { return model_->top_degree; }
  size_t betti(size_t k) const { return k <= top_degree() ? betti_[k] : 0; }
  const std::vector<size_t>& betti_numbers() const { return betti_; }

  // Rows are the canonical representative cocycles of the degree-k basis.
  const RatMatrix& representatives(size_t k) const { return reps_[k]; }

  CohomologyClass class_of(size_t k, const RatVec& coords) const;
  CohomologyClass basis_class(size_t k, size_t i) const;
  Cochain representative(const CohomologyClass& c) const;

  // Class of a closed cochain.  Throws when the cochain is not closed.
  CohomologyClass project(size_t k, const Cochain& z) const;

  CohomologyClass cup(const CohomologyClass& a, const CohomologyClass& b) const;
  bool cup_is_zero_on_degree(size_t m) const;

  // True when H^k has no torsion over the integers (needs integral model).
  bool torsion_free(size_t k) const;

  // Pairing of a class with a homology element given in the declared cycle
  // basis of its degree.  Requires the model to declare cycles there.
  Rat pair_with_homology(const CohomologyClass& c, const RatVec& x0) const;

  // Integral structure (available on integral models):
  bool has_integral() const { return model_->has_integral; }
  // Lattice of integral classes inside H^k, basis in H^k coordinates.
  const RatLatticeBasis& integral_image(size_t k) const { return int_image_[k]; }
  // Integer cocycles lifting the integral_image basis rows, one per row.
  const IntMatrix& integral_lifts(size_t k) const { return int_lifts_[k]; }
  std::optional<IntVec> integral_coordinates(const CohomologyClass& c) const;
  // Integer cocycle representing an integral class.
  Cochain integral_representative(const CohomologyClass& c) const;
  // Determinant check of declared cycles against the integral class basis.
  bool pairing_unimodular(size_t k) const;

 private:
  const CochainModel* model_;
  std::vector<size_t> betti_;
  std::vector<RatMatrix> reps_;   // betti_k x dims[k]
  std::vector<RatMatrix> proj_;   // betti_k x dims[k], valid on cocycles
  std::vector<std::vector<RatMatrix>> cup_;  // cup_[k][l]: betti_{k+l} x betti_k*betti_l
  std::vector<RatLatticeBasis> int_image_;
  std::vector<IntMatrix> int_lifts_;
};

}  // namespace syswork
