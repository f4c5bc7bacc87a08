#pragma once

#include "syswork/rat_matrix.hpp"

namespace syswork {

// Linear subspace of Q^n held as a canonical RREF row basis, so two equal
// subspaces compare equal entry-for-entry.
class Subspace {
 public:
  Subspace() : Subspace(0) {}
  explicit Subspace(size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
  static Subspace span(const RatMatrix& rows);

  size_t ambient() const { return ambient_; }
  size_t dim() const { return basis_.rows(); }
  const RatMatrix& basis() const { return basis_; }

  bool contains(const RatVec& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;

  // Coordinates of v in the basis, when v lies in the subspace.
  std::optional<RatVec> coordinates(const RatVec& v) const;

 private:
  size_t ambient_;
  RatMatrix basis_;
};

}  // namespace syswork
