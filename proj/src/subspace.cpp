#include "syswork/subspace.hpp"

#include <stdexcept>

namespace syswork {

Subspace Subspace::span(const RatMatrix& rows) {
  Subspace s(rows.cols());
  RatMatrix r = rows;
  auto pivots = r.rref();
  RatMatrix basis(pivots.size(), rows.cols());
  for (size_t i = 0; i < pivots.size(); ++i)
    for (size_t j = 0; j < rows.cols(); ++j) basis.at(i, j) = r.at(i, j);
  s.basis_ = basis;
  return s;
}

bool Subspace::contains(const RatVec& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace::contains: size mismatch");
  // Reduce v against the RREF rows; membership iff the residue vanishes.
  RatVec r = v;
  for (size_t i = 0; i < basis_.rows(); ++i) {
    size_t p = 0;
    while (p < ambient_ && basis_.at(i, p) == 0) ++p;
    if (p == ambient_) continue;
    if (r[p] == 0) continue;
    Rat f = r[p];  // pivot is 1 in RREF
    for (size_t j = p; j < ambient_; ++j) r[j] -= f * basis_.at(i, j);
  }
  return vec_is_zero(r);
}

bool Subspace::contains(const Subspace& other) const {
  for (size_t i = 0; i < other.basis_.rows(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw std::invalid_argument("Subspace::sum: ambient mismatch");
  return span(basis_.vstack(other.basis_));
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw std::invalid_argument("Subspace::intersect: ambient mismatch");
  // x in U cap W  <=>  x = a^T U = b^T W; solve [U^T | -W^T] null space.
  if (dim() == 0 || other.dim() == 0) return Subspace(ambient_);
  RatMatrix ut = basis_.transpose();           // n x d1
  RatMatrix wt = other.basis_.transpose();     // n x d2
  RatMatrix stacked = ut.hstack(wt.scaled(Rat(-1)));  // n x (d1+d2)
  RatMatrix ker = stacked.kernel_basis();      // rows are (a, b)
  RatMatrix gens(ker.rows(), ambient_);
  for (size_t i = 0; i < ker.rows(); ++i) {
    RatVec a(dim());
    for (size_t j = 0; j < dim(); ++j) a[j] = ker.at(i, j);
    RatVec x = basis_.transpose().apply(a);
    gens.set_row(i, x);
  }
  return span(gens);
}

std::optional<RatVec> Subspace::coordinates(const RatVec& v) const {
  if (!contains(v)) return std::nullopt;
  return basis_.transpose().solve(v);
}

}  // namespace syswork
