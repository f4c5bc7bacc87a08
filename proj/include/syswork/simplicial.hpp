#pragma once

#include <vector>

#include "syswork/cochain_model.hpp"

namespace syswork {

// Finite simplicial complex on vertices 0..vertices-1.  Simplices are strictly
// increasing tuples, stored per dimension in lexicographic order, closed under
// taking faces.
struct SimplicialComplex {
  size_t vertices = 0;
  std::vector<std::vector<std::vector<size_t>>> simplices;  // per dimension

  // Builds from an arbitrary simplex list: sorts tuples, closes under faces.
  static SimplicialComplex from_simplices(const std::vector<std::vector<size_t>>& given);

  size_t top_dimension() const { return simplices.empty() ? 0 : simplices.size() - 1; }
};

// Simplicial cochain algebra with the front-face/back-face product.  The
// product is associative but not graded-commutative; integral structure is
// the simplex basis.  Homology functionals are computed from the boundary
// operators: the returned rows evaluate cochains against a basis of the free
// part of integral homology.
CochainModel build_simplicial_cochains(const SimplicialComplex& complex);

}  // namespace syswork
