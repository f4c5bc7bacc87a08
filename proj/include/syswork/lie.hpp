#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "syswork/cochain_model.hpp"

namespace syswork {

// Lie algebra in a fixed basis e_1..e_n: [e_i, e_j] = sum_k c[k][i][j] e_k.
// Structure constants are rational and antisymmetric in (i, j); the Jacobi
// identity is checked on construction.
class LieStructure {
 public:
  // Entries are (i, j, k, value) zero-based with i < j, meaning c^k_{ij}.
  LieStructure(size_t dim, const std::vector<std::tuple<size_t, size_t, size_t, Rat>>& entries);

  size_t dim() const { return n_; }
  const Rat& c(size_t k, size_t i, size_t j) const { return c_[(k * n_ + i) * n_ + j]; }

  bool is_nilpotent() const;  // lower central series reaches zero
  bool all_integral() const;

 private:
  size_t n_;
  std::vector<Rat> c_;
};

struct JacobiError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invariant-forms model of the algebra: degree k is spanned by the sorted
// index monomials, d extends  d e^k = -sum_{i<j} c^k_{ij} e^i e^j  by the
// graded Leibniz rule, and the product is the exterior product.
CochainModel build_chevalley_eilenberg(const LieStructure& lie);

// Monomial utilities shared with tests: sign and merged index set of a
// product of strictly increasing index tuples, zero when indices repeat.
std::pair<int, std::vector<size_t>> merge_monomials(const std::vector<size_t>& a,
                                                    const std::vector<size_t>& b);

// All strictly increasing k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<size_t>> index_subsets(size_t n, size_t k);

}  // namespace syswork
