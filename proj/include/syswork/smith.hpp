#pragma once

#include <optional>
#include <vector>

#include "syswork/rat_matrix.hpp"
#include "syswork/rational.hpp"

namespace syswork {

// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

  static IntMatrix identity(size_t n);
  static IntMatrix from_rows(const std::vector<IntVec>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Int& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
  bool operator==(const IntMatrix& b) const { return rows_ == b.rows_ && cols_ == b.cols_ && a_ == b.a_; }

  IntMatrix operator*(const IntMatrix& b) const;
  IntMatrix transpose() const;
  IntVec row(size_t i) const;
  IntVec apply(const IntVec& x) const;
  RatMatrix to_rat() const;
  static std::optional<IntMatrix> from_rat(const RatMatrix& m);  // fails on non-integers

  Int det() const;  // via exact rational elimination

 private:
  size_t rows_, cols_;
  std::vector<Int> a_;
};

// Smith normal form: U * M * V = D with U, V unimodular and D diagonal with
// d1 | d2 | ... | dr, entries nonnegative.
struct SmithResult {
  IntMatrix U, D, V;
  std::vector<Int> diagonal;  // min(rows, cols) entries, trailing zeros kept
};

SmithResult smith_normal_form(const IntMatrix& m);

// Solve A x = b over the integers.  Returns nullopt when no integral solution.
std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& b);

// Basis (rows) of the integer kernel {x : A x = 0}; saturated by construction.
IntMatrix integer_kernel(const IntMatrix& a);

// Row Hermite normal form of the lattice generated by the rows: returns a
// canonical full-HNF basis (pivots positive, entries above pivots reduced).
IntMatrix hnf_row_basis(const IntMatrix& gens);

// Lattice generated by rational row vectors: returns (basis rows, denominator)
// with the actual basis = rows / denominator.
struct RatLatticeBasis {
  IntMatrix rows;
  Int denom;
  size_t rank() const { return rows.rows(); }
  RatMatrix to_rat() const;
};
RatLatticeBasis lattice_from_generators(const RatMatrix& gens);

// Membership of a rational vector in the lattice spanned by basis rows/denom.
bool lattice_contains(const RatLatticeBasis& basis, const RatVec& v);

// Coordinates of v in the lattice basis (integers), when v is a member.
std::optional<IntVec> lattice_coordinates(const RatLatticeBasis& basis, const RatVec& v);

}  // namespace syswork
