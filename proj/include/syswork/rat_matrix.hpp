#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "syswork/rational.hpp"

namespace syswork {

// Dense rational matrix, row-major.  Everything here is exact.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rat>> init);

  static RatMatrix identity(size_t n);
  static RatMatrix from_rows(const std::vector<RatVec>& rows);
  static RatMatrix col_vector(const RatVec& v);
  static RatMatrix row_vector(const RatVec& v);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Rat& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Rat& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  RatVec row(size_t i) const;
  RatVec col(size_t j) const;
  void set_row(size_t i, const RatVec& v);

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& b) const;
  RatMatrix operator+(const RatMatrix& b) const;
  RatMatrix operator-(const RatMatrix& b) const;
  RatMatrix scaled(const Rat& s) const;
  bool operator==(const RatMatrix& b) const { return rows_ == b.rows_ && cols_ == b.cols_ && a_ == b.a_; }

  RatVec apply(const RatVec& x) const;  // matrix * column vector

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  // In-place reduced row echelon form.  Returns pivot column indices.
  std::vector<size_t> rref();

  size_t rank() const;
  Rat det() const;  // square only

  // Solve A x = b.  Returns one solution or nullopt when inconsistent.
  std::optional<RatVec> solve(const RatVec& b) const;

  // Basis of the right kernel, rows of the returned matrix, in the canonical
  // form produced from RREF free columns (deterministic).
  RatMatrix kernel_basis() const;

  std::optional<RatMatrix> inverse() const;

  RatMatrix hstack(const RatMatrix& b) const;
  RatMatrix vstack(const RatMatrix& b) const;
  RatMatrix submatrix_cols(size_t c0, size_t c1) const;  // columns [c0, c1)

  std::string str() const;

 private:
  size_t rows_, cols_;
  std::vector<Rat> a_;
};

// Exact dot product.
Rat dot(const RatVec& a, const RatVec& b);

RatVec vec_add(const RatVec& a, const RatVec& b);
RatVec vec_sub(const RatVec& a, const RatVec& b);
RatVec vec_scale(const Rat& s, const RatVec& a);
bool vec_is_zero(const RatVec& a);

// Lexicographic comparison, entry by entry.
int vec_cmp(const RatVec& a, const RatVec& b);

}  // namespace syswork
