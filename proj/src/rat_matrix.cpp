#include "syswork/rat_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace syswork {

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rat>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw std::invalid_argument("RatMatrix: ragged initializer");
    for (const auto& x : r) a_.push_back(x);
  }
}

RatMatrix RatMatrix::identity(size_t n) {
  RatMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows) {
  RatMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
    for (size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::col_vector(const RatVec& v) {
  RatMatrix m(v.size(), 1);
  for (size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
  return m;
}

RatMatrix RatMatrix::row_vector(const RatVec& v) {
  RatMatrix m(1, v.size());
  for (size_t j = 0; j < v.size(); ++j) m.at(0, j) = v[j];
  return m;
}

RatVec RatMatrix::row(size_t i) const {
  RatVec v(cols_);
  for (size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

RatVec RatMatrix::col(size_t j) const {
  RatVec v(rows_);
  for (size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

void RatMatrix::set_row(size_t i, const RatVec& v) {
  if (v.size() != cols_) throw std::invalid_argument("set_row: size mismatch");
  for (size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& b) const {
  if (cols_ != b.rows_) throw std::invalid_argument("matmul: shape mismatch");
  RatMatrix c(rows_, b.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Rat& aik = at(i, k);
      if (aik == 0) continue;
      for (size_t j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

RatMatrix RatMatrix::operator+(const RatMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("add: shape mismatch");
  RatMatrix c(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] + b.a_[i];
  return c;
}

RatMatrix RatMatrix::operator-(const RatMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("sub: shape mismatch");
  RatMatrix c(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] - b.a_[i];
  return c;
}

RatMatrix RatMatrix::scaled(const Rat& s) const {
  RatMatrix c(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] * s;
  return c;
}

RatVec RatMatrix::apply(const RatVec& x) const {
  if (x.size() != cols_) throw std::invalid_argument("apply: size mismatch");
  RatVec y(rows_, Rat(0));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) != 0) y[i] += at(i, j) * x[j];
  return y;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

std::vector<size_t> RatMatrix::rref() {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; ++c) {
    size_t p = r;
    while (p < rows_ && at(p, c) == 0) ++p;
    if (p == rows_) continue;
    if (p != r)
      for (size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
    Rat inv = Rat(1) / at(r, c);
    for (size_t j = c; j < cols_; ++j) at(r, j) *= inv;
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r || at(i, c) == 0) continue;
      Rat f = at(i, c);
      for (size_t j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t RatMatrix::rank() const {
  RatMatrix copy = *this;
  return copy.rref().size();
}

Rat RatMatrix::det() const {
  if (!is_square()) throw std::invalid_argument("det: not square");
  RatMatrix m = *this;
  Rat d(1);
  size_t n = rows_;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m.at(p, c) == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    Rat inv = Rat(1) / m.at(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (m.at(i, c) == 0) continue;
      Rat f = m.at(i, c) * inv;
      for (size_t j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

std::optional<RatVec> RatMatrix::solve(const RatVec& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: size mismatch");
  RatMatrix aug(rows_, cols_ + 1);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  auto pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // row [0 .. 0 | 1]
  RatVec x(cols_, Rat(0));
  for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, cols_);
  return x;
}

RatMatrix RatMatrix::kernel_basis() const {
  RatMatrix r = *this;
  auto pivots = r.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < cols_; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix k(free_cols.size(), cols_);
  for (size_t fi = 0; fi < free_cols.size(); ++fi) {
    size_t f = free_cols[fi];
    k.at(fi, f) = 1;
    for (size_t pi = 0; pi < pivots.size(); ++pi) k.at(fi, pivots[pi]) = -r.at(pi, f);
  }
  return k;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
  if (!is_square()) throw std::invalid_argument("inverse: not square");
  size_t n = rows_;
  RatMatrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto pivots = aug.rref();
  if (pivots.size() != n || pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

RatMatrix RatMatrix::hstack(const RatMatrix& b) const {
  if (rows_ != b.rows_) throw std::invalid_argument("hstack: row mismatch");
  RatMatrix c(rows_, cols_ + b.cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) c.at(i, j) = at(i, j);
    for (size_t j = 0; j < b.cols_; ++j) c.at(i, cols_ + j) = b.at(i, j);
  }
  return c;
}

RatMatrix RatMatrix::vstack(const RatMatrix& b) const {
  if (cols_ != b.cols_ && rows_ != 0 && b.rows_ != 0)
    throw std::invalid_argument("vstack: col mismatch");
  size_t cols = rows_ ? cols_ : b.cols_;
  RatMatrix c(rows_ + b.rows_, cols);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) c.at(i, j) = at(i, j);
  for (size_t i = 0; i < b.rows_; ++i)
    for (size_t j = 0; j < b.cols_; ++j) c.at(rows_ + i, j) = b.at(i, j);
  return c;
}

RatMatrix RatMatrix::submatrix_cols(size_t c0, size_t c1) const {
  if (c0 > c1 || c1 > cols_) throw std::invalid_argument("submatrix_cols: bad range");
  RatMatrix c(rows_, c1 - c0);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = c0; j < c1; ++j) c.at(i, j - c0) = at(i, j);
  return c;
}

std::string RatMatrix::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < rows_; ++i) {
    os << '[';
    for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
  RatVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
  RatVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

RatVec vec_scale(const Rat& s, const RatVec& a) {
  RatVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

bool vec_is_zero(const RatVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

int vec_cmp(const RatVec& a, const RatVec& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  if (a.size() < b.size()) return -1;
  if (a.size() > b.size()) return 1;
  return 0;
}

}  // namespace syswork
