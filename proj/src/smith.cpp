#include "syswork/smith.hpp"

#include <stdexcept>

namespace syswork {

IntMatrix IntMatrix::identity(size_t n) {
  IntMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
    for (size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& b) const {
  if (cols_ != b.rows_) throw std::invalid_argument("int matmul: shape mismatch");
  IntMatrix c(rows_, b.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) continue;
      for (size_t j = 0; j < b.cols_; ++j) c.at(i, j) += at(i, k) * b.at(k, j);
    }
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntVec IntMatrix::row(size_t i) const {
  IntVec r(cols_);
  for (size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

IntVec IntMatrix::apply(const IntVec& x) const {
  IntVec y(rows_, Int(0));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) y[i] += at(i, j) * x[j];
  return y;
}

RatMatrix IntMatrix::to_rat() const {
  RatMatrix m(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m.at(i, j) = Rat(at(i, j));
  return m;
}

std::optional<IntMatrix> IntMatrix::from_rat(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if (!is_integer(m.at(i, j))) return std::nullopt;
      r.at(i, j) = m.at(i, j).get_num();
    }
  return r;
}

Int IntMatrix::det() const {
  Rat d = to_rat().det();
  if (!is_integer(d)) throw std::logic_error("integer det came out fractional");
  return d.get_num();
}

namespace {

struct SnfWork {
  IntMatrix m, u, v;

  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
    for (size_t j = 0; j < u.cols(); ++j) std::swap(u.at(a, j), u.at(b, j));
  }
  void swap_cols(size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
    for (size_t i = 0; i < v.rows(); ++i) std::swap(v.at(i, a), v.at(i, b));
  }
  // row a -= q * row b
  void row_sub(size_t a, size_t b, const Int& q) {
    if (q == 0) return;
    for (size_t j = 0; j < m.cols(); ++j) m.at(a, j) -= q * m.at(b, j);
    for (size_t j = 0; j < u.cols(); ++j) u.at(a, j) -= q * u.at(b, j);
  }
  void col_sub(size_t a, size_t b, const Int& q) {
    if (q == 0) return;
    for (size_t i = 0; i < m.rows(); ++i) m.at(i, a) -= q * m.at(i, b);
    for (size_t i = 0; i < v.rows(); ++i) v.at(i, a) -= q * v.at(i, b);
  }
  void negate_row(size_t a) {
    for (size_t j = 0; j < m.cols(); ++j) m.at(a, j) = -m.at(a, j);
    for (size_t j = 0; j < u.cols(); ++j) u.at(a, j) = -u.at(a, j);
  }
  void col_add(size_t a, size_t b) {  // col a += col b
    for (size_t i = 0; i < m.rows(); ++i) m.at(i, a) += m.at(i, b);
    for (size_t i = 0; i < v.rows(); ++i) v.at(i, a) += v.at(i, b);
  }
};

// Locate the entry of minimal nonzero absolute value in the lower-right block
// starting at (t, t).  Returns false when the block is zero.
bool find_pivot(const IntMatrix& m, size_t t, size_t& pi, size_t& pj) {
  bool found = false;
  Int best;
  for (size_t i = t; i < m.rows(); ++i)
    for (size_t j = t; j < m.cols(); ++j) {
      if (m.at(i, j) == 0) continue;
      Int a = abs(m.at(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& input) {
  SnfWork w{input, IntMatrix::identity(input.rows()), IntMatrix::identity(input.cols())};
  size_t n = std::min(input.rows(), input.cols());

  for (size_t t = 0; t < n; ++t) {
    size_t pi, pj;
    if (!find_pivot(w.m, t, pi, pj)) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);

    // Clear row and column t; restart whenever a division leaves a remainder,
    // since the remainder becomes a smaller pivot candidate.
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < w.m.rows(); ++i) {
        if (w.m.at(i, t) == 0) continue;
        Int q = floor_div(w.m.at(i, t), w.m.at(t, t));
        w.row_sub(i, t, q);
        if (w.m.at(i, t) != 0) {
          w.swap_rows(t, i);
          clean = false;
        }
      }
      for (size_t j = t + 1; j < w.m.cols(); ++j) {
        if (w.m.at(t, j) == 0) continue;
        Int q = floor_div(w.m.at(t, j), w.m.at(t, t));
        w.col_sub(j, t, q);
        if (w.m.at(t, j) != 0) {
          w.swap_cols(t, j);
          clean = false;
        }
      }
    }

    // Divisibility sweep: fold any non-multiple below-right into column t.
    bool redo = false;
    for (size_t i = t + 1; i < w.m.rows() && !redo; ++i)
      for (size_t j = t + 1; j < w.m.cols() && !redo; ++j)
        if (w.m.at(i, j) % w.m.at(t, t) != 0) {
          w.col_add(t, j);
          redo = true;
        }
    if (redo) {
      --t;
      continue;
    }
    if (w.m.at(t, t) < 0) w.negate_row(t);
  }

  SmithResult res{w.u, w.m, w.v, {}};
  for (size_t i = 0; i < n; ++i) res.diagonal.push_back(w.m.at(i, i));
  return res;
}

std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_integer: size mismatch");
  SmithResult s = smith_normal_form(a);
  // A x = b  <=>  D (V^-1 x) = U b
  IntVec ub(a.rows(), Int(0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.rows(); ++j) ub[i] += s.U.at(i, j) * b[j];
  IntVec y(a.cols(), Int(0));
  size_t n = std::min(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    Int d = i < n ? s.D.at(i, i) : Int(0);
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      if (i < a.cols()) y[i] = ub[i] / d;
    }
  }
  IntVec x(a.cols(), Int(0));
  for (size_t i = 0; i < a.cols(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) x[i] += s.V.at(i, j) * y[j];
  return x;
}

IntMatrix integer_kernel(const IntMatrix& a) {
  SmithResult s = smith_normal_form(a);
  size_t n = std::min(a.rows(), a.cols());
  std::vector<IntVec> rows;
  for (size_t j = 0; j < a.cols(); ++j) {
    bool zero_diag = j >= n || s.D.at(j, j) == 0;
    if (!zero_diag) continue;
    IntVec col(a.cols());
    for (size_t i = 0; i < a.cols(); ++i) col[i] = s.V.at(i, j);
    rows.push_back(col);
  }
  return IntMatrix::from_rows(rows);
}

IntMatrix hnf_row_basis(const IntMatrix& gens) {
  IntMatrix m = gens;
  size_t rows = m.rows(), cols = m.cols();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // Euclidean elimination in column c below row r.
    while (true) {
      size_t p = rows;
      for (size_t i = r; i < rows; ++i)
        if (m.at(i, c) != 0 && (p == rows || abs(m.at(i, c)) < abs(m.at(p, c)))) p = i;
      if (p == rows) break;
      if (p != r)
        for (size_t j = 0; j < cols; ++j) std::swap(m.at(p, j), m.at(r, j));
      bool done = true;
      for (size_t i = r + 1; i < rows; ++i) {
        if (m.at(i, c) == 0) continue;
        Int q = floor_div(m.at(i, c), m.at(r, c));
        for (size_t j = 0; j < cols; ++j) m.at(i, j) -= q * m.at(r, j);
        if (m.at(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m.at(r, c) == 0) continue;
    if (m.at(r, c) < 0)
      for (size_t j = 0; j < cols; ++j) m.at(r, j) = -m.at(r, j);
    // Reduce entries above the pivot into [0, pivot).
    for (size_t i = 0; i < r; ++i) {
      Int q = floor_div(m.at(i, c), m.at(r, c));
      if (q != 0)
        for (size_t j = 0; j < cols; ++j) m.at(i, j) -= q * m.at(r, j);
    }
    ++r;
  }
  std::vector<IntVec> keep;
  for (size_t i = 0; i < r; ++i) {
    IntVec row(cols);
    for (size_t j = 0; j < cols; ++j) row[j] = m.at(i, j);
    keep.push_back(row);
  }
  return IntMatrix::from_rows(keep);
}

RatMatrix RatLatticeBasis::to_rat() const {
  RatMatrix m = rows.to_rat();
  return m.scaled(Rat(Int(1), denom));
}

RatLatticeBasis lattice_from_generators(const RatMatrix& gens) {
  Int denom(1);
  for (size_t i = 0; i < gens.rows(); ++i)
    for (size_t j = 0; j < gens.cols(); ++j) {
      Int d = gens.at(i, j).get_den();
      denom = lcm(denom, d);
    }
  IntMatrix scaled(gens.rows(), gens.cols());
  for (size_t i = 0; i < gens.rows(); ++i)
    for (size_t j = 0; j < gens.cols(); ++j) {
      Rat x = gens.at(i, j) * Rat(denom);
      scaled.at(i, j) = x.get_num();
    }
  return RatLatticeBasis{hnf_row_basis(scaled), denom};
}

std::optional<IntVec> lattice_coordinates(const RatLatticeBasis& basis, const RatVec& v) {
  // v = (c^T * rows) / denom  =>  rows^T c = denom * v, c integral.
  RatMatrix bt = basis.rows.to_rat().transpose();
  RatVec target(v.size());
  for (size_t i = 0; i < v.size(); ++i) target[i] = v[i] * Rat(basis.denom);
  auto sol = bt.solve(target);
  if (!sol) return std::nullopt;
  // HNF rows are independent, so the solution is unique; check integrality
  // and residual.
  RatVec back = bt.apply(*sol);
  if (back != target) return std::nullopt;
  IntVec c(sol->size());
  for (size_t i = 0; i < sol->size(); ++i) {
    if (!is_integer((*sol)[i])) return std::nullopt;
    c[i] = (*sol)[i].get_num();
  }
  return c;
}

bool lattice_contains(const RatLatticeBasis& basis, const RatVec& v) {
  return lattice_coordinates(basis, v).has_value();
}

}  // namespace syswork
