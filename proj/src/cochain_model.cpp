#include "syswork/cochain_model.hpp"

#include <sstream>

#include "syswork/subspace.hpp"

namespace syswork {

Cochain CochainModel::basis_cochain(size_t k, size_t i) const {
  Cochain v = zero_cochain(k);
  v.at(i) = 1;
  return v;
}

Cochain CochainModel::apply_d(size_t k, const Cochain& a) const {
  if (k >= top_degree) return Cochain();
  return d[k].apply(a);
}

bool CochainModel::is_closed(size_t k, const Cochain& a) const {
  return vec_is_zero(apply_d(k, a));
}

Cochain CochainModel::wedge(size_t k, size_t l, const Cochain& a, const Cochain& b) const {
  if (k + l > top_degree) return Cochain();  // zero space above the top degree
  const RatMatrix& m = mu[k][l];
  Cochain out(dims[k + l], Rat(0));
  for (size_t i = 0; i < dims[k]; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < dims[l]; ++j) {
      if (b[j] == 0) continue;
      Rat coef = a[i] * b[j];
      size_t col = i * dims[l] + j;
      for (size_t r = 0; r < m.rows(); ++r) {
        const Rat& e = m.at(r, col);
        if (e != 0) out[r] += coef * e;
      }
    }
  }
  return out;
}

Cochain CochainModel::solve_primitive(size_t k, const Cochain& alpha) const {
  if (k == 0 || k > top_degree)
    throw NotExactError("not exact: degree has no primitives", alpha);
  auto x = d[k - 1].solve(alpha);
  if (!x) {
    // Hand back the part of alpha the image of d cannot reach: reduce alpha
    // against the canonical image basis (RREF rows, pivot entries 1).
    Subspace img = Subspace::span(d[k - 1].transpose());
    Cochain residual = alpha;
    const RatMatrix& rows = img.basis();
    for (size_t r = 0; r < rows.rows(); ++r) {
      size_t p = 0;
      while (p < rows.cols() && rows.at(r, p) == 0) ++p;
      if (p == rows.cols()) continue;
      Rat c = residual[p];
      if (c == 0) continue;
      for (size_t j = 0; j < rows.cols(); ++j) residual[j] -= c * rows.at(r, j);
    }
    throw NotExactError("not exact: no primitive exists", residual);
  }
  return *x;
}

Cochain CochainModel::solve_primitive_integral(size_t k, const Cochain& alpha) const {
  if (!has_integral)
    throw NotExactError("not exact: model has no integral structure", alpha);
  if (k == 0 || k > top_degree)
    throw NotExactError("not exact: degree has no primitives", alpha);
  auto dm = IntMatrix::from_rat(d[k - 1]);
  if (!dm)
    throw NotExactError("not exact: differential is not integral", alpha);
  IntVec rhs(alpha.size());
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (!is_integer(alpha[i]))
      throw NotExactError("not exact: right-hand side is not integral", alpha);
    rhs[i] = alpha[i].get_num();
  }
  auto x = solve_integer(*dm, rhs);
  if (!x)
    throw NotExactError(
        "not exact: non-integral primitive choice or torsion obstruction", alpha);
  Cochain out(x->size());
  for (size_t i = 0; i < x->size(); ++i) out[i] = Rat((*x)[i]);
  return out;
}

ValidityReport CochainModel::validate() const {
  ValidityReport rep;
  // d^2 = 0.
  for (size_t k = 0; k + 1 < top_degree; ++k) {
    RatMatrix sq = d[k + 1] * d[k];
    if (!sq.is_zero()) {
      std::ostringstream os;
      os << "d^2 != 0 at degree " << k;
      rep.fail(os.str());
    }
  }
  // Leibniz on basis pairs: d(a b) = (d a) b + (-1)^k a (d b).
  for (size_t k = 0; k <= top_degree; ++k) {
    for (size_t l = 0; k + l <= top_degree; ++l) {
      for (size_t i = 0; i < dims[k]; ++i) {
        Cochain a = basis_cochain(k, i);
        Cochain da = apply_d(k, a);
        for (size_t j = 0; j < dims[l]; ++j) {
          Cochain b = basis_cochain(l, j);
          Cochain lhs = apply_d(k + l, wedge(k, l, a, b));
          Cochain rhs = wedge(k + 1, l, da, b);
          Cochain t2 = wedge(k, l + 1, a, apply_d(l, b));
          if (k % 2 == 1) t2 = vec_scale(Rat(-1), t2);
          rhs = rhs.empty() ? t2 : (t2.empty() ? rhs : vec_add(rhs, t2));
          if (lhs.empty() && rhs.empty()) continue;
          if (lhs.empty()) lhs = Cochain(rhs.size(), Rat(0));
          if (rhs.empty()) rhs = Cochain(lhs.size(), Rat(0));
          if (!vec_is_zero(vec_sub(lhs, rhs))) {
            std::ostringstream os;
            os << "Leibniz fails at degrees (" << k << "," << l << ") basis (" << i
               << "," << j << ")";
            rep.fail(os.str());
          }
        }
      }
    }
  }
  // Associativity on basis triples.
  for (size_t k = 0; k <= top_degree; ++k) {
    for (size_t l = 0; k + l <= top_degree; ++l) {
      for (size_t m = 0; k + l + m <= top_degree; ++m) {
        for (size_t i = 0; i < dims[k]; ++i) {
          Cochain a = basis_cochain(k, i);
          for (size_t j = 0; j < dims[l]; ++j) {
            Cochain b = basis_cochain(l, j);
            Cochain ab = wedge(k, l, a, b);
            for (size_t h = 0; h < dims[m]; ++h) {
              Cochain c = basis_cochain(m, h);
              Cochain lhs = wedge(k + l, m, ab, c);
              Cochain rhs = wedge(k, l + m, a, wedge(l, m, b, c));
              if (!vec_is_zero(vec_sub(lhs, rhs))) {
                std::ostringstream os;
                os << "associativity fails at degrees (" << k << "," << l << "," << m
                   << ") basis (" << i << "," << j << "," << h << ")";
                rep.fail(os.str());
              }
            }
          }
        }
      }
    }
  }
  // Graded commutativity when declared.
  if (commutative) {
    for (size_t k = 0; k <= top_degree; ++k) {
      for (size_t l = k; k + l <= top_degree; ++l) {
        for (size_t i = 0; i < dims[k]; ++i) {
          Cochain a = basis_cochain(k, i);
          for (size_t j = 0; j < dims[l]; ++j) {
            Cochain b = basis_cochain(l, j);
            Cochain ab = wedge(k, l, a, b);
            Cochain ba = wedge(l, k, b, a);
            if ((k * l) % 2 == 1) ba = vec_scale(Rat(-1), ba);
            if (!vec_is_zero(vec_sub(ab, ba))) {
              std::ostringstream os;
              os << "commutativity fails at degrees (" << k << "," << l << ")";
              rep.fail(os.str());
            }
          }
        }
      }
    }
  }
  // Integral structure: all differentials integer-valued on the standard basis.
  if (has_integral) {
    for (size_t k = 0; k < top_degree; ++k) {
      if (!IntMatrix::from_rat(d[k])) {
        std::ostringstream os;
        os << "integral lattice not preserved by d at degree " << k;
        rep.fail(os.str());
      }
    }
  }
  // Declared homology functionals must vanish on exact cochains.
  for (size_t k = 0; k + 1 <= top_degree; ++k) {
    if (cycles.size() <= k + 1 || cycles[k + 1].rows() == 0) continue;
    // cycles[k+1] is (rows x dims[k+1]), d[k] is (dims[k+1] x dims[k]).
    RatMatrix prod = cycles[k + 1] * d[k];
    if (!prod.is_zero()) {
      std::ostringstream os;
      os << "declared cycles at degree " << k + 1 << " do not annihilate exact cochains";
      rep.fail(os.str());
    }
  }
  return rep;
}

}  // namespace syswork
