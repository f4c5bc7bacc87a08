#include "syswork/simplicial.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace syswork {

SimplicialComplex SimplicialComplex::from_simplices(
    const std::vector<std::vector<size_t>>& given) {
  std::set<std::vector<size_t>> closed;
  // Close under faces by walking all subsets of every simplex.
  for (auto s : given) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("simplex with repeated vertex");
    size_t k = s.size();
    for (size_t mask = 1; mask < (size_t{1} << k); ++mask) {
      std::vector<size_t> face;
      for (size_t i = 0; i < k; ++i)
        if (mask & (size_t{1} << i)) face.push_back(s[i]);
      closed.insert(face);
    }
  }
  SimplicialComplex out;
  for (const auto& s : closed) {
    out.vertices = std::max(out.vertices, s.back() + 1);
    if (out.simplices.size() < s.size()) out.simplices.resize(s.size());
    out.simplices[s.size() - 1].push_back(s);
  }
  for (auto& level : out.simplices) std::sort(level.begin(), level.end());
  return out;
}

namespace {

std::string simplex_label(const std::vector<size_t>& s) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << s[i];
  }
  os << "]";
  return os.str();
}

// Free part of H_k from the boundary maps: kernel of boundary_k, modulo the
// image of boundary_{k+1}, generators pulled back through the Smith form.
RatMatrix homology_functionals(const IntMatrix& kernel, const IntMatrix& boundary_next) {
  size_t r = kernel.rows();
  if (r == 0) return RatMatrix(0, kernel.cols());
  // Express each column of boundary_{k+1} in kernel coordinates.
  size_t s = boundary_next.cols();
  IntMatrix y(r, s);
  IntMatrix kt = kernel.transpose();
  for (size_t j = 0; j < s; ++j) {
    IntVec col(boundary_next.rows());
    for (size_t i = 0; i < boundary_next.rows(); ++i) col[i] = boundary_next.at(i, j);
    auto coords = solve_integer(kt, col);
    if (!coords) throw std::logic_error("boundary image escapes the cycle lattice");
    for (size_t i = 0; i < r; ++i) y.at(i, j) = (*coords)[i];
  }
  SmithResult snf = smith_normal_form(y);
  // Cokernel coordinates w = U z split into torsion rows (d_i > 1), collapsed
  // rows (d_i = 1) and free rows; free generators pull back via U^{-1}.
  auto uinv_r = snf.U.to_rat().inverse();
  if (!uinv_r) throw std::logic_error("unimodular factor not invertible");
  std::vector<RatVec> rows;
  size_t diag = snf.diagonal.size();
  for (size_t i = 0; i < r; ++i) {
    if (i < diag && snf.diagonal[i] != 0) continue;  // killed or torsion
    RatVec z = uinv_r->col(i);
    RatVec cyc(kernel.cols(), Rat(0));
    for (size_t a = 0; a < r; ++a)
      for (size_t b = 0; b < kernel.cols(); ++b) cyc[b] += z[a] * Rat(kernel.at(a, b));
    rows.push_back(cyc);
  }
  if (rows.empty()) return RatMatrix(0, kernel.cols());
  return RatMatrix::from_rows(rows);
}

}  // namespace

CochainModel build_simplicial_cochains(const SimplicialComplex& complex) {
  const auto& simp = complex.simplices;
  if (simp.empty() || simp[0].empty()) throw std::invalid_argument("empty complex");
  size_t top = complex.top_dimension();

  CochainModel m;
  m.top_degree = top;
  m.commutative = false;
  m.has_integral = true;
  m.dims.resize(top + 1);
  m.labels.resize(top + 1);
  m.cycles.resize(top + 1);

  std::vector<std::map<std::vector<size_t>, size_t>> index(top + 1);
  for (size_t k = 0; k <= top; ++k) {
    m.dims[k] = simp[k].size();
    for (size_t i = 0; i < simp[k].size(); ++i) {
      index[k][simp[k][i]] = i;
      m.labels[k].push_back(simplex_label(simp[k][i]));
    }
  }

  // Coboundary: (d f)(s) = sum_i (-1)^i f(s minus vertex i).
  m.d.resize(top + 1);
  for (size_t k = 0; k < top; ++k) {
    RatMatrix dk(m.dims[k + 1], m.dims[k]);
    for (size_t row = 0; row < m.dims[k + 1]; ++row) {
      const auto& s = simp[k + 1][row];
      for (size_t i = 0; i < s.size(); ++i) {
        std::vector<size_t> face;
        for (size_t q = 0; q < s.size(); ++q)
          if (q != i) face.push_back(s[q]);
        auto it = index[k].find(face);
        if (it == index[k].end()) throw std::logic_error("complex not closed under faces");
        dk.at(row, it->second) += Rat(i % 2 == 0 ? 1 : -1);
      }
    }
    m.d[k] = dk;
  }
  m.d[top] = RatMatrix(0, m.dims[top]);

  // Front-face/back-face product: (f g)(s) = f(s[0..k]) g(s[k..k+l]).
  m.mu.assign(top + 1, std::vector<RatMatrix>(top + 1));
  for (size_t k = 0; k <= top; ++k) {
    for (size_t l = 0; k + l <= top; ++l) {
      RatMatrix t(m.dims[k + l], m.dims[k] * m.dims[l]);
      for (size_t r = 0; r < m.dims[k + l]; ++r) {
        const auto& s = simp[k + l][r];
        std::vector<size_t> front(s.begin(), s.begin() + k + 1);
        std::vector<size_t> back(s.begin() + k, s.end());
        auto fi = index[k].find(front);
        auto bi = index[l].find(back);
        if (fi == index[k].end() || bi == index[l].end())
          throw std::logic_error("complex not closed under faces");
        t.at(r, fi->second * m.dims[l] + bi->second) += Rat(1);
      }
      m.mu[k][l] = t;
    }
  }

  // Boundary of a k-simplex in the (k-1)-basis equals the transpose of the
  // degree-(k-1) coboundary, so cycle lattices come from integer kernels.
  std::vector<IntMatrix> boundary(top + 2);  // boundary[k]: C_k -> C_{k-1}
  boundary[0] = IntMatrix(0, m.dims[0]);
  for (size_t k = 1; k <= top; ++k) boundary[k] = *IntMatrix::from_rat(m.d[k - 1].transpose());
  boundary[top + 1] = IntMatrix(m.dims[top], 0);
  for (size_t k = 0; k <= top; ++k) {
    IntMatrix cyc = integer_kernel(boundary[k]);
    m.cycles[k] = homology_functionals(cyc, boundary[k + 1]);
  }
  return m;
}

}  // namespace syswork
