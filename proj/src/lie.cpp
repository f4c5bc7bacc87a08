#include "syswork/lie.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "syswork/subspace.hpp"

namespace syswork {

LieStructure::LieStructure(size_t dim,
                           const std::vector<std::tuple<size_t, size_t, size_t, Rat>>& entries)
    : n_(dim), c_(dim * dim * dim, Rat(0)) {
  for (const auto& [i, j, k, v] : entries) {
    if (i >= n_ || j >= n_ || k >= n_ || i >= j)
      throw std::invalid_argument("bad structure constant index");
    c_[(k * n_ + i) * n_ + j] += v;
    c_[(k * n_ + j) * n_ + i] -= v;
  }
  // Jacobi: sum over cyclic permutations of [[e_i,e_j],e_k] vanishes.
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = i + 1; j < n_; ++j)
      for (size_t k = j + 1; k < n_; ++k)
        for (size_t l = 0; l < n_; ++l) {
          Rat s(0);
          for (size_t m = 0; m < n_; ++m) {
            s += c(m, i, j) * c(l, m, k);
            s += c(m, j, k) * c(l, m, i);
            s += c(m, k, i) * c(l, m, j);
          }
          if (s != 0) {
            std::ostringstream os;
            os << "Jacobi identity fails at (i,j,k,l)=(" << i << "," << j << "," << k
               << "," << l << ")";
            throw JacobiError(os.str());
          }
        }
}

bool LieStructure::is_nilpotent() const {
  // g_1 = g, g_{p+1} = [g, g_p]; nilpotent iff the series hits zero.
  Subspace cur = Subspace::span(RatMatrix::identity(n_));
  for (size_t step = 0; step <= n_; ++step) {
    if (cur.dim() == 0) return true;
    std::vector<RatVec> brackets;
    for (size_t i = 0; i < n_; ++i) {
      for (size_t r = 0; r < cur.dim(); ++r) {
        RatVec w = cur.basis().row(r);
        RatVec out(n_, Rat(0));
        for (size_t j = 0; j < n_; ++j) {
          if (w[j] == 0) continue;
          for (size_t k = 0; k < n_; ++k) out[k] += w[j] * c(k, i, j);
        }
        brackets.push_back(out);
      }
    }
    Subspace next = brackets.empty() ? Subspace(n_) : Subspace::span(RatMatrix::from_rows(brackets));
    if (next == cur) return next.dim() == 0;  // series stabilized
    cur = next;
  }
  return cur.dim() == 0;
}

bool LieStructure::all_integral() const {
  for (const Rat& v : c_)
    if (!is_integer(v)) return false;
  return true;
}

std::vector<std::vector<size_t>> index_subsets(size_t n, size_t k) {
  std::vector<std::vector<size_t>> out;
  if (k > n) return out;
  std::vector<size_t> cur(k);
  for (size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    // next lexicographic k-subset
    size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  if (k == 0) out.assign(1, {});
  return out;
}

std::pair<int, std::vector<size_t>> merge_monomials(const std::vector<size_t>& a,
                                                    const std::vector<size_t>& b) {
  // Sign is (-1)^{inversions between a and b}; repeated index kills the term.
  for (size_t x : a)
    for (size_t y : b)
      if (x == y) return {0, {}};
  int inversions = 0;
  for (size_t x : a)
    for (size_t y : b)
      if (x > y) ++inversions;
  std::vector<size_t> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  return {(inversions % 2 == 0) ? 1 : -1, merged};
}

namespace {

std::string monomial_label(const std::vector<size_t>& s) {
  if (s.empty()) return "1";
  std::ostringstream os;
  os << "e";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << "^e";
    os << s[i] + 1;
  }
  return os.str();
}

}  // namespace

CochainModel build_chevalley_eilenberg(const LieStructure& lie) {
  const size_t n = lie.dim();
  CochainModel m;
  m.top_degree = n;
  m.commutative = true;
  m.has_integral = lie.all_integral();
  m.dims.resize(n + 1);
  m.labels.resize(n + 1);
  m.cycles.resize(n + 1);

  std::vector<std::vector<std::vector<size_t>>> mono(n + 1);
  std::vector<std::map<std::vector<size_t>, size_t>> index(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    mono[k] = index_subsets(n, k);
    m.dims[k] = mono[k].size();
    for (size_t i = 0; i < mono[k].size(); ++i) {
      index[k][mono[k][i]] = i;
      m.labels[k].push_back(monomial_label(mono[k][i]));
    }
  }

  // d e^j = -sum_{i<k} c^j_{ik} e^i e^k, then Leibniz over monomials:
  // d e^S = sum_p (-1)^p e^{s_0..s_{p-1}} (d e^{s_p}) e^{s_{p+1}..}.
  m.d.resize(n + 1);
  for (size_t k = 0; k < n; ++k) {
    RatMatrix dk(m.dims[k + 1], m.dims[k]);
    for (size_t col = 0; col < m.dims[k]; ++col) {
      const auto& S = mono[k][col];
      for (size_t p = 0; p < S.size(); ++p) {
        std::vector<size_t> rest;
        for (size_t q = 0; q < S.size(); ++q)
          if (q != p) rest.push_back(S[q]);
        int psign = (p % 2 == 0) ? 1 : -1;
        size_t gen = S[p];
        for (size_t i = 0; i < n; ++i) {
          for (size_t j = i + 1; j < n; ++j) {
            Rat cv = lie.c(gen, i, j);
            if (cv == 0) continue;
            auto [ms, merged] = merge_monomials({i, j}, rest);
            if (ms == 0) continue;
            // contribution: (-1)^p * (-c^gen_{ij}) * sign * e^merged
            dk.at(index[k + 1][merged], col) += Rat(-psign * ms) * cv;
          }
        }
      }
    }
    m.d[k] = dk;
  }
  m.d[n] = RatMatrix(0, m.dims[n]);

  m.mu.assign(n + 1, std::vector<RatMatrix>(n + 1));
  for (size_t k = 0; k <= n; ++k) {
    for (size_t l = 0; k + l <= n; ++l) {
      RatMatrix t(m.dims[k + l], m.dims[k] * m.dims[l]);
      for (size_t i = 0; i < m.dims[k]; ++i) {
        for (size_t j = 0; j < m.dims[l]; ++j) {
          auto [s, merged] = merge_monomials(mono[k][i], mono[l][j]);
          if (s == 0) continue;
          t.at(index[k + l][merged], i * m.dims[l] + j) = Rat(s);
        }
      }
      m.mu[k][l] = t;
    }
  }
  return m;
}

}  // namespace syswork
