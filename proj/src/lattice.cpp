#include "syswork/lattice.hpp"

#include <algorithm>
#include <functional>

#include "syswork/subspace.hpp"

namespace syswork {

namespace {

// Exact LDL^T of a symmetric positive definite rational matrix.
struct Ldl {
  RatMatrix l;       // unit lower triangular
  std::vector<Rat> d;  // positive diagonal
};

Ldl ldl_decompose(const RatMatrix& g) {
  size_t n = g.rows();
  Ldl out{RatMatrix::identity(n), std::vector<Rat>(n)};
  for (size_t j = 0; j < n; ++j) {
    Rat dj = g.at(j, j);
    for (size_t k = 0; k < j; ++k) dj -= out.l.at(j, k) * out.l.at(j, k) * out.d[k];
    if (!(dj > 0)) throw std::invalid_argument("lattice Gram is not positive definite");
    out.d[j] = dj;
    for (size_t i = j + 1; i < n; ++i) {
      Rat v = g.at(i, j);
      for (size_t k = 0; k < j; ++k) v -= out.l.at(i, k) * out.l.at(j, k) * out.d[k];
      out.l.at(i, j) = v / dj;
    }
  }
  return out;
}

// All nonzero integer points with z^T G z <= r2, one representative per
// +-pair (first nonzero coordinate positive).
std::vector<IntVec> enumerate_ball(const RatMatrix& g, const Rat& r2, size_t budget,
                                   size_t* visited_out) {
  size_t n = g.rows();
  Ldl f = ldl_decompose(g);
  std::vector<IntVec> found;
  IntVec z(n, Int(0));
  size_t visited = 0;

  // Depth-first from the last coordinate; at each level the quadratic form
  // splits off d_i (z_i + c_i)^2 with c_i determined by deeper levels.
  std::function<void(size_t, const Rat&)> rec = [&](size_t level, const Rat& budget_left) {
    size_t i = level - 1;
    Rat ci(0);
    for (size_t j = level; j < n; ++j)
      if (z[j] != 0) ci += f.l.at(j, i) * Rat(z[j]);
    Rat t = budget_left / f.d[i];
    Int zlo = ceil_minus_sqrt(-ci, t);
    Int zhi = floor_plus_sqrt(-ci, t);
    for (Int v = zlo; v <= zhi; ++v) {
      ++visited;
      if (visited > budget)
        throw EnumerationBudgetError("enumeration budget exhausted", visited,
                                     std::sqrt(rat_d(r2)));
      z[i] = v;
      Rat term = Rat(v) + ci;
      Rat used = f.d[i] * term * term;
      Rat rem = budget_left - used;
      if (rem < 0) continue;  // guards rounding at interval ends
      if (i == 0) {
        bool nonzero = false;
        for (const Int& w : z)
          if (w != 0) {
            nonzero = true;
            break;
          }
        if (nonzero) {
          IntVec c = z;
          for (size_t k = 0; k < n; ++k) {
            if (c[k] == 0) continue;
            if (c[k] < 0)
              for (size_t m = 0; m < n; ++m) c[m] = -c[m];
            break;
          }
          found.push_back(c);
        }
      } else {
        rec(i, rem);
      }
    }
    z[i] = 0;
  };
  if (n > 0) rec(n, r2);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (visited_out) *visited_out = visited;
  return found;
}

RatVec coords_to_ambient(const RatMatrix& basis, const IntVec& z) {
  RatVec v(basis.cols(), Rat(0));
  for (size_t i = 0; i < basis.rows(); ++i) {
    if (z[i] == 0) continue;
    Rat c = Rat(z[i]);
    for (size_t j = 0; j < basis.cols(); ++j) v[j] += c * basis.at(i, j);
  }
  return v;
}

}  // namespace

MinimaResult successive_minima(const NormedLattice& lat, size_t budget) {
  const RatMatrix& b = lat.basis;
  size_t rank = b.rows();
  if (rank == 0) throw std::invalid_argument("empty lattice basis");
  if (b.rank() != rank) throw std::invalid_argument("lattice basis rows are dependent");

  // Gram of the lower-bound quadratic in lattice coordinates.
  const RatMatrix& q = lat.norm.lower_bound_gram();
  RatMatrix g = b * q * b.transpose();

  // Radius: every basis vector has true norm <= R, so the b-th minimum does
  // too, and every candidate with true norm <= R sits inside the Q-ball.
  Rat r2(0);
  for (size_t i = 0; i < rank; ++i) {
    Rat u = lat.norm.eval(b.row(i)).upper_sq();
    if (u > r2) r2 = u;
  }

  size_t visited = 0;
  std::vector<IntVec> pts = enumerate_ball(g, r2, budget, &visited);

  struct Cand {
    IntVec z;
    RatVec v;
    NormVal n;
  };
  std::vector<Cand> cands;
  cands.reserve(pts.size());
  for (auto& z : pts) {
    RatVec v = coords_to_ambient(b, z);
    cands.push_back(Cand{std::move(z), std::move(v), {}});
    cands.back().n = lat.norm.eval(cands.back().v);
  }
  // Exact candidate sets sort by exact comparison; once intervals are in
  // play, order by the enclosure fields so the comparator stays a strict
  // weak ordering.  Coordinates break ties deterministically either way.
  bool all_exact = std::all_of(cands.begin(), cands.end(),
                               [](const Cand& c) { return c.n.exact(); });
  auto lex_coords = [](const IntVec& a, const IntVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  };
  std::sort(cands.begin(), cands.end(), [&](const Cand& x, const Cand& y) {
    if (all_exact) {
      int c = norm_cmp(x.n, y.n);
      if (c != 0) return c < 0;
    } else {
      if (x.n.lo != y.n.lo) return x.n.lo < y.n.lo;
      if (x.n.hi != y.n.hi) return x.n.hi < y.n.hi;
    }
    return lex_coords(x.z, y.z) < 0;
  });

  MinimaResult out;
  std::vector<IntVec> wit_rows;
  std::vector<RatVec> vec_rows;
  Subspace span(b.cols());
  for (const Cand& c : cands) {
    if (span.contains(c.v)) continue;
    span = span.sum(Subspace::span(RatMatrix::row_vector(c.v)));
    out.minima.push_back(c.n);
    wit_rows.push_back(c.z);
    vec_rows.push_back(c.v);
    if (out.minima.size() == rank) break;
  }
  if (out.minima.size() != rank)
    throw std::logic_error("enumeration missed an independent family");
  out.witnesses = IntMatrix::from_rows(wit_rows);
  out.witness_vectors = RatMatrix::from_rows(vec_rows);
  out.enumerated = visited;
  return out;
}

NormedLattice dual_lattice(const NormedLattice& lat) {
  if (!lat.basis.is_square()) throw std::invalid_argument("dual lattice needs a square basis");
  auto inv = lat.basis.inverse();
  if (!inv) throw std::invalid_argument("lattice basis is singular");
  return NormedLattice{inv->transpose(), lat.norm.dual()};
}

QuasiFamilyResult quasiorthogonal_family(const NormedLattice& lat, size_t budget) {
  MinimaResult m = successive_minima(lat, budget);
  QuasiFamilyResult out;
  out.norms = m.minima;
  out.coords = m.witnesses;
  out.vectors = m.witness_vectors;
  Int d = m.witnesses.det();
  out.index = d < 0 ? Int(-d) : d;
  out.is_basis = out.index == 1;
  return out;
}

TransferenceProfile transference_profile(const NormedLattice& lat, size_t budget) {
  MinimaResult mp = successive_minima(lat, budget);
  MinimaResult md = successive_minima(dual_lattice(lat), budget);
  TransferenceProfile out;
  out.primal = mp.minima;
  out.dual = md.minima;
  size_t bn = mp.minima.size();
  for (size_t i = 0; i < bn; ++i) {
    NormVal p = norm_mul(mp.minima[i], md.minima[bn - 1 - i]);
    out.products.push_back(p.value());
  }
  out.max_product = *std::max_element(out.products.begin(), out.products.end());
  out.min_product = *std::min_element(out.products.begin(), out.products.end());
  out.c_obs = out.max_product / static_cast<double>(bn);
  return out;
}

}  // namespace syswork
