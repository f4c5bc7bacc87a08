#include "syswork/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace syswork {

namespace {

double down(double x) { return std::nextafter(x, -1e308); }
double up(double x) { return std::nextafter(x, 1e308); }

}  // namespace

NormVal NormVal::rational(const Rat& v) {
  if (v < 0) throw std::invalid_argument("negative norm value");
  NormVal n;
  n.kind = Kind::Rational;
  n.q = v;
  double d = rat_d(v);
  n.lo = down(d);
  n.hi = up(d);
  return n;
}

NormVal NormVal::sqrt_rational(const Rat& squared) {
  if (squared < 0) throw std::invalid_argument("negative squared norm");
  NormVal n;
  n.kind = Kind::SqrtRational;
  n.q = squared;
  double d = std::sqrt(rat_d(squared));
  n.lo = down(down(d));
  n.hi = up(up(d));
  return n;
}

NormVal NormVal::interval(double lo, double hi) {
  NormVal n;
  n.kind = Kind::Interval;
  n.q = 0;
  n.lo = lo;
  n.hi = hi;
  return n;
}

double NormVal::value() const {
  switch (kind) {
    case Kind::Rational: return rat_d(q);
    case Kind::SqrtRational: return std::sqrt(rat_d(q));
    default: return 0.5 * (lo + hi);
  }
}

Rat NormVal::upper_sq() const {
  switch (kind) {
    case Kind::Rational: return q * q;
    case Kind::SqrtRational: return q;
    default: return Rat(hi) * Rat(hi);
  }
}

NormVal NormVal::scaled(const Rat& c) const {
  if (c < 0) throw std::invalid_argument("negative scale");
  switch (kind) {
    case Kind::Rational: return rational(q * c);
    case Kind::SqrtRational: return sqrt_rational(q * c * c);
    default: {
      double cd = rat_d(c);
      return interval(down(lo * cd), up(hi * cd));
    }
  }
}

int norm_cmp(const NormVal& a, const NormVal& b) {
  using K = NormVal::Kind;
  if (a.kind != K::Interval && b.kind != K::Interval) {
    Rat as = (a.kind == K::Rational) ? a.q * a.q : a.q;
    Rat bs = (b.kind == K::Rational) ? b.q * b.q : b.q;
    return as < bs ? -1 : (as > bs ? 1 : 0);
  }
  if (a.hi < b.lo) return -1;
  if (b.hi < a.lo) return 1;
  return 0;
}

NormVal norm_mul(const NormVal& a, const NormVal& b) {
  using K = NormVal::Kind;
  if (a.kind == K::Rational && b.kind == K::Rational) return NormVal::rational(a.q * b.q);
  if (a.kind != K::Interval && b.kind != K::Interval) {
    Rat as = (a.kind == K::Rational) ? a.q * a.q : a.q;
    Rat bs = (b.kind == K::Rational) ? b.q * b.q : b.q;
    return NormVal::sqrt_rational(as * bs);
  }
  return NormVal::interval(down(a.lo * b.lo), up(a.hi * b.hi));
}

RatMatrix facet_enumeration(const RatMatrix& points) {
  size_t d = points.cols();
  size_t n = points.rows();
  if (n < d) throw std::invalid_argument("too few points to enclose the origin");

  // Walk d-subsets; each spanning subset fixes the hyperplane a.x = 1, kept
  // when every point lies on the non-positive side.
  std::set<std::vector<Rat>> found;
  std::vector<size_t> idx(d);
  for (size_t i = 0; i < d; ++i) idx[i] = i;
  while (true) {
    RatMatrix sub(d, d);
    for (size_t i = 0; i < d; ++i) sub.set_row(i, points.row(idx[i]));
    RatVec ones(d, Rat(1));
    auto a = sub.solve(ones);
    if (a && sub.rank() == d) {
      bool inside = true;
      for (size_t p = 0; p < n && inside; ++p)
        if (dot(points.row(p), *a) > 1) inside = false;
      if (inside) found.insert(*a);
    }
    // next subset
    size_t i = d;
    while (i > 0 && idx[i - 1] == n - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (found.empty()) throw NormPositivityError("no facets: origin not interior to the hull");
  std::vector<RatVec> rows(found.begin(), found.end());
  return RatMatrix::from_rows(rows);
}

NormOracle NormOracle::quadratic(const RatMatrix& gram) {
  if (!gram.is_square()) throw std::invalid_argument("gram must be square");
  if (!(gram == gram.transpose())) throw std::invalid_argument("gram must be symmetric");
  // Leading principal minors must be positive.
  for (size_t k = 1; k <= gram.rows(); ++k) {
    RatMatrix sub(k, k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub.at(i, j) = gram.at(i, j);
    if (!(sub.det() > 0)) throw std::invalid_argument("gram is not positive definite");
  }
  NormOracle n;
  n.kind_ = Kind::Quadratic;
  n.dim_ = gram.rows();
  n.gram_ = gram;
  n.lower_gram_ = gram;
  n.upper_gram_ = gram;
  return n;
}

void NormOracle::finish_polyhedral() {
  // Symmetrize and dedupe both descriptions; derive the lower bound from the
  // circumradius of the vertex set.
  auto symmetrize = [](const RatMatrix& m) {
    std::set<std::vector<Rat>> s;
    for (size_t i = 0; i < m.rows(); ++i) {
      RatVec r = m.row(i);
      if (vec_is_zero(r)) throw std::invalid_argument("zero row in polyhedral description");
      s.insert(r);
      for (auto& x : r) x = -x;
      s.insert(r);
    }
    std::vector<RatVec> rows(s.begin(), s.end());
    return RatMatrix::from_rows(rows);
  };
  vertices_ = symmetrize(vertices_);
  facets_ = symmetrize(facets_);

  Rat r2_max(0);
  for (size_t i = 0; i < vertices_.rows(); ++i) {
    Rat s = dot(vertices_.row(i), vertices_.row(i));
    if (s > r2_max) r2_max = s;
  }
  if (r2_max == 0) throw std::invalid_argument("degenerate vertex set");
  lower_gram_ = RatMatrix::identity(dim_).scaled(Rat(1) / r2_max);
  // Inscribed radius from facet norms: |x| <= r implies norm(x) <= 1.
  Rat f2_max(0);
  for (size_t i = 0; i < facets_.rows(); ++i) {
    Rat s = dot(facets_.row(i), facets_.row(i));
    if (s > f2_max) f2_max = s;
  }
  upper_gram_ = RatMatrix::identity(dim_).scaled(f2_max);

  // Positivity spot checks: each coordinate direction and the vertex set
  // itself must get a strictly positive value.
  for (size_t i = 0; i < dim_; ++i) {
    RatVec e(dim_, Rat(0));
    e[i] = 1;
    Rat best(0);
    for (size_t j = 0; j < facets_.rows(); ++j) best = std::max(best, dot(facets_.row(j), e));
    if (!(best > 0)) throw NormPositivityError("polyhedral norm vanishes on a coordinate direction");
  }
}

NormOracle NormOracle::polyhedral_from_vertices(const RatMatrix& vertices) {
  NormOracle n;
  n.kind_ = Kind::Polyhedral;
  n.dim_ = vertices.cols();
  n.vertices_ = vertices;
  // Symmetrize before facet enumeration so both half-balls are present.
  std::vector<RatVec> sym;
  for (size_t i = 0; i < vertices.rows(); ++i) {
    sym.push_back(vertices.row(i));
    sym.push_back(vec_scale(Rat(-1), vertices.row(i)));
  }
  n.facets_ = facet_enumeration(RatMatrix::from_rows(sym));
  n.finish_polyhedral();
  return n;
}

NormOracle NormOracle::polyhedral_from_facets(const RatMatrix& facets) {
  NormOracle n;
  n.kind_ = Kind::Polyhedral;
  n.dim_ = facets.cols();
  n.facets_ = facets;
  std::vector<RatVec> sym;
  for (size_t i = 0; i < facets.rows(); ++i) {
    sym.push_back(facets.row(i));
    sym.push_back(vec_scale(Rat(-1), facets.row(i)));
  }
  // Vertices of the ball are the facet normals of the polar hull.
  n.vertices_ = facet_enumeration(RatMatrix::from_rows(sym));
  n.finish_polyhedral();
  return n;
}

NormOracle NormOracle::external(size_t dim, std::function<double(const RatVec&)> fn,
                                const RatMatrix& lower_bound_gram,
                                std::optional<RatMatrix> upper_bound_gram, uint64_t seed) {
  NormOracle n;
  n.kind_ = Kind::External;
  n.dim_ = dim;
  n.fn_ = std::move(fn);
  n.lower_gram_ = lower_bound_gram;
  n.upper_gram_ = std::move(upper_bound_gram);
  n.seed_ = seed;
  return n;
}

const RatMatrix& NormOracle::gram() const {
  if (kind_ != Kind::Quadratic) throw std::logic_error("not a quadratic norm");
  return gram_;
}
const RatMatrix& NormOracle::vertices() const {
  if (kind_ != Kind::Polyhedral) throw std::logic_error("not a polyhedral norm");
  return vertices_;
}
const RatMatrix& NormOracle::facets() const {
  if (kind_ != Kind::Polyhedral) throw std::logic_error("not a polyhedral norm");
  return facets_;
}

NormVal NormOracle::eval(const RatVec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("norm eval: wrong dimension");
  switch (kind_) {
    case Kind::Quadratic: {
      Rat s(0);
      for (size_t i = 0; i < dim_; ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < dim_; ++j) s += x[i] * gram_.at(i, j) * x[j];
      }
      return NormVal::sqrt_rational(s);
    }
    case Kind::Polyhedral: {
      Rat best(0);
      for (size_t i = 0; i < facets_.rows(); ++i) best = std::max(best, dot(facets_.row(i), x));
      return NormVal::rational(best);
    }
    default: {
      double v = fn_(x);
      if (!(v >= 0)) throw std::runtime_error("external norm returned a negative value");
      return NormVal::interval(down(down(v)), up(up(v)));
    }
  }
}

NormOracle NormOracle::dual() const {
  switch (kind_) {
    case Kind::Quadratic: {
      auto inv = gram_.inverse();
      if (!inv) throw std::logic_error("gram not invertible");
      return quadratic(*inv);
    }
    case Kind::Polyhedral: {
      NormOracle n;
      n.kind_ = Kind::Polyhedral;
      n.dim_ = dim_;
      n.vertices_ = facets_;
      n.facets_ = vertices_;
      n.finish_polyhedral();
      return n;
    }
    default: {
      // Dual of a black-box norm: per-query maximization of y.x over the
      // unit ball, bracketed by the quadratic bounds.
      if (!upper_gram_) throw std::logic_error("external dual needs an upper bound gram");
      auto lower_inv = upper_gram_->inverse();
      auto upper_inv = lower_gram_.inverse();
      if (!lower_inv || !upper_inv) throw std::logic_error("bound gram not invertible");
      RatMatrix upper_dual = *upper_inv;  // norm >= |.|_Q  =>  dual <= |.|_{Q^-1}
      auto primal = fn_;
      size_t d = dim_;
      uint64_t seed = seed_;
      auto dual_fn = [primal, d, seed](const RatVec& y) {
        // Maximize y.x / N(x) by seeded multistart coordinate descent with
        // dyadic steps, so every probe point is an exact rational.
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_int_distribution<int> u(-64, 64);
        double best = 0;
        auto ratio = [&](const RatVec& x) {
          double num = 0;
          for (size_t i = 0; i < d; ++i) num += rat_d(y[i]) * rat_d(x[i]);
          if (num < 0) num = -num;
          double den = primal(x);
          return den > 0 ? num / den : 0.0;
        };
        for (int start = 0; start < 8; ++start) {
          RatVec x(d, Rat(0));
          if (start == 0) {
            for (size_t i = 0; i < d; ++i) x[i] = y[i];
          } else {
            for (size_t i = 0; i < d; ++i) x[i] = make_rat(Int(u(rng)), Int(64));
          }
          if (vec_is_zero(x)) x[0] = 1;
          double cur = ratio(x);
          Rat step(1);
          for (int iter = 0; iter < 200 && step > Rat(Int(1), Int(1) << 30); ++iter) {
            bool improved = false;
            for (size_t i = 0; i < d; ++i) {
              for (int sgn : {1, -1}) {
                RatVec xx = x;
                xx[i] += Rat(sgn) * step;
                double r = ratio(xx);
                if (r > cur * (1 + 1e-15)) {
                  cur = r;
                  x = xx;
                  improved = true;
                }
              }
            }
            if (!improved) step /= 2;
          }
          best = std::max(best, cur);
        }
        return best;
      };
      return external(dim_, dual_fn, *lower_inv, upper_dual, seed_ + 1);
    }
  }
}

NormOracle NormOracle::scaled(const Rat& c) const {
  if (!(c > 0)) throw std::invalid_argument("scale must be positive");
  switch (kind_) {
    case Kind::Quadratic: return quadratic(gram_.scaled(c * c));
    case Kind::Polyhedral: {
      NormOracle n;
      n.kind_ = Kind::Polyhedral;
      n.dim_ = dim_;
      n.vertices_ = vertices_.scaled(Rat(1) / c);
      n.facets_ = facets_.scaled(c);
      n.finish_polyhedral();
      return n;
    }
    default: {
      auto base = fn_;
      double cd = rat_d(c);
      RatMatrix lg = lower_gram_.scaled(c * c);
      std::optional<RatMatrix> ug;
      if (upper_gram_) ug = upper_gram_->scaled(c * c);
      return external(dim_, [base, cd](const RatVec& x) { return cd * base(x); }, lg, ug, seed_);
    }
  }
}

}  // namespace syswork
