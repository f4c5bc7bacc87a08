#pragma once

#include <functional>
#include <optional>

#include "syswork/rat_matrix.hpp"

namespace syswork {

// A nonnegative norm value carrying its exactness: an exact rational, an
// exact square root of a rational, or a certified double interval.
struct NormVal {
  enum class Kind { Rational, SqrtRational, Interval };
  Kind kind = Kind::Rational;
  Rat q;                   // Rational: value; SqrtRational: squared value
  double lo = 0, hi = 0;   // enclosure, set for every kind

  static NormVal rational(const Rat& v);
  static NormVal sqrt_rational(const Rat& squared);
  static NormVal interval(double lo, double hi);

  double value() const;
  bool exact() const { return kind != Kind::Interval; }
  // Exact rational upper bound on the squared value.
  Rat upper_sq() const;
  NormVal scaled(const Rat& c) const;  // c >= 0
};

// Three-way comparison, exact whenever both sides are exact; interval
// comparisons return 0 on overlap.
int norm_cmp(const NormVal& a, const NormVal& b);
NormVal norm_mul(const NormVal& a, const NormVal& b);

// Facets of the convex hull of the given points (rows), as rows a with the
// hull equal to the intersection of {x : a.x <= 1}.  Requires the origin in
// the interior and the points spanning.  Exact; intended for small
// dimensions and point counts.
RatMatrix facet_enumeration(const RatMatrix& points);

struct NormPositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Norm on Q^dim: quadratic (Gram matrix), polyhedral (unit ball given by
// vertices or facets; the missing description is derived exactly), or an
// external callable with a quadratic lower bound.  Every oracle carries
// lower_bound_gram Q with norm(x)^2 >= x.Q.x, used to certify enumeration.
class NormOracle {
 public:
  enum class Kind { Quadratic, Polyhedral, External };

  static NormOracle quadratic(const RatMatrix& gram);
  static NormOracle polyhedral_from_vertices(const RatMatrix& vertices);
  static NormOracle polyhedral_from_facets(const RatMatrix& facets);
  static NormOracle external(size_t dim, std::function<double(const RatVec&)> fn,
                             const RatMatrix& lower_bound_gram,
                             std::optional<RatMatrix> upper_bound_gram = std::nullopt,
                             uint64_t seed = 1);

  Kind kind() const { return kind_; }
  size_t dim() const { return dim_; }

  NormVal eval(const RatVec& x) const;
  NormOracle dual() const;

  const RatMatrix& lower_bound_gram() const { return lower_gram_; }
  const std::optional<RatMatrix>& upper_bound_gram() const { return upper_gram_; }
  const RatMatrix& gram() const;      // quadratic only
  const RatMatrix& vertices() const;  // polyhedral only
  const RatMatrix& facets() const;    // polyhedral only

  NormOracle scaled(const Rat& c) const;  // c > 0: norm' = c * norm

 private:
  NormOracle() = default;
  Kind kind_ = Kind::Quadratic;
  size_t dim_ = 0;
  RatMatrix gram_;               // quadratic
  RatMatrix vertices_, facets_;  // polyhedral
  std::function<double(const RatVec&)> fn_;  // external
  RatMatrix lower_gram_;
  std::optional<RatMatrix> upper_gram_;
  uint64_t seed_ = 1;
  void finish_polyhedral();
};

}  // namespace syswork
