#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace syswork {

using Rat = mpq_class;
using Int = mpz_class;

// Parse "p", "p/q" or a plain decimal like "-1.25" into an exact rational.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rat: empty string");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    Int num(digits, 10), den(1);
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("parse_rat: bad rational '" + s + "'");
  r.canonicalize();
  if (r.get_den() == 0) throw std::invalid_argument("parse_rat: zero denominator in '" + s + "'");
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Safe num/den construction: mpq_class(num, den) does not canonicalize.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline double rat_d(const Rat& r) { return r.get_d(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// floor(a/b) with sign handled for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int rat_floor(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }

inline Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

// Largest integer x with x <= c + sqrt(t), t >= 0.  Seeds from doubles and
// fixes up with the exact predicate, so it stays correct when doubles round.
inline Int floor_plus_sqrt(const Rat& c, const Rat& t) {
  if (t < 0) throw std::invalid_argument("floor_plus_sqrt: negative radicand");
  double guess = rat_d(c) + std::sqrt(rat_d(t));
  Int x(std::floor(guess));
  auto ok = [&](const Int& v) {
    // v <= c + sqrt(t)  <=>  v - c <= sqrt(t)  <=>  v - c <= 0 or (v-c)^2 <= t
    Rat d = Rat(v) - c;
    return d <= 0 || d * d <= t;
  };
  while (!ok(x)) x -= 1;
  while (ok(x + 1)) x += 1;
  return x;
}

// Smallest integer x with x >= c - sqrt(t), t >= 0.
inline Int ceil_minus_sqrt(const Rat& c, const Rat& t) {
  if (t < 0) throw std::invalid_argument("ceil_minus_sqrt: negative radicand");
  double guess = rat_d(c) - std::sqrt(rat_d(t));
  Int x(std::ceil(guess));
  auto ok = [&](const Int& v) {
    // v >= c - sqrt(t)  <=>  c - v <= sqrt(t)
    Rat d = c - Rat(v);
    return d <= 0 || d * d <= t;
  };
  while (!ok(x)) x += 1;
  while (ok(x - 1)) x -= 1;
  return x;
}

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

}  // namespace syswork
