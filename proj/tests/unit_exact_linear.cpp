#include <algorithm>
#include <random>

#include "doctest.h"
#include "syswork/lie.hpp"
#include "syswork/rational.hpp"
#include "syswork/rat_matrix.hpp"
#include "syswork/smith.hpp"
#include "syswork/subspace.hpp"
#include "test_util.hpp"

using namespace syswork;

namespace {

Rat rand_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  return make_rat(Int(num(rng)), Int(den(rng)));
}

RatMatrix rand_mat(std::mt19937_64& rng, size_t r, size_t c) {
  RatMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m.at(i, j) = rand_rat(rng);
  return m;
}

// gcd of all k x k minors, the classical oracle for Smith diagonals.
Int determinantal_divisor(const IntMatrix& m, size_t k) {
  auto rsets = index_subsets(m.rows(), k);
  auto csets = index_subsets(m.cols(), k);
  Int g(0);
  for (auto& rs : rsets)
    for (auto& cs : csets) {
      IntMatrix sub(k, k);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) sub.at(i, j) = m.at(rs[i], cs[j]);
      Int d = sub.det();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    }
  if (g < 0) g = -g;
  return g;
}

}  // namespace

TEST_CASE("rational parsing and integer sqrt bounds") {
  CHECK(parse_rat("3/4") == make_rat(Int(3), Int(4)));
  CHECK(parse_rat("-3/6") == make_rat(Int(-1), Int(2)));
  CHECK(parse_rat("0.25") == make_rat(Int(1), Int(4)));
  CHECK(parse_rat("-1.5") == make_rat(Int(-3), Int(2)));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(rat_floor(parse_rat("-7/2")) == Int(-4));
  CHECK(rat_ceil(parse_rat("-7/2")) == Int(-3));

  // floor(c + sqrt(t)) and ceil(c - sqrt(t)) by the exact predicate.
  std::vector<std::pair<Rat, Rat>> cases = {
      {Rat(0), Rat(2)},          {Rat(5), Rat(0)},
      {parse_rat("7/3"), parse_rat("49/9")},
      {parse_rat("-11/4"), parse_rat("10000/49")},
      {Rat(3), parse_rat("1/1000000")},
  };
  for (auto& [c, t] : cases) {
    Int f = floor_plus_sqrt(c, t);
    // f <= c + sqrt(t) < f + 1, tested as (f - c)^2 <= t on the right side.
    Rat fc = Rat(f) - c;
    CHECK((fc <= 0 || fc * fc <= t));
    Rat f1 = Rat(f + 1) - c;
    CHECK((f1 > 0 && f1 * f1 > t));
    Int g = ceil_minus_sqrt(c, t);
    Rat gc = c - Rat(g);
    CHECK((gc <= 0 || gc * gc <= t));
    Rat g1 = c - Rat(g - 1);
    CHECK((g1 > 0 && g1 * g1 > t));
  }
}

TEST_CASE("rref canonical form on fixed examples") {
  RatMatrix id = RatMatrix::identity(3);
  RatMatrix a = id;
  auto pivots = a.rref();
  CHECK(a == id);
  CHECK(pivots == std::vector<size_t>{0, 1, 2});

  RatMatrix b = mat({{1, 2}, {2, 4}});
  b.rref();
  CHECK(b == mat({{1, 2}, {0, 0}}));
  CHECK(mat({{1, 2}, {2, 4}}).rank() == 1);

  RatMatrix c = mat({{0, 1, 2}, {1, 1, 1}});
  c.rref();
  CHECK(c == mat({{1, 0, -1}, {0, 1, 2}}));
}

TEST_CASE("rref is idempotent and preserves the row space") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    RatMatrix m = rand_mat(rng, 5, 7);
    RatMatrix r = m;
    r.rref();
    RatMatrix r2 = r;
    r2.rref();
    CHECK(r == r2);
    CHECK(m.rank() == m.transpose().rank());
    Subspace sm = Subspace::span(m), sr = Subspace::span(r);
    CHECK(sm == sr);
  }
}

TEST_CASE("determinant, inverse and solve agree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    RatMatrix m = rand_mat(rng, 4, 4);
    Rat d = m.det();
    auto inv = m.inverse();
    if (d == 0) {
      CHECK(!inv);
      continue;
    }
    REQUIRE(inv);
    CHECK(m * *inv == RatMatrix::identity(4));
    CHECK(inv->det() * d == Rat(1));
    RatVec b = {rand_rat(rng), rand_rat(rng), rand_rat(rng), rand_rat(rng)};
    auto x = m.solve(b);
    REQUIRE(x);
    CHECK(m.apply(*x) == b);
  }
}

TEST_CASE("kernel basis spans the exact kernel") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    RatMatrix m = rand_mat(rng, 3, 6);
    RatMatrix k = m.kernel_basis();
    CHECK(k.rows() == 6 - m.rank());
    for (size_t i = 0; i < k.rows(); ++i) CHECK(vec_is_zero(m.apply(k.row(i))));
    CHECK(Subspace::span(k).dim() == k.rows());
  }
}

TEST_CASE("smith normal form on fixed examples") {
  {
    auto s = smith_normal_form(imat({{2, 4}, {4, 8}}));
    CHECK(s.diagonal == std::vector<Int>{Int(2), Int(0)});
    CHECK(s.U * imat({{2, 4}, {4, 8}}) * s.V == s.D);
  }
  {
    auto s = smith_normal_form(imat({{1, 0}, {0, 3}}));
    CHECK(s.diagonal == std::vector<Int>{Int(1), Int(3)});
  }
  {
    // Classical example with nontrivial transforms.
    auto s = smith_normal_form(imat({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}}));
    CHECK(s.diagonal == std::vector<Int>{Int(2), Int(2), Int(156)});
  }
}

TEST_CASE("smith normal form matches determinantal divisors on random matrices") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> entry(-9, 9);
  for (int trial = 0; trial < 25; ++trial) {
    size_t r = 2 + trial % 2, c = 2 + (trial / 2) % 3;
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) m.at(i, j) = Int(entry(rng));
    auto s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    Int du = s.U.det(), dv = s.V.det();
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    Int prod(1);
    for (size_t k = 0; k < s.diagonal.size(); ++k) {
      if (k + 1 < s.diagonal.size() && s.diagonal[k + 1] != 0)
        CHECK(s.diagonal[k + 1] % s.diagonal[k] == 0);
      Int dd = determinantal_divisor(m, k + 1);
      prod *= s.diagonal[k];
      Int p = prod < 0 ? Int(-prod) : prod;
      CHECK(p == dd);
      if (dd == 0) break;
    }
  }
}

TEST_CASE("integer solve and integer kernel") {
  IntMatrix a = imat({{2, 4}, {3, 5}});
  auto x = solve_integer(a, ivec({2, 2}));
  REQUIRE(x);
  CHECK(a.apply(*x) == ivec({2, 2}));
  CHECK(!solve_integer(imat({{2, 4}}), ivec({3})));

  IntMatrix k = integer_kernel(imat({{1, 2, 3}}));
  CHECK(k.rows() == 2);
  for (size_t i = 0; i < k.rows(); ++i) {
    auto img = imat({{1, 2, 3}}).apply(k.row(i));
    CHECK(img == ivec({0}));
  }
  // Saturation: (2,-1,0)/1 and (3,0,-1) generate the full kernel lattice;
  // membership of a primitive vector with content 1.
  auto coords = solve_integer(k.transpose(), ivec({1, 1, -1}));
  CHECK(coords);
}

TEST_CASE("hermite row basis and lattice membership") {
  IntMatrix gens = imat({{2, 0}, {0, 3}, {1, 1}});
  IntMatrix h = hnf_row_basis(gens);
  CHECK(h.rows() == 2);
  // The three generators span the full integer lattice: det 1 basis.
  Int d = h.det();
  CHECK((d == 1 || d == -1));

  RatMatrix qgens(2, 2);
  qgens.at(0, 0) = make_rat(Int(1), Int(2));
  qgens.at(1, 1) = make_rat(Int(1), Int(3));
  auto lat = lattice_from_generators(qgens);
  CHECK(lat.rows.rows() == 2);
  RatVec v = {make_rat(Int(3), Int(2)), make_rat(Int(-2), Int(3))};
  CHECK(lattice_contains(lat, v));
  auto co = lattice_coordinates(lat, v);
  REQUIRE(co);
  RatVec w = {make_rat(Int(1), Int(3)), Rat(0)};
  CHECK(!lattice_contains(lat, w));
}

TEST_CASE("subspace operations against membership oracles") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Subspace a = Subspace::span(rand_mat(rng, 2, 6));
    Subspace b = Subspace::span(rand_mat(rng, 3, 6));
    Subspace s = a.sum(b);
    Subspace i = a.intersect(b);
    // Grassmann dimension identity.
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(s.contains(a));
    CHECK(s.contains(b));
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    for (size_t r = 0; r < a.basis().rows(); ++r) {
      RatVec v = a.basis().row(r);
      CHECK(a.contains(v));
      auto c = a.coordinates(v);
      REQUIRE(c);
      RatVec back(6, Rat(0));
      for (size_t j = 0; j < c->size(); ++j) back = vec_add(back, vec_scale((*c)[j], a.basis().row(j)));
      CHECK(back == v);
    }
    // A random combination of intersection vectors lies in both.
    if (i.dim() > 0) {
      RatVec v(6, Rat(0));
      for (size_t r = 0; r < i.basis().rows(); ++r)
        v = vec_add(v, vec_scale(rand_rat(rng), i.basis().row(r)));
      CHECK(a.contains(v));
      CHECK(b.contains(v));
    }
  }
}
