#include "syswork/massey.hpp"

#include <sstream>

namespace syswork {

namespace {

Cochain scaled_sub(const Cochain& a, const Cochain& b, bool minus) {
  // a - b or a + b on possibly empty vectors of equal underlying degree
  if (a.empty()) return minus ? vec_scale(Rat(-1), b) : b;
  if (b.empty()) return a;
  return minus ? vec_sub(a, b) : vec_add(a, b);
}

}  // namespace

Subspace massey_indeterminacy(const CohomologyRing& ring, const CohomologyClass& u,
                              const CohomologyClass& v, const CohomologyClass& w) {
  size_t deg = u.degree + v.degree + w.degree - 1;
  size_t nb = ring.betti(deg);
  std::vector<RatVec> gens;
  size_t right = v.degree + w.degree - 1;
  for (size_t i = 0; i < ring.betti(right); ++i) {
    CohomologyClass g = ring.cup(u, ring.basis_class(right, i));
    if (g.coords.size() == nb && !vec_is_zero(g.coords)) gens.push_back(g.coords);
  }
  size_t left = u.degree + v.degree - 1;
  for (size_t i = 0; i < ring.betti(left); ++i) {
    CohomologyClass g = ring.cup(ring.basis_class(left, i), w);
    if (g.coords.size() == nb && !vec_is_zero(g.coords)) gens.push_back(g.coords);
  }
  if (gens.empty()) return Subspace(nb);
  return Subspace::span(RatMatrix::from_rows(gens));
}

MasseyCoset massey_triple(const CohomologyRing& ring, const CohomologyClass& u,
                          const CohomologyClass& v, const CohomologyClass& w) {
  const CochainModel& m = ring.model();
  CohomologyClass uv = ring.cup(u, v);
  if (!vec_is_zero(uv.coords)) {
    throw MasseyUndefinedError("undefined Massey product: u.v is a nonzero class", uv);
  }
  CohomologyClass vw = ring.cup(v, w);
  if (!vec_is_zero(vw.coords)) {
    throw MasseyUndefinedError("undefined Massey product: v.w is a nonzero class", vw);
  }

  Cochain a = ring.representative(u);
  Cochain b = ring.representative(v);
  Cochain c = ring.representative(w);

  Cochain x = m.solve_primitive(u.degree + v.degree, m.wedge(u.degree, v.degree, a, b));
  Cochain y = m.solve_primitive(v.degree + w.degree, m.wedge(v.degree, w.degree, b, c));

  size_t deg = u.degree + v.degree + w.degree - 1;
  Cochain t1 = m.wedge(u.degree + v.degree - 1, w.degree, x, c);
  Cochain t2 = m.wedge(u.degree, v.degree + w.degree - 1, a, y);
  Cochain rep = scaled_sub(t1, t2, u.degree % 2 == 0);
  if (rep.empty()) rep = m.zero_cochain(deg);
  if (!m.is_closed(deg, rep)) throw std::logic_error("Massey representative is not closed");

  MasseyCoset out;
  out.u = u;
  out.v = v;
  out.w = w;
  out.rep_cochain = rep;
  out.rep = ring.project(deg, rep);
  out.x = x;
  out.y = y;
  out.indet = massey_indeterminacy(ring, u, v, w);
  return out;
}

bool massey_is_nontrivial(const MasseyCoset& c) { return !c.indet.contains(c.rep.coords); }

QuasiFamily quasiorthogonal_basis_family(const CohomologyRing& ring, size_t m) {
  QuasiFamily f;
  f.degree = m;
  size_t b = ring.betti(m);
  for (size_t i = 0; i < b; ++i) {
    f.classes.push_back(ring.basis_class(m, i));
    f.forms.push_back(ring.representatives(m).row(i));
  }
  f.prim.assign(b, std::vector<Cochain>(b));
  f.prim_ok.assign(b, std::vector<bool>(b, false));
  const CochainModel& model = ring.model();
  for (size_t i = 0; i < b; ++i)
    for (size_t j = 0; j < b; ++j) {
      Cochain prod = model.wedge(m, m, f.forms[i], f.forms[j]);
      CohomologyClass cls = ring.cup(f.classes[i], f.classes[j]);
      if (!vec_is_zero(cls.coords)) continue;
      f.prim[i][j] = model.solve_primitive(2 * m, prod);
      f.prim_ok[i][j] = true;
    }
  return f;
}

MasseyElement quasiorthogonal_massey_element(const CohomologyRing& ring, const QuasiFamily& f,
                                             size_t s, size_t t, size_t r) {
  if (s >= f.classes.size() || t >= f.classes.size() || r >= f.classes.size())
    throw std::invalid_argument("family index out of range");
  if (!f.prim_ok[s][t] || !f.prim_ok[t][r])
    throw MasseyUndefinedError("undefined Massey product: missing primitive for the pair",
                               CohomologyClass{2 * f.degree, {}});
  const CochainModel& m = ring.model();
  size_t deg = 3 * f.degree - 1;
  Cochain t1 = m.wedge(2 * f.degree - 1, f.degree, f.prim[s][t], f.forms[r]);
  Cochain t2 = m.wedge(f.degree, 2 * f.degree - 1, f.forms[s], f.prim[t][r]);
  Cochain rep = scaled_sub(t1, t2, f.degree % 2 == 0);
  if (rep.empty()) rep = m.zero_cochain(deg);
  if (!m.is_closed(deg, rep)) throw std::logic_error("Massey representative is not closed");
  return MasseyElement{ring.project(deg, rep), rep};
}

bool linearity_identity_check(const CohomologyRing& ring, const QuasiFamily& f,
                              const RatVec& alpha, const RatVec& beta, const RatVec& gamma) {
  const CochainModel& m = ring.model();
  size_t b = f.classes.size();
  if (alpha.size() != b || beta.size() != b || gamma.size() != b)
    throw std::invalid_argument("coefficient vector size mismatch");
  for (size_t i = 0; i < b; ++i)
    for (size_t j = 0; j < b; ++j)
      if (!f.prim_ok[i][j]) throw std::invalid_argument("family lacks a primitive for some pair");

  size_t deg = 3 * f.degree - 1;
  bool minus = f.degree % 2 == 0;

  // Left side: assembled primitives wedged with assembled forms.
  Cochain wa(m.dim(2 * f.degree), Rat(0));
  Cochain wb(m.dim(2 * f.degree), Rat(0));
  Cochain fa(m.dim(f.degree), Rat(0));
  Cochain fc(m.dim(f.degree), Rat(0));
  for (size_t i = 0; i < b; ++i) {
    for (size_t j = 0; j < m.dim(f.degree); ++j) {
      fa[j] += alpha[i] * f.forms[i][j];
      fc[j] += gamma[i] * f.forms[i][j];
    }
    for (size_t j = 0; j < b; ++j) {
      for (size_t t = 0; t < m.dim(2 * f.degree); ++t) {
        wa[t] += alpha[i] * beta[j] * f.prim[i][j][t];
        wb[t] += beta[i] * gamma[j] * f.prim[i][j][t];
      }
    }
  }
  Cochain lhs = scaled_sub(m.wedge(2 * f.degree - 1, f.degree, wa, fc),
                           m.wedge(f.degree, 2 * f.degree - 1, fa, wb), minus);

  // Right side: triple-indexed expansion of the same expression.
  Cochain rhs(m.dim(deg), Rat(0));
  for (size_t i = 0; i < b; ++i)
    for (size_t j = 0; j < b; ++j)
      for (size_t k = 0; k < b; ++k) {
        Rat c = alpha[i] * beta[j] * gamma[k];
        if (c == 0) continue;
        Cochain term = scaled_sub(m.wedge(2 * f.degree - 1, f.degree, f.prim[i][j], f.forms[k]),
                                  m.wedge(f.degree, 2 * f.degree - 1, f.forms[i], f.prim[j][k]),
                                  minus);
        for (size_t t = 0; t < rhs.size(); ++t) rhs[t] += c * term[t];
      }
  if (lhs.empty()) lhs = Cochain(rhs.size(), Rat(0));
  return vec_is_zero(vec_sub(lhs, rhs));
}

SpanningCheck massey_spanning_check(const CohomologyRing& ring, size_t m) {
  SpanningCheck out;
  size_t deg = 3 * m - 1;
  out.target_dim = ring.betti(deg);
  out.achieved = Subspace(out.target_dim);
  // beyond the top degree every product lands in a zero space
  if (deg > ring.top_degree()) {
    out.spans = true;
    return out;
  }
  size_t b = ring.betti(m);
  std::vector<RatVec> got;
  for (size_t s = 0; s < b; ++s)
    for (size_t t = 0; t < b; ++t)
      for (size_t r = 0; r < b; ++r) {
        const CohomologyClass& u = ring.basis_class(m, s);
        const CohomologyClass& v = ring.basis_class(m, t);
        const CohomologyClass& w = ring.basis_class(m, r);
        CohomologyClass uv = ring.cup(u, v);
        CohomologyClass vw = ring.cup(v, w);
        if (!vec_is_zero(uv.coords) || !vec_is_zero(vw.coords)) continue;
        MasseyCoset coset = massey_triple(ring, u, v, w);
        if (coset.indet.dim() != 0) continue;
        if (!vec_is_zero(coset.rep.coords)) got.push_back(coset.rep.coords);
      }
  if (!got.empty()) out.achieved = Subspace::span(RatMatrix::from_rows(got));
  out.spans = out.achieved.dim() == out.target_dim;
  return out;
}

IntegralityResult integrality_check(const CohomologyRing& ring, const MasseyCoset& c,
                                    const RatVec& x0) {
  const CochainModel& m = ring.model();
  if (!ring.has_integral()) throw std::runtime_error("model has no integral structure");
  auto cu = ring.integral_coordinates(c.u);
  auto cv = ring.integral_coordinates(c.v);
  auto cw = ring.integral_coordinates(c.w);
  if (!cu || !cv || !cw) throw std::runtime_error("inputs are not integral classes");

  Cochain a = ring.integral_representative(c.u);
  Cochain b = ring.integral_representative(c.v);
  Cochain cc = ring.integral_representative(c.w);

  Cochain x = m.solve_primitive_integral(c.u.degree + c.v.degree,
                                         m.wedge(c.u.degree, c.v.degree, a, b));
  Cochain y = m.solve_primitive_integral(c.v.degree + c.w.degree,
                                         m.wedge(c.v.degree, c.w.degree, b, cc));
  size_t deg = c.u.degree + c.v.degree + c.w.degree - 1;
  Cochain t1 = m.wedge(c.u.degree + c.v.degree - 1, c.w.degree, x, cc);
  Cochain t2 = m.wedge(c.u.degree, c.v.degree + c.w.degree - 1, a, y);
  Cochain rep = scaled_sub(t1, t2, c.u.degree % 2 == 0);
  if (rep.empty()) rep = m.zero_cochain(deg);

  Rat val = ring.pair_with_homology(ring.project(deg, rep), x0);
  // A closed integral form paired against integral cycles must give an
  // integer; anything else means the declared pairing is inconsistent.
  Rat direct = dot(m.cycles[deg].apply(rep), x0);
  if (direct != val) throw std::logic_error("pairing disagrees with the declared cycles");
  if (!is_integer(val)) throw std::runtime_error("pairing of the integral representative is not an integer");
  return IntegralityResult{val.get_num(), x, y, rep};
}

}  // namespace syswork
