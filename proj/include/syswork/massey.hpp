#pragma once

#include "syswork/cohomology.hpp"

namespace syswork {

struct MasseyUndefinedError : std::runtime_error {
  CohomologyClass obstruction;  // the nonzero cup product
  MasseyUndefinedError(const std::string& msg, CohomologyClass obs)
      : std::runtime_error(msg), obstruction(std::move(obs)) {}
};

// Triple product <u, v, w>, defined when u.v = 0 = v.w: the coset of
// x.C - (-1)^{|u|} A.y where dx = A.B, dy = B.C for the chosen cocycle
// representatives A, B, C.
struct MasseyCoset {
  CohomologyClass u, v, w;
  CohomologyClass rep;     // class of the chosen representative
  Cochain rep_cochain;     // representative cocycle
  Cochain x, y;            // primitives: dx = A.B, dy = B.C
  Subspace indet;          // u.H^{|v|+|w|-1} + H^{|u|+|v|-1}.w, class coordinates
  size_t degree() const { return rep.degree; }
};

MasseyCoset massey_triple(const CohomologyRing& ring, const CohomologyClass& u,
                          const CohomologyClass& v, const CohomologyClass& w);

Subspace massey_indeterminacy(const CohomologyRing& ring, const CohomologyClass& u,
                              const CohomologyClass& v, const CohomologyClass& w);

// True when the coset misses zero: the representative is not in the
// indeterminacy subspace.
bool massey_is_nontrivial(const MasseyCoset& c);

// A family of classes of one degree with chosen representative cocycles and,
// for each ordered pair with vanishing product, a primitive of the product.
// Norms (when the family came from a metric) live in lambda.
struct QuasiFamily {
  size_t degree = 0;
  std::vector<CohomologyClass> classes;
  std::vector<Cochain> forms;
  std::vector<std::vector<Cochain>> prim;  // prim[i][j] with d prim = forms[i].forms[j]
  std::vector<std::vector<bool>> prim_ok;
  std::vector<double> lambda;
};

// Structural family from the ring's basis classes of degree m, with echelon
// primitives for every pair whose cup product vanishes.
QuasiFamily quasiorthogonal_basis_family(const CohomologyRing& ring, size_t m);

struct MasseyElement {
  CohomologyClass cls;
  Cochain form;
};

// Representative built from the family's primitives:
//   prim[s][t].forms[r] - (-1)^m forms[s].prim[t][r].
MasseyElement quasiorthogonal_massey_element(const CohomologyRing& ring, const QuasiFamily& f,
                                             size_t s, size_t t, size_t r);

// Exact cochain-level trilinearity of the combined representative over the
// family: both sides expanded independently and compared entrywise.
bool linearity_identity_check(const CohomologyRing& ring, const QuasiFamily& f,
                              const RatVec& alpha, const RatVec& beta, const RatVec& gamma);

struct SpanningCheck {
  bool spans = false;
  size_t target_dim = 0;
  Subspace achieved;  // span of zero-indeterminacy representatives
  SpanningCheck() : achieved(0) {}
};

// Do Massey representatives of defined triples with zero indeterminacy,
// taken over basis classes of H^m, span H^{3m-1}?  One-sided: a true answer
// is a certificate, a false answer reports the subspace actually reached.
SpanningCheck massey_spanning_check(const CohomologyRing& ring, size_t m);

struct IntegralityResult {
  Int value;             // the integer pairing
  Cochain x, y;          // integral primitives
  Cochain rep_cochain;   // integral representative
};

// Recomputes the representative with integral primitives and pairs it with
// x0 (declared cycle coordinates); checks the result is an integer.
IntegralityResult integrality_check(const CohomologyRing& ring, const MasseyCoset& c,
                                    const RatVec& x0);

}  // namespace syswork
