#pragma once

#include <string>
#include <vector>

#include "syswork/rat_matrix.hpp"
#include "syswork/smith.hpp"

namespace syswork {

// A cochain of degree k is its coordinate vector in that degree's basis.
using Cochain = RatVec;

struct ValidityReport {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(const std::string& what) {
    ok = false;
    failures.push_back(what);
  }
};

// Finite-dimensional graded algebra with a differential: the computational
// carrier for invariant forms (exterior-algebra models) and simplicial
// cochains alike.  Degrees above top_degree are zero spaces.
struct CochainModel {
  std::string name;
  size_t top_degree = 0;
  bool commutative = true;
  // When set, the standard basis of every degree spans the integral lattice
  // and all differentials have integer entries.
  bool has_integral = false;
  std::vector<size_t> dims;                        // size top_degree + 1
  std::vector<std::vector<std::string>> labels;    // per degree
  std::vector<RatMatrix> d;                        // d[k]: dims[k+1] x dims[k]; d[top]: 0 x dims[top]
  std::vector<std::vector<RatMatrix>> mu;          // mu[k][l]: dims[k+l] x (dims[k]*dims[l]) for k+l <= top
  // Integral homology functionals per degree: rows evaluate a degree-k
  // cochain against a basis of H_k(Z)/torsion.  May be empty (undeclared).
  std::vector<RatMatrix> cycles;
  Rat covolume = Rat(1);

  size_t dim(size_t k) const { return k <= top_degree ? dims[k] : 0; }
  Cochain zero_cochain(size_t k) const { return Cochain(dim(k), Rat(0)); }
  Cochain basis_cochain(size_t k, size_t i) const;

  Cochain apply_d(size_t k, const Cochain& a) const;
  bool is_closed(size_t k, const Cochain& a) const;
  Cochain wedge(size_t k, size_t l, const Cochain& a, const Cochain& b) const;

  // One x with d x = alpha (degree k input, degree k-1 output), from echelon
  // back-substitution: free variables pinned to zero, so the result is
  // deterministic and minimal-support.  Throws NotExactError otherwise.
  Cochain solve_primitive(size_t k, const Cochain& alpha) const;

  // Integral variant: x integer with d x = alpha.  Requires has_integral and
  // integer alpha.  Throws NotExactError when no integral solution exists.
  Cochain solve_primitive_integral(size_t k, const Cochain& alpha) const;

  // Exhaustive structural check: d^2 = 0, graded Leibniz on all basis pairs,
  // associativity on all basis triples, graded commutativity when declared,
  // integrality of d when has_integral, cycles annihilate exact cochains.
  ValidityReport validate() const;
};

struct NotExactError : std::runtime_error {
  Cochain residual;
  NotExactError(const std::string& msg, Cochain res)
      : std::runtime_error(msg), residual(std::move(res)) {}
};

}  // namespace syswork
