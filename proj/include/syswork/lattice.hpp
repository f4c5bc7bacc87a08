#pragma once

#include "syswork/norms.hpp"
#include "syswork/smith.hpp"

namespace syswork {

struct NormedLattice {
  RatMatrix basis;  // rows = basis vectors in ambient coordinates, full row rank
  NormOracle norm;  // norm on the ambient space
};

struct EnumerationBudgetError : std::runtime_error {
  size_t visited;
  double radius;
  EnumerationBudgetError(const std::string& msg, size_t v, double r)
      : std::runtime_error(msg), visited(v), radius(r) {}
};

struct MinimaResult {
  std::vector<NormVal> minima;  // lambda_1 <= ... <= lambda_b
  IntMatrix witnesses;          // rows: lattice coordinates, first nonzero positive
  RatMatrix witness_vectors;    // rows: ambient vectors
  size_t enumerated = 0;        // candidate vectors examined
};

// Successive minima with witnesses.  Complete by construction: candidates are
// enumerated inside the lower-bound-Gram ball of radius max basis norm, which
// contains every vector at least as short as the largest minimum.  Exact-norm
// lattices give exact minima; interval norms resolve ties by midpoint.
MinimaResult successive_minima(const NormedLattice& lat, size_t budget = 4000000);

// Dual basis (B^{-1})^T with the dual norm; needs a square basis.
NormedLattice dual_lattice(const NormedLattice& lat);

struct QuasiFamilyResult {
  std::vector<NormVal> norms;
  IntMatrix coords;        // witness lattice coordinates (rows)
  RatMatrix vectors;       // witness ambient vectors (rows)
  Int index;               // |det coords|: covolume ratio of witness sublattice
  bool is_basis;           // index == 1
};

// Norm-minimal independent family realizing the successive minima, with the
// index of the sublattice it spans.
QuasiFamilyResult quasiorthogonal_family(const NormedLattice& lat, size_t budget = 4000000);

struct TransferenceProfile {
  std::vector<NormVal> primal;   // lambda_i(L)
  std::vector<NormVal> dual;     // lambda_i(L*)
  std::vector<double> products;  // lambda_i(L) * lambda_{b-i+1}(L*)
  double max_product = 0;
  double min_product = 0;
  double c_obs = 0;  // max_product / b
};

TransferenceProfile transference_profile(const NormedLattice& lat, size_t budget = 4000000);

}  // namespace syswork
