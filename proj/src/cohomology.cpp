#include "syswork/cohomology.hpp"

#include <sstream>

namespace syswork {

CohomologyRing::CohomologyRing(const CochainModel& model) : model_(&model) {
  size_t top = model.top_degree;
  betti_.resize(top + 1);
  reps_.resize(top + 1);
  proj_.resize(top + 1);
  int_image_.resize(top + 1);
  int_lifts_.resize(top + 1);

  for (size_t k = 0; k <= top; ++k) {
    size_t n = model.dims[k];
    RatMatrix cocycles = (k < top) ? model.d[k].kernel_basis() : RatMatrix::identity(n);
    Subspace exact = (k > 0) ? Subspace::span(model.d[k - 1].transpose()) : Subspace(n);

    // Greedy echelon-canonical lift: keep kernel rows whose classes are new.
    Subspace seen = exact;
    std::vector<RatVec> rep_rows;
    for (size_t i = 0; i < cocycles.rows(); ++i) {
      RatVec z = cocycles.row(i);
      if (seen.contains(z)) continue;
      rep_rows.push_back(z);
      seen = seen.sum(Subspace::span(RatMatrix::row_vector(z)));
    }
    betti_[k] = rep_rows.size();
    reps_[k] = rep_rows.empty() ? RatMatrix(0, n) : RatMatrix::from_rows(rep_rows);

    // Projection onto class coordinates: complete [exact; reps] to a basis of
    // the whole degree, invert, and keep the rows dual to the reps block.
    RatMatrix full = exact.basis().vstack(reps_[k]);
    Subspace fullspan = Subspace::span(full);
    for (size_t j = 0; j < n && fullspan.dim() < n; ++j) {
      RatVec e(n, Rat(0));
      e[j] = 1;
      if (fullspan.contains(e)) continue;
      full = full.vstack(RatMatrix::row_vector(e));
      fullspan = Subspace::span(full);
    }
    auto finv = full.transpose().inverse();
    if (!finv) throw std::logic_error("degree basis completion failed");
    RatMatrix pk(betti_[k], n);
    for (size_t i = 0; i < betti_[k]; ++i)
      pk.set_row(i, finv->row(exact.dim() + i));
    proj_[k] = pk;
  }

  cup_.assign(top + 1, std::vector<RatMatrix>(top + 1));
  for (size_t k = 0; k <= top; ++k) {
    for (size_t l = 0; k + l <= top; ++l) {
      RatMatrix t(betti_[k + l], betti_[k] * betti_[l]);
      for (size_t i = 0; i < betti_[k]; ++i) {
        Cochain a = reps_[k].row(i);
        for (size_t j = 0; j < betti_[l]; ++j) {
          Cochain w = model.wedge(k, l, a, reps_[l].row(j));
          RatVec coords = proj_[k + l].apply(w);
          for (size_t r = 0; r < betti_[k + l]; ++r) t.at(r, i * betti_[l] + j) = coords[r];
        }
      }
      cup_[k][l] = t;
    }
  }

  if (model.has_integral) {
    for (size_t k = 0; k <= top; ++k) {
      size_t n = model.dims[k];
      IntMatrix zint = IntMatrix::identity(n);
      if (k < top) {
        auto dk = IntMatrix::from_rat(model.d[k]);
        if (!dk) throw std::runtime_error("integral model has a non-integer differential");
        zint = integer_kernel(*dk);
      }
      // Project the integer cocycles to class coordinates and take the
      // lattice they generate there.
      RatMatrix gens(zint.rows(), betti_[k]);
      for (size_t i = 0; i < zint.rows(); ++i) {
        RatVec z(n);
        for (size_t j = 0; j < n; ++j) z[j] = Rat(zint.at(i, j));
        RatVec coords = proj_[k].apply(z);
        gens.set_row(i, coords);
      }
      int_image_[k] = lattice_from_generators(gens);

      // Lift each lattice basis row back to an integer cocycle: find integer
      // combinations of the integer cocycles with the right projection.
      size_t rk = int_image_[k].rank();
      IntMatrix lifts(rk, n);
      if (rk > 0) {
        Int scale = int_image_[k].denom;
        for (size_t i = 0; i < gens.rows(); ++i)
          for (size_t j = 0; j < betti_[k]; ++j)
            scale = lcm(scale, gens.at(i, j).get_den());
        IntMatrix a(betti_[k], zint.rows());
        for (size_t i = 0; i < zint.rows(); ++i)
          for (size_t j = 0; j < betti_[k]; ++j) {
            Rat v = gens.at(i, j) * Rat(scale);
            a.at(j, i) = v.get_num();
          }
        for (size_t r = 0; r < rk; ++r) {
          IntVec rhs(betti_[k]);
          for (size_t j = 0; j < betti_[k]; ++j) {
            Rat v = Rat(int_image_[k].rows.at(r, j)) * Rat(scale) / Rat(int_image_[k].denom);
            if (!is_integer(v)) throw std::logic_error("lattice lift scaling failed");
            rhs[j] = v.get_num();
          }
          auto combo = solve_integer(a, rhs);
          if (!combo) throw std::logic_error("integral class has no integer cocycle lift");
          for (size_t j = 0; j < n; ++j) {
            Int acc(0);
            for (size_t i = 0; i < zint.rows(); ++i) acc += (*combo)[i] * zint.at(i, j);
            lifts.at(r, j) = acc;
          }
        }
      }
      int_lifts_[k] = lifts;
    }
  }
}

CohomologyClass CohomologyRing::class_of(size_t k, const RatVec& coords) const {
  if (coords.size() != betti(k)) throw std::invalid_argument("class coords: wrong size");
  return CohomologyClass{k, coords};
}

CohomologyClass CohomologyRing::basis_class(size_t k, size_t i) const {
  RatVec c(betti(k), Rat(0));
  c.at(i) = 1;
  return CohomologyClass{k, c};
}

Cochain CohomologyRing::representative(const CohomologyClass& c) const {
  if (c.degree > top_degree()) return Cochain();
  Cochain out(model_->dims[c.degree], Rat(0));
  for (size_t i = 0; i < betti_[c.degree]; ++i) {
    if (c.coords[i] == 0) continue;
    for (size_t j = 0; j < out.size(); ++j) out[j] += c.coords[i] * reps_[c.degree].at(i, j);
  }
  return out;
}

CohomologyClass CohomologyRing::project(size_t k, const Cochain& z) const {
  if (k > top_degree()) return CohomologyClass{k, {}};
  if (!model_->is_closed(k, z)) throw std::invalid_argument("project: cochain is not closed");
  return CohomologyClass{k, proj_[k].apply(z)};
}

CohomologyClass CohomologyRing::cup(const CohomologyClass& a, const CohomologyClass& b) const {
  size_t k = a.degree, l = b.degree;
  if (k + l > top_degree()) return CohomologyClass{k + l, {}};
  RatVec out(betti_[k + l], Rat(0));
  const RatMatrix& t = cup_[k][l];
  for (size_t i = 0; i < betti_[k]; ++i) {
    if (a.coords[i] == 0) continue;
    for (size_t j = 0; j < betti_[l]; ++j) {
      if (b.coords[j] == 0) continue;
      Rat c = a.coords[i] * b.coords[j];
      for (size_t r = 0; r < out.size(); ++r) out[r] += c * t.at(r, i * betti_[l] + j);
    }
  }
  return CohomologyClass{k + l, out};
}

bool CohomologyRing::cup_is_zero_on_degree(size_t m) const {
  if (2 * m > top_degree()) return true;
  return cup_[m][m].is_zero();
}

bool CohomologyRing::torsion_free(size_t k) const {
  if (!model_->has_integral) throw std::runtime_error("model has no integral structure");
  if (k == 0 || k > top_degree()) return true;
  auto dm = IntMatrix::from_rat(model_->d[k - 1]);
  if (!dm) throw std::runtime_error("integral model has a non-integer differential");
  SmithResult s = smith_normal_form(*dm);
  for (const Int& v : s.diagonal)
    if (v > 1) return false;
  return true;
}

Rat CohomologyRing::pair_with_homology(const CohomologyClass& c, const RatVec& x0) const {
  size_t k = c.degree;
  if (k > top_degree() || model_->cycles.size() <= k || model_->cycles[k].rows() == 0)
    throw std::runtime_error("model declares no cycles in this degree");
  const RatMatrix& f = model_->cycles[k];
  if (x0.size() != f.rows()) throw std::invalid_argument("homology element: wrong size");
  RatVec vals = f.apply(representative(c));
  return dot(vals, x0);
}

std::optional<IntVec> CohomologyRing::integral_coordinates(const CohomologyClass& c) const {
  if (!has_integral()) return std::nullopt;
  return lattice_coordinates(int_image_[c.degree], c.coords);
}

Cochain CohomologyRing::integral_representative(const CohomologyClass& c) const {
  auto coords = integral_coordinates(c);
  if (!coords) throw std::runtime_error("class is not integral");
  size_t n = model_->dims[c.degree];
  Cochain out(n, Rat(0));
  const IntMatrix& lifts = int_lifts_[c.degree];
  for (size_t i = 0; i < coords->size(); ++i)
    for (size_t j = 0; j < n; ++j) out[j] += Rat((*coords)[i] * lifts.at(i, j));
  return out;
}

bool CohomologyRing::pairing_unimodular(size_t k) const {
  if (!has_integral() || k > top_degree()) return false;
  if (model_->cycles.size() <= k) return false;
  const RatMatrix& f = model_->cycles[k];
  const IntMatrix& lifts = int_lifts_[k];
  if (f.rows() != lifts.rows() || f.rows() != betti_[k]) return false;
  if (betti_[k] == 0) return true;
  RatMatrix pairing = f * lifts.to_rat().transpose();
  Rat d = pairing.det();
  return d == 1 || d == -1;
}

}  // namespace syswork
