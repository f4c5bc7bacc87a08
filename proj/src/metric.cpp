#include "syswork/metric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "syswork/lie.hpp"

namespace syswork {

size_t binomial(size_t n, size_t k) {
  if (k > n) return 0;
  size_t r = 1;
  for (size_t i = 0; i < std::min(k, n - k); ++i) r = r * (n - i) / (i + 1);
  return r;
}

double ValueBracket::value() const {
  if (exact) return std::sqrt(rat_d(exact_sq));
  return 0.5 * (lo + hi);
}

ValueBracket ValueBracket::from_sq(const Rat& sq) {
  if (sq < 0) throw std::invalid_argument("negative squared value");
  ValueBracket v;
  v.exact = true;
  v.exact_sq = sq;
  double d = std::sqrt(rat_d(sq));
  v.lo = std::nextafter(std::nextafter(d, 0.0), 0.0);
  v.hi = std::nextafter(std::nextafter(d, 1e308), 1e308);
  return v;
}

ValueBracket ValueBracket::interval(double lo, double hi) {
  ValueBracket v;
  v.lo = lo;
  v.hi = hi;
  return v;
}

namespace {

// Deterministic uniform in [0,1) from raw generator bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
  double u1 = 0;
  while (u1 <= 0) u1 = unit_uniform(rng);
  double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Eigen::MatrixXd to_eigen(const RatMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) e(i, j) = rat_d(m.at(i, j));
  return e;
}

double small_det(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 0: return 1;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default: return m.determinant();
  }
}

}  // namespace

MetricGeometry::MetricGeometry(const CochainModel& model, const RatMatrix& gram)
    : model_(&model), gram_(gram) {
  n_ = model.top_degree;
  if (gram.rows() != n_ || gram.cols() != n_)
    throw std::invalid_argument("gram size does not match the model frame");
  for (size_t k = 0; k <= n_; ++k)
    if (model.dims[k] != binomial(n_, k))
      throw std::invalid_argument("metric needs an invariant-forms model");
  if (!(gram == gram.transpose())) throw std::invalid_argument("gram must be symmetric");
  for (size_t k = 1; k <= n_; ++k) {
    RatMatrix sub(k, k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub.at(i, j) = gram.at(i, j);
    if (!(sub.det() > 0)) throw std::invalid_argument("gram is not positive definite");
  }
  auto inv = gram.inverse();
  if (!inv) throw std::invalid_argument("gram is singular");
  gstar_ = *inv;
  lambda_.assign(n_ + 1, std::nullopt);

  // Upper Cholesky factor of the coframe Gram in doubles: R^T R = gstar.
  Eigen::MatrixXd gs = to_eigen(gstar_);
  Eigen::LLT<Eigen::MatrixXd> llt(gs);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("coframe gram not PD numerically");
  Eigen::MatrixXd r = llt.matrixL().transpose();
  chol_.assign(n_ * n_, 0.0);
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) chol_[i * n_ + j] = r(i, j);
}

const RatMatrix& MetricGeometry::lambda_gram(size_t k) const {
  if (k > n_) throw std::invalid_argument("degree out of range");
  if (!lambda_[k]) {
    auto subs = index_subsets(n_, k);
    RatMatrix w(subs.size(), subs.size());
    for (size_t a = 0; a < subs.size(); ++a)
      for (size_t b = 0; b < subs.size(); ++b) {
        RatMatrix sub(k, k);
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j) sub.at(i, j) = gstar_.at(subs[a][i], subs[b][j]);
        w.at(a, b) = k == 0 ? Rat(1) : sub.det();
      }
    lambda_[k] = w;
  }
  return *lambda_[k];
}

std::vector<double> MetricGeometry::hat_coords(size_t k, const Cochain& alpha) const {
  // Coefficients in an orthonormal coframe f = R^{-T} e, i.e. e^S expands as
  // sum_A det(R[A,S]) f^A.
  auto subs = index_subsets(n_, k);
  std::vector<double> hat(subs.size(), 0.0);
  Eigen::MatrixXd sub(k, k);
  for (size_t s = 0; s < subs.size(); ++s) {
    double c = rat_d(alpha[s]);
    if (c == 0) continue;
    for (size_t a = 0; a < subs.size(); ++a) {
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) sub(i, j) = chol_[subs[a][i] * n_ + subs[s][j]];
      hat[a] += c * small_det(sub);
    }
  }
  return hat;
}

ValueBracket MetricGeometry::comass_two_form(const Cochain& alpha) const {
  // In an orthonormal coframe the comass of a 2-form is its largest singular
  // value as a skew matrix.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  auto subs = index_subsets(n_, 2);
  for (size_t s = 0; s < subs.size(); ++s) {
    double c = rat_d(alpha[s]);
    a(subs[s][0], subs[s][1]) = c;
    a(subs[s][1], subs[s][0]) = -c;
  }
  Eigen::MatrixXd r(n_, n_);
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = 0; j < n_; ++j) r(i, j) = chol_[i * n_ + j];
  Eigen::MatrixXd ahat = r * a * r.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ahat);
  double s = svd.singularValues()(0);
  double pad = 1e-11 * (s + 1e-300);
  return ValueBracket::interval(std::max(0.0, s - pad), s + pad);
}

ValueBracket MetricGeometry::comass_general(size_t k, const Cochain& alpha,
                                            const MetricOptions& opt) const {
  auto subs = index_subsets(n_, k);
  std::vector<double> hat = hat_coords(k, alpha);
  double euclid2 = 0;
  for (double h : hat) euclid2 += h * h;
  double euclid = std::sqrt(euclid2);
  if (euclid == 0) return ValueBracket::interval(0, 0);

  auto value_of = [&](const Eigen::MatrixXd& y) {
    double v = 0;
    Eigen::MatrixXd sub(k, k);
    for (size_t a = 0; a < subs.size(); ++a) {
      if (hat[a] == 0) continue;
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) sub(i, j) = y(i, subs[a][j]);
      v += hat[a] * small_det(sub);
    }
    return v;
  };

  std::mt19937_64 rng(opt.seed);
  double best = 0;
  int starts = std::max(1, opt.multistarts);
  for (int s = 0; s < starts; ++s) {
    Eigen::MatrixXd y(k, n_);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < n_; ++j) y(i, j) = gaussian(rng);
    // Gram-Schmidt rows.
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < i; ++j) y.row(i) -= y.row(i).dot(y.row(j)) * y.row(j);
      double nn = y.row(i).norm();
      y.row(i) /= (nn > 1e-14 ? nn : 1.0);
    }
    double cur = std::abs(value_of(y));
    for (int it = 0; it < opt.iterations; ++it) {
      double before = cur;
      for (size_t slot = 0; slot < k; ++slot) {
        // Linear coefficient of row `slot`: cofactor expansion of each term.
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
        Eigen::MatrixXd minor(k - 1, k - 1);
        for (size_t a = 0; a < subs.size(); ++a) {
          if (hat[a] == 0) continue;
          for (size_t c = 0; c < k; ++c) {
            size_t mi = 0;
            for (size_t i = 0; i < k; ++i) {
              if (i == slot) continue;
              size_t mj = 0;
              for (size_t j = 0; j < k; ++j) {
                if (j == c) continue;
                minor(mi, mj) = y(i, subs[a][j]);
                ++mj;
              }
              ++mi;
            }
            double sign = ((slot + c) % 2 == 0) ? 1.0 : -1.0;
            v(subs[a][c]) += hat[a] * sign * small_det(minor);
          }
        }
        for (size_t i = 0; i < k; ++i) {
          if (i == slot) continue;
          v -= v.dot(y.row(i)) * y.row(i).transpose();
        }
        double nn = v.norm();
        if (nn > 1e-14) y.row(slot) = v.transpose() / nn;
      }
      cur = std::abs(value_of(y));
      if (cur - before < opt.tol * 1e-3 * (1 + cur)) break;
    }
    best = std::max(best, cur);
  }
  double lower_floor = euclid / std::sqrt(static_cast<double>(subs.size()));
  best = std::max(best, lower_floor);
  return ValueBracket::interval(best * (1 - 1e-11), euclid * (1 + 1e-15));
}

ValueBracket MetricGeometry::comass(size_t k, const Cochain& alpha,
                                    const MetricOptions& opt) const {
  if (k > n_) throw std::invalid_argument("degree out of range");
  if (alpha.size() != model_->dims[k]) throw std::invalid_argument("comass: wrong coordinate size");
  if (euclid_degree(k)) {
    const RatMatrix& w = lambda_gram(k);
    Rat sq(0);
    for (size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      for (size_t j = 0; j < alpha.size(); ++j) sq += alpha[i] * w.at(i, j) * alpha[j];
    }
    return ValueBracket::from_sq(sq);
  }
  if (k == 2) return comass_two_form(alpha);
  return comass_general(k, alpha, opt);
}

MetricGeometry::MinComass MetricGeometry::min_comass_form(size_t k, const Cochain& alpha,
                                                          const MetricOptions& opt) const {
  if (k == 0 || model_->dims[k - 1] == 0)
    return min_comass_over(k, alpha, RatMatrix(0, alpha.size()), opt);
  Subspace img = Subspace::span(model_->d[k - 1].transpose());
  return min_comass_over(k, alpha, img.basis(), opt);
}

MetricGeometry::MinComass MetricGeometry::min_comass_primitive(size_t k, const Cochain& eta,
                                                               const MetricOptions& opt) const {
  if (k == 0) throw std::invalid_argument("degree-0 forms have no primitives");
  Cochain w0 = model_->solve_primitive(k, eta);
  return min_comass_over(k - 1, w0, model_->d[k - 1].kernel_basis(), opt);
}

MetricGeometry::MinComass MetricGeometry::min_comass_over(size_t k, const Cochain& alpha,
                                                          const RatMatrix& e,
                                                          const MetricOptions& opt) const {
  MinComass out;
  size_t ne = e.rows();
  if (ne == 0) {
    out.value = comass(k, alpha, opt);
    out.witness = alpha;
    return out;
  }

  // Exact least squares against the Euclidean mass: used directly in
  // Euclidean degrees and as the bracket anchor elsewhere.
  const RatMatrix& w = lambda_gram(k);
  RatMatrix ew = e * w;
  RatMatrix ewe = ew * e.transpose();
  RatVec rhs(ne, Rat(0));
  for (size_t i = 0; i < ne; ++i) rhs[i] = -dot(ew.row(i), alpha);
  auto copt = ewe.solve(rhs);
  if (!copt) throw std::logic_error("least squares system is singular");
  Cochain ls = alpha;
  for (size_t i = 0; i < ne; ++i)
    for (size_t j = 0; j < ls.size(); ++j) ls[j] += (*copt)[i] * e.at(i, j);
  Rat ls_sq(0);
  for (size_t i = 0; i < ls.size(); ++i) {
    if (ls[i] == 0) continue;
    for (size_t j = 0; j < ls.size(); ++j) ls_sq += ls[i] * w.at(i, j) * ls[j];
  }

  if (euclid_degree(k)) {
    out.value = ValueBracket::from_sq(ls_sq);
    out.witness = ls;
    return out;
  }

  // Iterative descent over the exact-form coefficients, seeded at zero and
  // at the least-squares point; the comass is convex in the coefficients.
  size_t nsub = binomial(n_, k);
  double lower = std::sqrt(rat_d(ls_sq) / static_cast<double>(nsub));
  auto eval = [&](const std::vector<Rat>& c) {
    Cochain f = alpha;
    for (size_t i = 0; i < ne; ++i) {
      if (c[i] == 0) continue;
      for (size_t j = 0; j < f.size(); ++j) f[j] += c[i] * e.at(i, j);
    }
    MetricOptions inner = opt;
    inner.multistarts = std::max(4, opt.multistarts / 2);
    return std::make_pair(comass(k, f, inner), f);
  };

  std::vector<Rat> best_c(ne, Rat(0));
  auto [bb, bf] = eval(best_c);
  double best = bb.hi;
  Cochain best_form = bf;
  ValueBracket best_val = bb;
  {
    std::vector<Rat> c(*copt);
    auto [vb, vf] = eval(c);
    if (vb.hi < best) {
      best = vb.hi;
      best_form = vf;
      best_val = vb;
      best_c = c;
    }
  }
  // Coordinatewise dyadic refinement around the best point.
  Rat step(1);
  for (int round = 0; round < opt.descent_rounds; ++round) {
    bool improved = false;
    for (size_t i = 0; i < ne; ++i) {
      for (int sgn : {1, -1}) {
        std::vector<Rat> c = best_c;
        c[i] += Rat(sgn) * step;
        auto [vb, vf] = eval(c);
        if (vb.hi < best * (1 - 1e-12)) {
          best = vb.hi;
          best_form = vf;
          best_val = vb;
          best_c = c;
          improved = true;
        }
      }
    }
    if (!improved) {
      step /= 2;
      if (step < make_rat(Int(1), Int(1) << 20)) break;
    }
  }
  out.value = ValueBracket::interval(lower, best_val.hi);
  out.witness = best_form;
  return out;
}

MetricGeometry::MinComass MetricGeometry::min_comass_in_class(const CohomologyRing& ring,
                                                              const CohomologyClass& c,
                                                              const MetricOptions& opt) const {
  return min_comass_form(c.degree, ring.representative(c), opt);
}

RatMatrix MetricGeometry::class_euclid_profile(const CohomologyRing& ring, size_t k) const {
  const RatMatrix& reps = ring.representatives(k);
  const RatMatrix& w = lambda_gram(k);
  size_t b = reps.rows();
  if (b == 0) return RatMatrix(0, 0);
  RatMatrix core = w;
  if (k > 0 && model_->dims[k - 1] > 0) {
    Subspace img = Subspace::span(model_->d[k - 1].transpose());
    const RatMatrix& e = img.basis();
    if (e.rows() > 0) {
      RatMatrix ew = e * w;
      auto inv = (ew * e.transpose()).inverse();
      if (!inv) throw std::logic_error("exact-form Gram is singular");
      core = w - ew.transpose() * (*inv) * ew;
    }
  }
  return reps * core * reps.transpose();
}

RatMatrix MetricGeometry::pairing_matrix(const CohomologyRing& ring, size_t k) const {
  if (model_->cycles.size() <= k || model_->cycles[k].rows() == 0)
    throw std::runtime_error("model declares no cycles in this degree");
  return ring.representatives(k) * model_->cycles[k].transpose();
}

ValueBracket MetricGeometry::stable_norm(const CohomologyRing& ring, size_t k, const RatVec& h,
                                         const MetricOptions& opt) const {
  RatMatrix p = pairing_matrix(ring, k);
  RatMatrix m = class_euclid_profile(ring, k);
  RatVec ph = p.apply(h);
  auto x = m.solve(ph);
  if (!x) throw std::logic_error("norm profile is singular");
  Rat base_sq = dot(ph, *x);
  if (euclid_degree(k)) return ValueBracket::from_sq(base_sq);

  // Brackets: comass <= Euclidean mass <= sqrt(binom) * comass.
  double base = std::sqrt(rat_d(base_sq));
  double width = std::sqrt(static_cast<double>(binomial(n_, k)));
  double lo = base;
  // Refine the lower end with the Euclidean-optimal form and a rigorous
  // upper bound on its minimal comass.
  const RatMatrix& reps = ring.representatives(k);
  Cochain opt_form(model_->dims[k], Rat(0));
  for (size_t i = 0; i < reps.rows(); ++i)
    for (size_t j = 0; j < opt_form.size(); ++j) opt_form[j] += (*x)[i] * reps.at(i, j);
  MinComass mc = min_comass_form(k, opt_form, opt);
  double pairing = std::abs(rat_d(dot(*x, ph)));
  if (mc.value.hi > 0) lo = std::max(lo, pairing / mc.value.hi);
  return ValueBracket::interval(lo, base * width);
}

NormOracle MetricGeometry::stable_norm_oracle(const CohomologyRing& ring, size_t k,
                                              const MetricOptions& opt) const {
  (void)opt;
  RatMatrix p = pairing_matrix(ring, k);
  RatMatrix m = class_euclid_profile(ring, k);
  auto minv = m.inverse();
  if (!minv) throw std::logic_error("norm profile is singular");
  RatMatrix st = p.transpose() * (*minv) * p;
  if (euclid_degree(k)) return NormOracle::quadratic(st);
  size_t b = p.rows();
  Rat c(binomial(n_, k));
  RatMatrix st_hi = st.scaled(c);
  auto fn = [st, b](const RatVec& h) {
    Rat sq(0);
    for (size_t i = 0; i < b; ++i)
      for (size_t j = 0; j < b; ++j) sq += h[i] * st.at(i, j) * h[j];
    return std::sqrt(rat_d(sq));
  };
  return NormOracle::external(p.cols(), fn, st, st_hi, 7);
}

MetricGeometry::Systole MetricGeometry::stable_systole(const CohomologyRing& ring, size_t k,
                                                       const MetricOptions& opt) const {
  size_t b = ring.betti(k);
  if (b == 0) throw std::runtime_error("no homology in this degree");
  NormOracle oracle = stable_norm_oracle(ring, k, opt);
  NormedLattice lat{RatMatrix::identity(b), oracle};
  MinimaResult mr = successive_minima(lat);
  Systole out;
  out.minima = mr.minima;
  const NormVal& nv = mr.minima[0];
  out.exact = nv.exact();
  if (nv.exact()) {
    out.value = ValueBracket::from_sq(nv.kind == NormVal::Kind::Rational ? nv.q * nv.q : nv.q);
  } else {
    // The oracle reported the Euclidean proxy; widen by the bracket factor.
    double width = std::sqrt(static_cast<double>(binomial(n_, k)));
    out.value = ValueBracket::interval(nv.lo, nv.hi * width);
  }
  out.cycle.resize(b);
  for (size_t i = 0; i < b; ++i) out.cycle[i] = mr.witnesses.at(0, i);
  return out;
}

MetricGeometry::Isoperimetric MetricGeometry::isoperimetric_quotient(const CohomologyRing& ring,
                                                                     size_t k,
                                                                     const MetricOptions& opt) const {
  (void)opt;
  (void)ring;
  Isoperimetric out;
  if (k == 0 || k > n_) {
    out.no_exact_forms = true;
    out.value = ValueBracket::from_sq(Rat(0));
    return out;
  }
  Subspace img = Subspace::span(model_->d[k - 1].transpose());
  const RatMatrix& e = img.basis();
  size_t ne = e.rows();
  if (ne == 0) {
    out.no_exact_forms = true;
    out.value = ValueBracket::from_sq(Rat(0));
    return out;
  }

  // Exact profiles: numerator = least-squares mass of a primitive of E^T t,
  // denominator = mass of E^T t itself.
  const RatMatrix& wk = lambda_gram(k);
  const RatMatrix& wprev = lambda_gram(k - 1);
  RatMatrix b0(ne, model_->dims[k - 1]);
  for (size_t i = 0; i < ne; ++i) b0.set_row(i, model_->solve_primitive(k, e.row(i)));
  RatMatrix kmat = model_->d[k - 1].kernel_basis();
  RatMatrix mp = b0 * wprev * b0.transpose();
  if (kmat.rows() > 0) {
    RatMatrix kw = kmat * wprev;
    auto inv = (kw * kmat.transpose()).inverse();
    if (!inv) throw std::logic_error("kernel Gram is singular");
    RatMatrix cross = b0 * wprev * kmat.transpose();
    mp = mp - cross * (*inv) * cross.transpose();
  }
  RatMatrix mc = e * wk * e.transpose();

  if (ne == 1) {
    Rat ratio_sq = mp.at(0, 0) / mc.at(0, 0);
    out.witness = e.row(0);
    if (euclid_degree(k) && euclid_degree(k - 1)) {
      out.value = ValueBracket::from_sq(ratio_sq);
    } else {
      double r = std::sqrt(rat_d(ratio_sq));
      double wlo = euclid_degree(k - 1) ? 1.0 : std::sqrt(static_cast<double>(binomial(n_, k - 1)));
      double whi = euclid_degree(k) ? 1.0 : std::sqrt(static_cast<double>(binomial(n_, k)));
      out.value = ValueBracket::interval(r / wlo, r * whi);
    }
    return out;
  }

  Eigen::MatrixXd mpe = to_eigen(mp), mce = to_eigen(mc);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(mpe, mce);
  if (ges.info() != Eigen::Success) throw std::logic_error("generalized eigensolve failed");
  size_t last = ne - 1;
  double lmax = ges.eigenvalues()(last);
  Eigen::VectorXd t = ges.eigenvectors().col(last);
  Cochain witness(model_->dims[k], Rat(0));
  for (size_t i = 0; i < ne; ++i) {
    Rat c(t(i));
    for (size_t j = 0; j < witness.size(); ++j) witness[j] += c * e.at(i, j);
  }
  out.witness = witness;
  double r = std::sqrt(std::max(0.0, lmax));
  if (euclid_degree(k) && euclid_degree(k - 1)) {
    double pad = 1e-9 * (r + 1e-300);
    out.value = ValueBracket::interval(std::max(0.0, r - pad), r + pad);
  } else {
    double wlo = euclid_degree(k - 1) ? 1.0 : std::sqrt(static_cast<double>(binomial(n_, k - 1)));
    double whi = euclid_degree(k) ? 1.0 : std::sqrt(static_cast<double>(binomial(n_, k)));
    out.value = ValueBracket::interval(r / wlo * (1 - 1e-9), r * whi * (1 + 1e-9));
  }
  return out;
}

ValueBracket MetricGeometry::volume() const {
  Rat det = gram_.det();
  return ValueBracket::from_sq(det * model_->covolume * model_->covolume);
}

}  // namespace syswork
