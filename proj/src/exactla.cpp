#include "mwd/exactla.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mwd {

namespace {

// Row-reduce in place, returning pivot columns. When track is non-null it
// receives the accumulated row operations (start it at the identity).
std::vector<Eigen::Index> rref_in_place(RMatrix& a, RMatrix* track) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (!a(i, c).is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot == -1) continue;
    if (pivot != r) {
      a.row(pivot).swap(a.row(r));
      if (track) track->row(pivot).swap(track->row(r));
    }
    const Rational inv = Rational(1) / a(r, c);
    a.row(r) *= inv;
    if (track) track->row(r) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Rational f = a(i, c);
      a.row(i) -= f * a.row(r);
      if (track) track->row(i) -= f * track->row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<BigInt>> clear_denominators(const RMatrix& m) {
  std::vector<std::vector<BigInt>> out(m.rows(), std::vector<BigInt>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    BigInt l = 1;
    for (Eigen::Index j = 0; j < m.cols(); ++j) l = boost::multiprecision::lcm(l, m(i, j).den());
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).num() * (l / m(i, j).den());
  }
  return out;
}

}  // namespace

RMatrix to_rational(const IntMatrix& m) {
  return m.cast<long long>().unaryExpr([](long long x) { return Rational(x); });
}

RVector to_rational(const IntVector& v) {
  return v.cast<long long>().unaryExpr([](long long x) { return Rational(x); });
}

Eigen::MatrixXd to_double(const RMatrix& m) {
  return m.unaryExpr([](const Rational& r) { return r.to_double(); });
}

RMatrix k_matrix(Eigen::Index n) {
  RMatrix k = RMatrix::Identity(n, n);
  const Rational c(-1, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) += c;
  return k;
}

Eigen::Index Spectrum::dimension() const {
  Eigen::Index dim = 0;
  if (mode == Mode::Exact) {
    for (const auto& [v, k] : exact) dim += k;
  } else {
    for (const auto& [v, k] : numeric) dim += k;
  }
  return dim;
}

Spectrum Spectrum::exact_lines(std::vector<std::pair<Rational, Eigen::Index>> lines) {
  std::sort(lines.begin(), lines.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Spectrum sp;
  sp.mode = Mode::Exact;
  for (auto& [v, k] : lines) {
    if (k == 0) continue;
    if (!sp.exact.empty() && sp.exact.back().first == v) {
      sp.exact.back().second += k;
    } else {
      sp.exact.emplace_back(v, k);
    }
  }
  return sp;
}

RMatrix g_inverse(const RMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  RMatrix work = m;
  RMatrix ops = RMatrix::Identity(rows, rows);
  const std::vector<Eigen::Index> pivots = rref_in_place(work, &ops);
  // With E m in reduced form and pivot columns c_k, placing row k of E into
  // row c_k of G gives m G m = m: the pivot columns of m reproduce every
  // column through the reduced form's column relations.
  RMatrix g = RMatrix::Zero(cols, rows);
  for (std::size_t k = 0; k < pivots.size(); ++k) g.row(pivots[k]) = ops.row(static_cast<Eigen::Index>(k));
  return g;
}

RMatrix projector(const RMatrix& m) {
  const RMatrix gram = m.transpose() * m;
  return m * g_inverse(gram) * m.transpose();
}

RMatrix c_matrix_definitional(const Design& d) { return SettingSolver(d.setting).c_matrix(d); }

SettingSolver::SettingSolver(const Setting& st) {
  st.validate();
  n_ = st.n();
  offsets_.resize(st.m());
  cols_ = 1;
  for (int j = 0; j < st.m(); ++j) {
    offsets_[j] = cols_;
    cols_ += st.factors[j].levels;
  }

  // Gram matrix of [X_G, X_B1, ..., X_Bm] assembled by counting.
  IntMatrix gram = IntMatrix::Zero(cols_, cols_);
  gram(0, 0) = n_;
  for (Eigen::Index u = 0; u < n_; ++u) {
    for (int j = 0; j < st.m(); ++j) {
      const Eigen::Index cj = offsets_[j] + st.eta2(u, j);
      gram(0, cj) += 1;
      gram(cj, 0) += 1;
      for (int k = 0; k < st.m(); ++k) gram(cj, offsets_[k] + st.eta2(u, k)) += 1;
    }
  }
  gram_ginv_ = g_inverse(to_rational(gram));
}

RMatrix SettingSolver::c_matrix(const Design& d) const {
  if (d.setting.n() != n_) throw_param("bad_parameters", "design does not live on this solver's setting");
  d.validate();
  IntMatrix cross = IntMatrix::Zero(d.v, cols_);  // X_V' [X_G, X_B...]
  IntVector reps = IntVector::Zero(d.v);
  for (Eigen::Index u = 0; u < n_; ++u) {
    const std::int64_t t = d.eta1(u);
    reps(t) += 1;
    cross(t, 0) += 1;
    for (int j = 0; j < d.setting.m(); ++j) cross(t, offsets_[j] + d.setting.eta2(u, j)) += 1;
  }
  const RMatrix cross_r = to_rational(cross);
  RMatrix c = -(cross_r * gram_ginv_ * cross_r.transpose());
  for (Eigen::Index i = 0; i < d.v; ++i) c(i, i) += Rational(reps(i));
  return c;
}

bool SettingSolver::is_connected(const Design& d) const {
  return exact_rank(c_matrix(d)) == d.v - 1;
}

RMatrix c_b_matrix(const Design& d, int factor) {
  const RMatrix nb = to_rational(incidence_matrix(d, FactorRef::V(), FactorRef::block(factor)));
  const RVector r = to_rational(replication_vector(d));
  const Rational inv_sb(1, d.setting.factors[factor].levels);
  return nb - inv_sb * (r * RMatrix::Ones(1, nb.cols()));
}

RMatrix c_matrix_closedform(const Design& d) {
  d.validate();
  const SettingClass sc = classify_setting(d.setting);
  if (sc.kind == SettingClass::Kind::Other) {
    throw_param("unsupported_setting", "no closed form for this setting: " + sc.evidence);
  }

  const RVector r = to_rational(replication_vector(d));
  const Rational inv_n(1, d.n());
  RMatrix c0 = RMatrix::Zero(d.v, d.v);
  for (Eigen::Index i = 0; i < d.v; ++i) {
    c0(i, i) = r(i);
    for (Eigen::Index j = 0; j < d.v; ++j) c0(i, j) -= inv_n * r(i) * r(j);
  }

  const Rational inv_s(1, sc.s);
  RMatrix sum_cbcb = RMatrix::Zero(d.v, d.v);
  RMatrix s_all = RMatrix::Zero(d.v, sc.s);    // sum over all factors (types 1/2)
  RMatrix s_tilde = RMatrix::Zero(d.v, sc.s);  // sum over the s-level factors (type 3)
  for (int j = 0; j < d.setting.m(); ++j) {
    const RMatrix cb = c_b_matrix(d, j);
    sum_cbcb += cb * cb.transpose();
    if (sc.kind != SettingClass::Kind::Type3) {
      s_all += cb;
    } else if (j != sc.e_factor) {
      s_tilde += cb;
    }
  }

  if (sc.kind == SettingClass::Kind::Type3) {
    const std::int64_t u = sc.s + sc.m - 1;
    return c0 - inv_s * sum_cbcb + Rational(1, sc.s * u) * (s_tilde * s_tilde.transpose());
  }
  const std::int64_t p = sc.kind == SettingClass::Kind::Type1 ? -1 : sc.p;
  const std::int64_t u = sc.s + sc.m * p;
  if (u <= 0) {
    throw_param("unsupported_setting", "closed form needs s + mp > 0; got u = " + std::to_string(u));
  }
  return c0 - inv_s * sum_cbcb + (Rational(p) / Rational(sc.s * u)) * (s_all * s_all.transpose());
}

std::vector<Eigen::Index> pivot_columns(const RMatrix& m) {
  RMatrix work = m;
  return rref_in_place(work, nullptr);
}

Eigen::Index exact_rank(const RMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto a = clear_denominators(m);
  const Eigen::Index rows = m.rows(), cols = m.cols();
  BigInt prev = 1;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (a[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == -1) continue;
    if (pivot != r) std::swap(a[pivot], a[r]);
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;  // exact division
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

std::vector<RVector> kernel_basis(const RMatrix& m) {
  RMatrix work = m;
  const std::vector<Eigen::Index> pivots = rref_in_place(work, nullptr);
  std::vector<bool> is_pivot(m.cols(), false);
  for (Eigen::Index c : pivots) is_pivot[c] = true;

  std::vector<RVector> basis;
  for (Eigen::Index free_col = 0; free_col < m.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    RVector x = RVector::Zero(m.cols());
    x(free_col) = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      x(pivots[k]) = -work(static_cast<Eigen::Index>(k), free_col);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

bool verify_spectrum(const RMatrix& m, const Spectrum& candidate) {
  if (candidate.mode != Spectrum::Mode::Exact) {
    throw_param("mode_mismatch", "spectrum verification needs an exact candidate");
  }
  if (m.rows() != m.cols()) throw_param("bad_parameters", "spectrum verification needs a square matrix");
  if (m != m.transpose()) throw_param("bad_parameters", "spectrum verification needs a symmetric matrix");
  const Eigen::Index dim = m.rows();
  if (candidate.dimension() != dim) return false;
  for (const auto& [value, mult] : candidate.exact) {
    RMatrix shifted = m;
    for (Eigen::Index i = 0; i < dim; ++i) shifted(i, i) -= value;
    if (exact_rank(shifted) != dim - mult) return false;
  }
  return true;
}

Spectrum eigenvalues_numeric(const RMatrix& m, double tol, Eigen::MatrixXd& eigenvectors) {
  const Eigen::MatrixXd md = to_double(m);
  Spectrum sp = eigenvalues_numeric(m, tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(md);
  eigenvectors = solver.eigenvectors();
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double scale = std::max(1.0, md.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double residual = (md * eigenvectors.col(i) - ev(i) * eigenvectors.col(i)).norm();
    if (residual > tol * scale) {
      throw InternalError("convergence_failure",
                          "eigenpair residual " + std::to_string(residual) + " above tolerance");
    }
  }
  return sp;
}

Spectrum eigenvalues_numeric(const RMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw_param("bad_parameters", "needs a square matrix");
  if (m != m.transpose()) throw_param("bad_parameters", "needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_double(m));
  if (solver.info() != Eigen::Success) {
    throw InternalError("convergence_failure", "numeric eigensolver did not converge");
  }
  const Eigen::VectorXd ev = solver.eigenvalues();

  Spectrum sp;
  sp.mode = Spectrum::Mode::Numeric;
  sp.tol = tol;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!sp.numeric.empty() && std::abs(ev(i) - sp.numeric.back().first) <= tol) {
      // running mean keeps the cluster representative stable
      auto& [value, count] = sp.numeric.back();
      value = (value * static_cast<double>(count) + ev(i)) / static_cast<double>(count + 1);
      ++count;
    } else {
      sp.numeric.emplace_back(ev(i), 1);
    }
  }
  return sp;
}

bool is_psd(RMatrix m) {
  if (m.rows() != m.cols()) throw_param("bad_parameters", "PSD test needs a square matrix");
  if (m != m.transpose()) throw_param("bad_parameters", "PSD test needs a symmetric matrix");
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> live(n);
  std::iota(live.begin(), live.end(), 0);

  while (!live.empty()) {
    Eigen::Index pivot = -1;
    for (Eigen::Index idx : live) {
      if (m(idx, idx).sign() < 0) return false;
      if (pivot == -1 && m(idx, idx).sign() > 0) pivot = idx;
    }
    if (pivot == -1) {
      // all remaining diagonal entries vanish: the block must be zero
      for (Eigen::Index i : live)
        for (Eigen::Index j : live)
          if (!m(i, j).is_zero()) return false;
      return true;
    }
    // Schur complement step on the positive pivot.
    const Rational inv = Rational(1) / m(pivot, pivot);
    std::vector<Eigen::Index> next;
    next.reserve(live.size() - 1);
    for (Eigen::Index i : live) {
      if (i != pivot) next.push_back(i);
    }
    for (Eigen::Index i : next) {
      const Rational fi = m(i, pivot) * inv;
      for (Eigen::Index j : next) m(i, j) -= fi * m(pivot, j);
    }
    live = std::move(next);
  }
  return true;
}

bool loewner_geq(const RMatrix& a, const RMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw_param("bad_parameters", "Loewner comparison needs equal dimensions");
  }
  return is_psd(a - b);
}

std::vector<Rational> characteristic_polynomial(const RMatrix& m) {
  if (m.rows() != m.cols()) throw_param("bad_parameters", "characteristic polynomial needs a square matrix");
  const Eigen::Index n = m.rows();
  // Faddeev-LeVerrier: M_1 = A, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A(M_k + c I).
  std::vector<Rational> coeff(n + 1, Rational(0));
  coeff[n] = 1;
  RMatrix mk = RMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk;
    const Rational c = -mk.trace() / Rational(static_cast<long long>(k));
    coeff[n - k] = c;
    for (Eigen::Index i = 0; i < n; ++i) mk(i, i) += c;
  }
  return coeff;
}

}  // namespace mwd
