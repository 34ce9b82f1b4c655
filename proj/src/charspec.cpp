#include "mwd/charspec.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mwd {

namespace {

Complex root_of_unity(std::int64_t k, std::int64_t n) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(((k % n) + n) % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const CMatrix& m) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) mx = std::max(mx, std::abs(m(i, j)));
  return mx;
}

}  // namespace

CharacterTable build_character_table(const Cyclotomy& cy) {
  const FiniteField& f = cy.field();
  CharacterTable ct;
  ct.s = f.order();
  ct.h = cy.h();
  ct.p = f.p();
  ct.eta = root_of_unity(1, ct.h);
  ct.omega = root_of_unity(1, ct.p);

  ct.u.resize(ct.h, ct.h);
  const double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(ct.h));
  for (int i = 0; i < ct.h; ++i)
    for (int j = 0; j < ct.h; ++j) ct.u(i, j) = inv_sqrt_h * root_of_unity(static_cast<std::int64_t>(i) * j, ct.h);

  ct.v.resize(ct.s, ct.s);
  const double inv_sqrt_s = 1.0 / std::sqrt(static_cast<double>(ct.s));
  for (std::int64_t x = 0; x < ct.s; ++x)
    for (std::int64_t y = 0; y < ct.s; ++y) ct.v(x, y) = inv_sqrt_s * root_of_unity(f.trace(f.mul(x, y)), ct.p);

  ct.g.resize(ct.h);
  for (int i = 0; i < ct.h; ++i) {
    Complex acc{0.0, 0.0};
    for (std::int64_t x : cy.coset(i)) acc += root_of_unity(f.trace(x), ct.p);
    ct.g(i) = acc;
  }

  ct.coset_of.assign(ct.s, -1);
  for (std::int64_t x = 1; x < ct.s; ++x) ct.coset_of[x] = cy.coset_of(x);

  const double uresid = max_abs(ct.u * ct.u.adjoint() - CMatrix::Identity(ct.h, ct.h));
  const double vresid = max_abs(ct.v * ct.v.adjoint() - CMatrix::Identity(ct.s, ct.s));
  if (uresid > 1e-12 || vresid > 1e-12) {
    throw_internal("invariant_violated", "character matrices are not unitary to 1e-12");
  }
  if (std::abs(ct.g.sum() - Complex{-1.0, 0.0}) > 1e-12) {
    throw_internal("invariant_violated", "class sums g_i do not add to -1");
  }
  return ct;
}

DiagonalizationResult diagonalize_L(const CharacterTable& ct, const CyclotomicMatrixSet& lset) {
  const std::int64_t s = ct.s;
  const int h = ct.h;
  if (lset.Lbig.rows() != h * s) throw_param("bad_parameters", "cyclotomic matrix set does not match the table");

  const CMatrix w = kron(ct.u, ct.v);
  const CMatrix lc = lset.Lbig.cast<double>().cast<Complex>();
  const CMatrix d = w.adjoint() * lc * w;

  DiagonalizationResult res;
  res.diagonal = d.diagonal();
  CMatrix off = d;
  off.diagonal().setZero();
  res.offdiag_residual = max_abs(off);

  // predicted diagonal
  res.formula_residual = 0.0;
  for (int i = 0; i < h; ++i) {
    Complex gauss{0.0, 0.0};
    for (int j = 0; j < h; ++j) gauss += ct.g(j) * root_of_unity(-static_cast<std::int64_t>(i) * j, h);
    for (std::int64_t x = 0; x < s; ++x) {
      Complex want;
      if (x == 0) {
        want = (i == 0) ? Complex{static_cast<double>(s - 1), 0.0} : Complex{0.0, 0.0};
      } else {
        const int k = ct.coset_of[x];
        want = root_of_unity(static_cast<std::int64_t>(i) * k, h) * gauss;
      }
      res.formula_residual = std::max(res.formula_residual, std::abs(res.diagonal(i * s + x) - want));
    }
  }

  if (res.offdiag_residual > 1e-9) {
    throw VerificationError("not_diagonal", "conjugated L has off-diagonal residual " +
                                                std::to_string(res.offdiag_residual));
  }
  if (res.formula_residual > 1e-9) {
    throw VerificationError("not_diagonal", "conjugated L diagonal strays from its formula by " +
                                                std::to_string(res.formula_residual));
  }
  return res;
}

std::vector<double> gauss_sum_moduli(const CharacterTable& ct) {
  std::vector<double> out(ct.h);
  for (int i = 0; i < ct.h; ++i) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < ct.h; ++j) acc += ct.g(j) * root_of_unity(-static_cast<std::int64_t>(i) * j, ct.h);
    out[i] = std::norm(acc);
  }
  return out;
}

HHtResult spectrum_HHt(const CharacterTable& ct) {
  const std::int64_t s = ct.s;
  const int h = ct.h;
  const Eigen::MatrixXd block = Eigen::MatrixXd::Ones(s, s) - Eigen::MatrixXd::Identity(s, s);
  Eigen::MatrixXd hmat(h * s, s);
  for (int i = 0; i < h; ++i) hmat.middleRows(i * s, s) = block;

  const CMatrix w = kron(ct.u, ct.v);
  const CMatrix hht = (hmat * hmat.transpose()).cast<Complex>();
  const CMatrix d = w.adjoint() * hht * w;

  HHtResult res;
  res.diagonal = d.diagonal().real();
  CMatrix off = d;
  off.diagonal().setZero();
  res.offdiag_residual = max_abs(off);
  res.formula_residual = 0.0;
  for (int i = 0; i < h; ++i) {
    for (std::int64_t x = 0; x < s; ++x) {
      double want = 0.0;
      if (i == 0) want = x == 0 ? static_cast<double>(h) * (s - 1) * (s - 1) : static_cast<double>(h);
      res.formula_residual =
          std::max(res.formula_residual, std::abs(res.diagonal(i * s + x) - want));
      res.formula_residual =
          std::max(res.formula_residual, std::abs(d.diagonal()(i * s + x).imag()));
    }
  }
  if (res.offdiag_residual > 1e-9 || res.formula_residual > 1e-9) {
    throw VerificationError("not_diagonal", "conjugated HH' strays from its diagonal form");
  }
  return res;
}

Spectrum appendix_spectrum_d1(const FiniteField& field, int h) {
  const std::int64_t s = field.order();
  if (h < 2 || (s - 1) % h != 0 || (s - 1) / h < 2) {
    throw_param("bad_parameters", "invalid d1 parameters for the character-sum route");
  }
  const std::int64_t t = (s - 1) / h;
  const double r = static_cast<double>(t);

  const Cyclotomy cy(field, h);
  const CharacterTable ct = build_character_table(cy);
  const CyclotomicMatrixSet lset = cyclotomic_matrices(cy);
  const DiagonalizationResult lres = diagonalize_L(ct, lset);
  const HHtResult hres = spectrum_HHt(ct);

  // Assemble per-position eigenvalues of
  //   C = r K_v - (1/s) L L' - 1/(s(s-h)) (HH' - ((s-1)^2/s) J) + (h r^2/s^2) J
  // in the common eigenbasis kron(U, V); J contributes hs only at (0,0).
  const double v_count = static_cast<double>(h) * static_cast<double>(s);
  std::vector<double> values;
  values.reserve(h * s);
  for (int i = 0; i < h; ++i) {
    for (std::int64_t x = 0; x < s; ++x) {
      const Eigen::Index idx = i * s + x;
      const bool top = i == 0 && x == 0;
      double val = r * (top ? 0.0 : 1.0);
      val -= std::norm(lres.diagonal(idx)) / static_cast<double>(s);
      double j_term = top ? hres.diagonal(idx) - (static_cast<double>((s - 1) * (s - 1)) / s) * v_count
                          : hres.diagonal(idx);
      val -= j_term / static_cast<double>(s * (s - h));
      if (top) val += (static_cast<double>(h) * r * r / static_cast<double>(s * s)) * v_count;
      values.push_back(val);
    }
  }

  // Snap to rationals over s(s-h); the candidate values all live there.
  const std::int64_t denom = s * (s - h);
  std::vector<std::pair<Rational, Eigen::Index>> lines;
  for (double val : values) {
    const auto scaled = static_cast<std::int64_t>(std::llround(val * static_cast<double>(denom)));
    const Rational snapped(scaled, denom);
    if (std::abs(snapped.to_double() - val) > 1e-9) {
      throw VerificationError("cross_check_failed",
                              "character-sum eigenvalue " + std::to_string(val) +
                                  " does not snap to a rational over " + std::to_string(denom));
    }
    lines.push_back({snapped, 1});
  }
  return Spectrum::exact_lines(std::move(lines));
}

}  // namespace mwd
