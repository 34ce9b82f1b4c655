#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "mwd/constructions.hpp"
#include "mwd/exactla.hpp"
#include "mwd/gf.hpp"

namespace mwd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Character data for GF(s) with h cyclotomic classes: eta and omega are
// primitive h-th and p-th roots of unity, U(i,j) = eta^{ij}/sqrt(h),
// V(x,y) = omega^{trace(xy)}/sqrt(s), and g_i sums omega^{trace(x)} over the
// i-th class. U and V are unitary to 1e-12 and the g_i sum to -1.
struct CharacterTable {
  std::int64_t s = 0;
  int h = 0;
  std::int64_t p = 0;
  Complex eta;
  Complex omega;
  CMatrix u;
  CMatrix v;
  CVector g;
  std::vector<int> coset_of;  // class index per nonzero element encoding
};

CharacterTable build_character_table(const Cyclotomy& cy);

struct DiagonalizationResult {
  CVector diagonal;        // entries indexed (i, x) -> i*s + x
  double offdiag_residual; // max |off-diagonal| after conjugation
  double formula_residual; // max |diagonal - predicted|
};

// Conjugates the hs x hs block matrix L by kron(U, V); the result must be
// diagonal with entries s-1 at (0,0), 0 at (i!=0, 0), and
// eta^{ik} sum_j g_j eta^{-ij} at (i, x in C_k). Residuals above 1e-9 raise
// not_diagonal.
DiagonalizationResult diagonalize_L(const CharacterTable& ct, const CyclotomicMatrixSet& lset);

// |sum_j g_j eta^{-ij}|^2 per class index i; the classical evaluation gives
// 1 at i = 0 and s elsewhere.
std::vector<double> gauss_sum_moduli(const CharacterTable& ct);

struct HHtResult {
  Eigen::VectorXd diagonal;
  double offdiag_residual;
  double formula_residual;  // against h(s-1)^2 / h / 0 pattern
};

// Conjugates H H' with H = 1_h kron (J_s - I_s) by kron(U, V).
HHtResult spectrum_HHt(const CharacterTable& ct);

// Independent derivation of the d1 spectrum: assembles eigenvalues from the
// diagonalized L and H H' terms of the closed-form C expression, snaps them
// to rationals over denominator s(s-h), and returns the exact spectrum. Any
// snap farther than 1e-9 raises cross_check_failed. Callers compare the
// result against the rank-certified spectrum of the definitional C-matrix.
Spectrum appendix_spectrum_d1(const FiniteField& field, int h);

}  // namespace mwd
