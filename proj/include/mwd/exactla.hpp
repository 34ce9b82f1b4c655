#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "mwd/design.hpp"
#include "mwd/rational.hpp"

namespace mwd {

using RMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

RMatrix to_rational(const IntMatrix& m);
RVector to_rational(const IntVector& v);
Eigen::MatrixXd to_double(const RMatrix& m);

// I_n - (1/n) J_n, the centering projector.
RMatrix k_matrix(Eigen::Index n);

// Eigenvalues with multiplicities, ascending. Exact spectra carry rational
// values whose multiplicities can be certified by rank computations; numeric
// spectra carry clustered floating values tagged with the tolerance used.
struct Spectrum {
  enum class Mode { Exact, Numeric };
  Mode mode = Mode::Exact;
  std::vector<std::pair<Rational, Eigen::Index>> exact;
  std::vector<std::pair<double, Eigen::Index>> numeric;
  double tol = 0.0;

  Eigen::Index dimension() const;
  static Spectrum exact_lines(std::vector<std::pair<Rational, Eigen::Index>> lines);
};

// Some G with M G M = M (rank-normal-form construction, any rectangular M).
RMatrix g_inverse(const RMatrix& m);

// Orthogonal projector onto the column space, M (M'M)^- M'. Exactly
// symmetric and idempotent regardless of which g-inverse is picked.
RMatrix projector(const RMatrix& m);

// Treatment information matrix straight from the definition:
// C = X_V' (I - P_{V-bar}) X_V with V-bar = {G} + all block factors.
// This is the ground truth any closed form is validated against.
RMatrix c_matrix_definitional(const Design& d);

// Same value as c_matrix_definitional, with the nuisance Gram g-inverse
// computed once per setting. Streams of designs on one setting (competitor
// walks) go through this.
class SettingSolver {
 public:
  explicit SettingSolver(const Setting& st);

  RMatrix c_matrix(const Design& d) const;
  bool is_connected(const Design& d) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<Eigen::Index> offsets_;  // column offset per block factor
  Eigen::Index cols_ = 0;
  RMatrix gram_ginv_;
};

// Closed form for the three recognized setting types:
//   types 1/2:  C = C_0 - (1/s) sum_B C_B C_B' + (p/(su)) S S',  u = s + mp,
//               with p = -1 for type 1;
//   type 3:     C = C_0 - (1/s) sum_B C_B C_B' + (1/(su)) S~ S~',
//               u = s + m - 1, S~ summed over the s-level factors only.
// Here C_0 = R - (1/n) r r' and C_B = N_B - (1/s_B) r 1'.
RMatrix c_matrix_closedform(const Design& d);

// Pivot columns of the reduced row-echelon form; the matrix columns at these
// positions are a basis of the column space.
std::vector<Eigen::Index> pivot_columns(const RMatrix& m);

// Fraction-free (Bareiss) elimination on the denominator-cleared matrix.
// Intermediate entries stay integral and are bounded by the Hadamard bound
// (n/2 log2 n + n log2 max|a| bits), which is what keeps coefficient growth
// polynomial.
Eigen::Index exact_rank(const RMatrix& m);
std::vector<RVector> kernel_basis(const RMatrix& m);

// True iff for every claimed (value, multiplicity) the rank of M - value*I
// is dim - multiplicity and the multiplicities fill the dimension. Sound and
// complete for rational candidate spectra of a symmetric matrix.
bool verify_spectrum(const RMatrix& m, const Spectrum& candidate);

Spectrum eigenvalues_numeric(const RMatrix& m, double tol = 1e-9);

// Variant that also returns the eigenvector matrix (columns ordered like the
// ascending eigenvalues before clustering) and enforces the per-pair
// residual |M x - lambda x| <= tol * max(1, |M|).
Spectrum eigenvalues_numeric(const RMatrix& m, double tol, Eigen::MatrixXd& eigenvectors);

// Exact test for A - B positive semidefinite via symmetric elimination with
// diagonal pivoting (a zero diagonal entry must own an all-zero row).
bool loewner_geq(const RMatrix& a, const RMatrix& b);
bool is_psd(RMatrix m);

// Exact characteristic polynomial coefficients, ascending degree
// (Faddeev-LeVerrier). Test oracle for the numeric eigensolver.
std::vector<Rational> characteristic_polynomial(const RMatrix& m);

// C_B = N_B - (1/s_B) r 1' for one block factor.
RMatrix c_b_matrix(const Design& d, int factor);

}  // namespace mwd
