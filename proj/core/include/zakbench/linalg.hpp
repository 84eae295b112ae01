#pragma once

// Dense complex linear algebra over a discretized L2 space.
//
// Vectors are coordinate samples; every pairing carries a quadrature weight
// (the cell measure), so <u, v> = weight * sum_i u_i * conj(v_i).

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace zakbench {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;

// Ordered list of vectors sharing one ambient dimension and one quadrature
// weight. Order is significant: two permutations are different families.
class FiniteFamily {
 public:
  FiniteFamily(Index ambient_dim, double weight);
  FiniteFamily(std::vector<CVector> vectors, Index ambient_dim, double weight);

  // Columns of `columns` become the family members, left to right.
  static FiniteFamily from_columns(const CMatrix& columns, double weight);

  void push_back(CVector v);

  Index size() const noexcept { return static_cast<Index>(vectors_.size()); }
  bool empty() const noexcept { return vectors_.empty(); }
  Index ambient_dim() const noexcept { return ambient_dim_; }
  double weight() const noexcept { return weight_; }

  const CVector& operator[](Index i) const { return vectors_[static_cast<std::size_t>(i)]; }
  const std::vector<CVector>& vectors() const noexcept { return vectors_; }

  // ambient_dim x size matrix with the members as columns.
  CMatrix columns() const;

  // Members [begin, end).
  FiniteFamily slice(Index begin, Index end) const;

  // Applies `op` to every member (op must be ambient_dim x ambient_dim).
  FiniteFamily transformed(const CMatrix& op) const;

  FiniteFamily concat(const FiniteFamily& tail) const;

 private:
  std::vector<CVector> vectors_;
  Index ambient_dim_;
  double weight_;
};

Complex inner_product(const CVector& u, const CVector& v, double weight);
double norm(const CVector& v, double weight);

// G(j, k) = <family[j], family[k]>.
CMatrix gram_matrix(const FiniteFamily& family);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Extreme eigenvalues of the Gram matrix.
FrameBounds frame_bounds_estimate(const FiniteFamily& family);

// Number of singular values above tol * (largest singular value).
Index rank_and_span(const FiniteFamily& family, double tol = kDefaultRankTol);
Index matrix_rank(const CMatrix& a, double tol = kDefaultRankTol);

Eigen::VectorXd singular_values(const CMatrix& a);

// Minimum-norm minimizer of ||A x - b||.
CVector least_squares(const CMatrix& a, const CVector& b);

double max_abs(const CMatrix& a);

// Max |G - G^H| relative to max |G|; zero for an exactly Hermitian matrix.
double hermitian_defect(const CMatrix& a);

// Standard complex Gaussian entries (independent N(0, 1/2) real and
// imaginary parts). Deterministic for a given engine state.
CVector random_cvector(Index dim, std::mt19937_64& rng);
CMatrix random_cmatrix(Index rows, Index cols, std::mt19937_64& rng);

// Haar-ish unitary from the QR factor of a Gaussian matrix.
CMatrix random_unitary(Index dim, std::mt19937_64& rng);

}  // namespace zakbench
