#include "zakbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zakbench/error.hpp"

namespace zakbench {

namespace {

void require_positive_weight(double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature weight must be positive");
  }
}

}  // namespace

FiniteFamily::FiniteFamily(Index ambient_dim, double weight)
    : ambient_dim_(ambient_dim), weight_(weight) {
  if (ambient_dim <= 0) {
    throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");
  }
  require_positive_weight(weight);
}

FiniteFamily::FiniteFamily(std::vector<CVector> vectors, Index ambient_dim, double weight)
    : FiniteFamily(ambient_dim, weight) {
  vectors_.reserve(vectors.size());
  for (auto& v : vectors) push_back(std::move(v));
}

FiniteFamily FiniteFamily::from_columns(const CMatrix& columns, double weight) {
  FiniteFamily out(columns.rows(), weight);
  out.vectors_.reserve(static_cast<std::size_t>(columns.cols()));
  for (Index c = 0; c < columns.cols(); ++c) out.vectors_.emplace_back(columns.col(c));
  return out;
}

void FiniteFamily::push_back(CVector v) {
  if (v.size() != ambient_dim_) {
    throw Error(ErrorCode::DimMismatch, "family member has dim " + std::to_string(v.size()) +
                                            ", expected " + std::to_string(ambient_dim_));
  }
  vectors_.push_back(std::move(v));
}

CMatrix FiniteFamily::columns() const {
  CMatrix out(ambient_dim_, size());
  for (Index c = 0; c < size(); ++c) out.col(c) = (*this)[c];
  return out;
}

FiniteFamily FiniteFamily::slice(Index begin, Index end) const {
  if (begin < 0 || end < begin || end > size()) {
    throw Error(ErrorCode::InvalidArgument, "family slice out of range");
  }
  FiniteFamily out(ambient_dim_, weight_);
  for (Index i = begin; i < end; ++i) out.vectors_.push_back((*this)[i]);
  return out;
}

FiniteFamily FiniteFamily::transformed(const CMatrix& op) const {
  if (op.rows() != ambient_dim_ || op.cols() != ambient_dim_) {
    throw Error(ErrorCode::DimMismatch, "transform must be square in the ambient dimension");
  }
  FiniteFamily out(ambient_dim_, weight_);
  for (const auto& v : vectors_) out.vectors_.emplace_back(op * v);
  return out;
}

FiniteFamily FiniteFamily::concat(const FiniteFamily& tail) const {
  if (tail.ambient_dim_ != ambient_dim_) {
    throw Error(ErrorCode::DimMismatch, "cannot concatenate families of different dimension");
  }
  FiniteFamily out = *this;
  for (const auto& v : tail.vectors_) out.vectors_.push_back(v);
  return out;
}

Complex inner_product(const CVector& u, const CVector& v, double weight) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimMismatch, "inner product of vectors with dims " +
                                            std::to_string(u.size()) + " and " +
                                            std::to_string(v.size()));
  }
  // Eigen's dot conjugates its first argument.
  return weight * v.dot(u);
}

double norm(const CVector& v, double weight) { return std::sqrt(weight) * v.norm(); }

CMatrix gram_matrix(const FiniteFamily& family) {
  if (family.empty()) throw Error(ErrorCode::EmptyFamily, "Gram matrix of an empty family");
  const CMatrix f = family.columns();
  // G(j,k) = w * sum_i f(i,j) conj(f(i,k)) = w * (F^T conj(F))(j,k)
  CMatrix g = family.weight() * (f.transpose() * f.conjugate());
  return g;
}

FrameBounds frame_bounds_estimate(const FiniteFamily& family) {
  const CMatrix g = gram_matrix(family);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::SpectrumFail, "Hermitian eigensolver did not converge");
  }
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

Eigen::VectorXd singular_values(const CMatrix& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues();
}

Index matrix_rank(const CMatrix& a, double tol) {
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol * sv(0);
  return static_cast<Index>((sv.array() > cutoff).count());
}

Index rank_and_span(const FiniteFamily& family, double tol) {
  if (family.empty()) throw Error(ErrorCode::EmptyFamily, "rank of an empty family");
  return matrix_rank(family.columns(), tol);
}

CVector least_squares(const CMatrix& a, const CVector& b) {
  if (a.rows() != b.size()) {
    throw Error(ErrorCode::DimMismatch, "least squares: A has " + std::to_string(a.rows()) +
                                            " rows, b has " + std::to_string(b.size()));
  }
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
  cod.setThreshold(kDefaultRankTol);
  return cod.solve(b);
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermitian_defect(const CMatrix& a) {
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  return max_abs(a - a.adjoint()) / scale;
}

CVector random_cvector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

CMatrix random_cmatrix(Index rows, Index cols, std::mt19937_64& rng) {
  CMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) m.col(c) = random_cvector(rows, rng);
  return m;
}

CMatrix random_unitary(Index dim, std::mt19937_64& rng) {
  const CMatrix a = random_cmatrix(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  return q;
}

}  // namespace zakbench
