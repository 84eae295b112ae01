#include "doctest.h"

#include <random>

#include "../support/oracles.hpp"
#include "zakbench/error.hpp"
#include "zakbench/linalg.hpp"

using namespace zakbench;

TEST_CASE("inner product carries the weight and conjugates the second slot") {
  CVector u(2), v(2);
  u << Complex(1, 2), Complex(0, 1);
  v << Complex(3, 0), Complex(1, -1);
  const Complex expect = 0.5 * (Complex(1, 2) * 3.0 + Complex(0, 1) * std::conj(Complex(1, -1)));
  CHECK(std::abs(inner_product(u, v, 0.5) - expect) < 1e-15);
  CHECK(norm(u, 0.5) == doctest::Approx(std::sqrt(0.5 * 6.0)));
  CHECK_THROWS_AS(inner_product(u, CVector::Zero(3), 1.0), Error);
}

TEST_CASE("gram matrix matches a hand computation") {
  std::vector<oracle::cd> a{{1, 0}, {0, 1}, {2, -1}}, b{{0, 1}, {1, 1}, {-1, 0}};
  CVector va(3), vb(3);
  for (int i = 0; i < 3; ++i) {
    va(i) = a[i];
    vb(i) = b[i];
  }
  const FiniteFamily f({va, vb}, 3, 0.25);
  const CMatrix g = gram_matrix(f);
  const auto ref = oracle::gram2(a, b, 0.25);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(g(i, j) - ref[i][j]) < 1e-15);
  CHECK(hermitian_defect(g) < 1e-15);
}

TEST_CASE("family construction validates dimensions") {
  CHECK_THROWS_AS(FiniteFamily(0, 1.0), Error);
  CHECK_THROWS_AS(FiniteFamily(3, 0.0), Error);
  FiniteFamily f(3, 1.0);
  try {
    f.push_back(CVector::Zero(2));
    FAIL("expected DimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimMismatch);
    CHECK(std::string(e.name()) == "DimMismatch");
  }
  CHECK_THROWS_AS(gram_matrix(FiniteFamily(3, 1.0)), Error);
}

TEST_CASE("frame bounds of an orthonormal basis and of a doubled basis") {
  std::mt19937_64 rng(3);
  const CMatrix u = random_unitary(6, rng);
  const FrameBounds b = frame_bounds_estimate(FiniteFamily::from_columns(u, 1.0));
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-12));
  CMatrix twice(6, 12);
  twice << u, u;
  const FrameBounds d = frame_bounds_estimate(FiniteFamily::from_columns(twice, 1.0));
  CHECK(std::abs(d.lower) < 1e-10);
  CHECK(d.upper == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Gram spectrum of a duplicated vector and of exponentials plus a repeat") {
  CVector v = CVector::Zero(4);
  v(1) = Complex(0, 1);
  const FrameBounds b = frame_bounds_estimate(FiniteFamily({v, v}, 4, 1.0));
  CHECK(std::abs(b.lower) < 1e-14);
  CHECK(b.upper == doctest::Approx(2.0));
  CHECK(max_abs(gram_matrix(FiniteFamily({v, v}, 4, 1.0)) - CMatrix::Ones(2, 2)) < 1e-15);

  const Index n = 128;
  FiniteFamily f(n, 1.0 / n);
  for (Index i = -8; i <= 8; ++i) {
    CVector e(n);
    for (Index t = 0; t < n; ++t) e(t) = std::polar(1.0, 2 * M_PI * double(i) * (t + 0.5) / double(n));
    f.push_back(e);
  }
  f.push_back(CVector::Ones(n));
  const FrameBounds c = frame_bounds_estimate(f);
  CHECK(std::abs(c.lower) < 1e-10);
  CHECK(c.lower >= -1e-10);
  CHECK(max_abs(gram_matrix(f.slice(6, 11)) - CMatrix::Identity(5, 5)) < 1e-12);
}

TEST_CASE("rank is invariant under unitary mixing") {
  std::mt19937_64 rng(17);
  CMatrix a = random_cmatrix(7, 5, rng);
  a.col(4) = a.col(0) + a.col(2);
  for (int t = 0; t < 100; ++t) {
    const CMatrix u = random_unitary(7, rng);
    CHECK(rank_and_span(FiniteFamily::from_columns(u * a, 1.0)) == 4);
  }
}

TEST_CASE("least squares residual is orthogonal to the range") {
  std::mt19937_64 rng(23);
  const CMatrix a = random_cmatrix(9, 4, rng);
  const CVector b = random_cvector(9, rng);
  const CVector x = least_squares(a, b);
  CHECK((a.adjoint() * (a * x - b)).norm() <= 1e-9 * (a.adjoint() * b).norm() + 1e-12);
}

TEST_CASE("rank and least squares") {
  std::mt19937_64 rng(5);
  CMatrix a = random_cmatrix(6, 4, rng);
  a.col(3) = a.col(0) - Complex(0, 2) * a.col(1);
  CHECK(matrix_rank(a) == 3);
  CHECK(rank_and_span(FiniteFamily::from_columns(a, 0.1)) == 3);
  const CVector b = a.col(3);
  const CVector x = least_squares(a.leftCols(3), b);
  CHECK(std::abs(x(0) - 1.0) < 1e-12);
  CHECK(std::abs(x(1) + Complex(0, 2)) < 1e-12);
  CHECK(std::abs(x(2)) < 1e-12);
  const Eigen::VectorXd s = singular_values(a);
  CHECK(s(3) < 1e-12);
}

TEST_CASE("random helpers are deterministic per seed") {
  std::mt19937_64 r1(11), r2(11);
  CHECK(max_abs(random_cmatrix(4, 3, r1) - random_cmatrix(4, 3, r2)) == 0.0);
  std::mt19937_64 r3(2);
  const CMatrix q = random_unitary(5, r3);
  CHECK(max_abs(q.adjoint() * q - CMatrix::Identity(5, 5)) < 1e-13);
}
