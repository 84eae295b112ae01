#include "doctest.h"

#include <cmath>
#include <random>

#include "zakbench/error.hpp"
#include "zakbench/expsys.hpp"
#include "zakbench/reproducing.hpp"
#include "zakbench/zak.hpp"

using namespace zakbench;

namespace {
CMatrix identity(Index n) { return CMatrix::Identity(n, n); }
CVector basis(Index dim, Index i) { return CMatrix::Identity(dim, dim).col(i); }
FiniteFamily standard_basis(Index dim) { return FiniteFamily::from_columns(identity(dim), 1.0); }
}  // namespace

TEST_CASE("inner products of simple vectors") {
  CHECK(inner_product(CVector::Ones(8), CVector::Ones(8), 1.0 / 8).real() == doctest::Approx(1.0));
  CVector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(std::abs(inner_product(a, b, 0.5)) == 0.0);
  CHECK(std::abs(inner_product(exponential_samples(1, 64), exponential_samples(2, 64), 1.0 / 64)) < 1e-12);
  const CVector u = exponential_samples(3, 16) + exponential_samples(-1, 16) * Complex(0, 2);
  const CVector v = exponential_samples(-1, 16);
  CHECK(std::abs(inner_product(u, v, 1.0 / 16) - std::conj(inner_product(v, u, 1.0 / 16))) < 1e-14);
}

TEST_CASE("Gram matrices of orthonormal families") {
  std::mt19937_64 rng(1);
  CHECK(max_abs(gram_matrix(FiniteFamily::from_columns(random_unitary(3, rng), 1.0)) - identity(3)) < 1e-14);
  FiniteFamily e(64, 1.0 / 64);
  for (int n = -2; n <= 2; ++n) e.push_back(exponential_samples(n, 64));
  CHECK(max_abs(gram_matrix(e) - identity(5)) < 1e-12);
  CHECK(frame_bounds_estimate(e).lower == doctest::Approx(1.0));
}

TEST_CASE("rank of simple families") {
  CHECK(rank_and_span(standard_basis(4)) == 4);
  const CVector v = basis(4, 2) + Complex(0, 1) * basis(4, 0);
  CHECK(rank_and_span(FiniteFamily({v, 2.0 * v, 3.0 * v}, 4, 1.0)) == 1);
}

TEST_CASE("least squares by hand") {
  const CVector b = CVector::Random(3);
  CHECK((least_squares(identity(3), b) - b).norm() < 1e-15);
  CMatrix a(2, 1);
  a << 1, 1;
  CVector rhs(2);
  rhs << 1, 3;
  CHECK(std::abs(least_squares(a, rhs)(0) - 2.0) < 1e-14);
  std::mt19937_64 rng(2);
  const CMatrix psi = random_cmatrix(5, 2, rng);
  const CVector x = least_squares(psi, psi.col(0) + 2.0 * psi.col(1));
  CHECK(std::abs(x(0) - 1.0) < 1e-10);
  CHECK(std::abs(x(1) - 2.0) < 1e-10);
}

TEST_CASE("weighted exponentials and dual coefficients") {
  const ExpSystem one = ExpSystem::from_function([](double) { return Complex(1, 0); }, 16, 3, 0, 0.0);
  CHECK((weighted_exp(one, 0) - CVector::Ones(16)).norm() == 0.0);
  const ExpSystem lin = ExpSystem::from_function([](double t) { return Complex(t, 0); }, 16, 3, 0, 0.0);
  const CVector s = weighted_exp(lin, 0);
  for (Index i = 0; i < 16; ++i) CHECK(s(i).real() == doctest::Approx((i + 0.5) / 16));
  for (int n : lin.active_indices()) CHECK(std::abs(dual_coefficient(lin, n) + 1.0) < 1e-15);
  const ExpSystem half = ExpSystem::from_function([](double t) { return Complex(t, 0); }, 16, 3, 1, 0.5);
  CHECK(std::abs(dual_coefficient(half, 2) - 1.0) < 1e-15);
}

TEST_CASE("dual of the unit weight is a difference of exponentials") {
  const ExpSystem one = ExpSystem::from_function([](double) { return Complex(1, 0); }, 32, 4, 2, 0.0);
  for (int n : one.active_indices()) {
    const CVector expect = exponential_samples(n, 32) - exponential_samples(2, 32);
    CHECK((biorthogonal_dual(one, n) - expect).norm() < 1e-13);
  }
}

TEST_CASE("biorthogonality for the linear weight at N = 64, W = 8") {
  for (Index n : {64, 256}) {
    const ExpSystem sys = ExpSystem::from_function([](double t) { return Complex(t, 0); }, n, 8, 0, 0.0);
    CHECK(biorthogonality_deviation(sys) < 1e-3);
  }
}

TEST_CASE("completeness defect of unit and linear weights") {
  const ExpSystem one =
      ExpSystem::from_function([](double) { return Complex(1, 0); }, 64, 4, std::nullopt, 0.0);
  CHECK(completeness_defect(one) == doctest::Approx(1.0).epsilon(1e-12));
  const ExpSystem lin = ExpSystem::from_function([](double t) { return Complex(t, 0); }, 64, 8, 0, 0.0);
  CHECK(completeness_defect(lin) > 0.0);
}

TEST_CASE("CLI-sized sweep: no norm convergence at N = 128") {
  const ExpSystem sys = ExpSystem::from_function([](double t) { return Complex(t, 0); }, 128, 16, 0, 0.0);
  CHECK(schauder_failure_sweep(sys, 16).no_norm_convergence);
}

TEST_CASE("Zak transform of the unit box is one") {
  const GridFunction z = zak_transform([](double t) { return Complex(t >= 0 && t < 1 ? 1.0 : 0.0, 0); }, 16, 4);
  CHECK((z.samples() - CVector::Ones(256)).norm() == 0.0);
}

TEST_CASE("cone function") {
  CHECK(cone({0.3, 0.6}, 0.3, 0.6) == 0.0);
  CHECK(cone({0.0, 0.0}, 0.6, 0.8) == doctest::Approx(1.0));
}

TEST_CASE("S operator of orthonormal and scaled families") {
  std::mt19937_64 rng(3);
  const FiniteFamily phi = FiniteFamily::from_columns(random_unitary(6, rng), 1.0);
  CHECK(max_abs(s_operator(phi, phi) - identity(6)) < 1e-14);
  const FiniteFamily psi = FiniteFamily::from_columns(2.0 * phi.columns(), 1.0);
  CHECK(max_abs(s_operator(psi, phi) - 2.0 * identity(6)) < 1e-14);
  CHECK(reproducing_identity_check(phi, phi, 8, 0).identity_deviation < 1e-12);
}

TEST_CASE("appending zero vectors leaves the identity check unchanged") {
  std::mt19937_64 rng(4);
  const FiniteFamily phi = FiniteFamily::from_columns(random_cmatrix(5, 7, rng), 1.0);
  const FiniteFamily psi = canonical_dual_frame(phi);
  FiniteFamily phi0 = phi, psi0 = psi;
  phi0.push_back(CVector::Zero(5));
  psi0.push_back(CVector::Zero(5));
  const double a = reproducing_identity_check(psi, phi, 8, 1).identity_deviation;
  const double b = reproducing_identity_check(psi0, phi0, 8, 1).identity_deviation;
  CHECK(a == b);
}

TEST_CASE("expsys pair on the discretized band") {
  const ExpSystem sys = ExpSystem::from_function([](double t) { return Complex(t, 0); }, 64, 8, 0, 0.0);
  const FiniteFamily phi = active_family(sys);
  const ReproducingPairCheck c = reproducing_identity_check(dual_family(sys), phi, 8, 0, phi);
  CHECK(c.identity_deviation < 1e-3);
}

TEST_CASE("partner test: computed dual, perturbed dual and self dual") {
  std::mt19937_64 rng(5);
  const double tol = 1e-9;
  const FiniteFamily phi = FiniteFamily::from_columns(random_cmatrix(8, 8, rng), 1.0);
  const FiniteFamily dual = biorthogonal_family(phi);
  CHECK(partner_is_biorthogonal(phi, dual, tol));
  CMatrix bumped = dual.columns();
  bumped(3, 2) += 10 * tol;
  CHECK_FALSE(partner_is_biorthogonal(phi, FiniteFamily::from_columns(bumped, 1.0), tol));
  const FiniteFamily on = FiniteFamily::from_columns(random_unitary(8, rng), 1.0);
  CHECK(partner_is_biorthogonal(on, on, tol));
  CHECK_THROWS_AS(partner_is_biorthogonal(FiniteFamily::from_columns(CMatrix::Ones(8, 8), 1.0), on, tol), Error);
}

TEST_CASE("excess one: sum of the basis prepended to the basis") {
  FiniteFamily phi(8, 1.0);
  phi.push_back(CVector::Ones(8));
  for (Index i = 0; i < 8; ++i) phi.push_back(basis(8, i));
  const ExcessOneReport r = excess_one_identities(phi, canonical_dual_frame(phi), 1e-11, 0);
  CHECK(r.eq_partner < 1e-10);
  CHECK(r.eq_head < 1e-10);
  CHECK(r.final_chain < 1e-10);
}

TEST_CASE("reduction with psi = {u, v, u + v}") {
  std::mt19937_64 rng(6);
  const CVector u = random_cvector(4, rng), v = random_cvector(4, rng);
  const FiniteFamily psi({u, v, u + v}, 4, 1.0);
  const FiniteFamily phi = FiniteFamily::from_columns(random_cmatrix(4, 3, rng), 1.0);
  const Reduction red = reduce_dependent_pair(phi, psi);
  CHECK(red.psi.size() == 2);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      CHECK(std::abs(pair_form(psi, phi, basis(4, i), basis(4, j)) -
                     pair_form(red.psi, red.phi, basis(4, i), basis(4, j))) < 1e-12);
}

TEST_CASE("reduction with psi = {u, 2u}") {
  std::mt19937_64 rng(7);
  const CVector u = random_cvector(3, rng);
  const FiniteFamily psi({u, 2.0 * u}, 3, 1.0);
  const FiniteFamily phi = FiniteFamily::from_columns(random_cmatrix(3, 2, rng), 1.0);
  const Reduction red = reduce_dependent_pair(phi, psi);
  REQUIRE(red.phi.size() == 1);
  CHECK((red.phi[0] - (phi[0] + 2.0 * phi[1])).norm() < 1e-14);
  CHECK((red.psi[0] - u).norm() == 0.0);
}

TEST_CASE("dependent phi mirrors dependent psi through the adjoint") {
  std::mt19937_64 rng(8);
  CMatrix dep = random_cmatrix(5, 3, rng);
  dep.col(2) = dep.col(0) - Complex(0, 3) * dep.col(1);
  const FiniteFamily a = FiniteFamily::from_columns(dep, 1.0);
  const FiniteFamily b = FiniteFamily::from_columns(random_cmatrix(5, 3, rng), 1.0);
  const Reduction on_psi = reduce_dependent_pair(b, a);  // psi dependent
  const Reduction on_phi = reduce_dependent_pair(a, b);  // phi dependent
  for (int t = 0; t < 4; ++t) {
    const CVector f = random_cvector(5, rng), g = random_cvector(5, rng);
    const Complex x = pair_form(on_psi.psi, on_psi.phi, f, g);
    const Complex y = pair_form(on_phi.psi, on_phi.phi, g, f);
    CHECK(std::abs(x - std::conj(y)) < 1e-12);
  }
}

TEST_CASE("span vectors of standard bases") {
  const FiniteFamily head = standard_basis(6).slice(0, 3);
  const FiniteFamily v = span_vectors(head, standard_basis(6));
  REQUIRE(v.size() == 6);
  for (Index m = 0; m < 6; ++m) {
    const CVector expect = m < 3 ? CVector(basis(3, m)) : CVector(CVector::Zero(3));
    CHECK((v[m] - expect).norm() == 0.0);
  }
  CHECK(rank_and_span(v) == 3);
  const CVector u = basis(6, 1);
  try {
    span_vectors(FiniteFamily({u, u}, 6, 1.0), standard_basis(6));
    FAIL("expected HeadDependent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HeadDependent);
  }
}

TEST_CASE("excess n: two-element head over the standard basis") {
  FiniteFamily phi(8, 1.0);
  phi.push_back(basis(8, 0) + basis(8, 1));
  phi.push_back(basis(8, 2) - basis(8, 3));
  for (Index i = 0; i < 8; ++i) phi.push_back(basis(8, i));
  const ExcessNReport r = excess_n_identities(phi, canonical_dual_frame(phi), 2, 1e-11, 0);
  CHECK(r.eq_partner < 1e-10);
  CHECK(r.eq_head < 1e-10);
  CHECK(r.vector_identity < 1e-10);
  CHECK(r.final_chain < 1e-10);
  CHECK(r.reduction_chain.empty());
}

TEST_CASE("excess n: a zero head element is reduced first") {
  FiniteFamily phi(8, 1.0);
  phi.push_back(CVector::Zero(8));
  phi.push_back(CVector::Ones(8));
  for (Index i = 0; i < 8; ++i) phi.push_back(basis(8, i));
  const ExcessNReport r = excess_n_identities(phi, canonical_dual_frame(phi), 2, 1e-11, 0);
  CHECK_FALSE(r.reduction_chain.empty());
  CHECK(r.reduced_n == 1);
  CHECK(r.passed());
}
