#pragma once

// Finite realizations of reproducing pairs (Psi, Phi): the operator
// S_{Psi,Phi} f = sum_i <f, psi_i> phi_i, the partner/biorthogonal identity
// for exact families, and the identity chains for families that are
// overcomplete by one element or by n elements.
//
// "Exact in the ambient space" is proxied by: length equals ambient_dim and
// the Gram matrix has smallest eigenvalue above kExactnessMargin.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zakbench/linalg.hpp"

namespace zakbench {

inline constexpr double kExactnessMargin = 1e-8;
inline constexpr int kDefaultIdentityTrials = 16;

// Sum_i phi_i psi_i^H * weight, as a matrix on coordinate vectors.
CMatrix s_operator(const FiniteFamily& psi, const FiniteFamily& phi);

struct ReproducingPairCheck {
  CMatrix s_matrix;
  double identity_deviation = 0.0;    // max |(S - I) B|, B a basis of the test space
  double invertibility_margin = 0.0;  // smallest singular value of S on the test space
  double weak_identity_gap = 0.0;     // max |<f,g> - sum <f,psi_i><phi_i,g>| / (|f| |g|)
  int trials = 0;
  std::uint64_t seed = 0;
};

// Evaluates both sides of the weak reconstruction identity on `trials`
// random pairs. With `test_space`, f ranges over its span and S - I is
// measured there; otherwise over the whole ambient space.
ReproducingPairCheck reproducing_identity_check(const FiniteFamily& psi, const FiniteFamily& phi,
                                                int trials, std::uint64_t seed,
                                                const std::optional<FiniteFamily>& test_space = {});

// Unique biorthogonal family inside span(phi), via the inverse Gram matrix.
// Throws NotMinimal if the Gram matrix has an eigenvalue <= margin.
FiniteFamily biorthogonal_family(const FiniteFamily& phi, double margin = kExactnessMargin);

// psi_i = S_F^+ phi_i with S_F = sum phi_i phi_i^H (pseudoinverse on the span).
FiniteFamily canonical_dual_frame(const FiniteFamily& phi);

// (Psi, S^{-1} Phi): normalizes a pair with invertible S to S = I.
FiniteFamily normalize_partner(const FiniteFamily& psi, const FiniteFamily& phi);

// True iff S_{Psi,Phi} = I within tol and every psi_j is within tol of the
// biorthogonal family of phi_exact.
bool partner_is_biorthogonal(const FiniteFamily& phi_exact, const FiniteFamily& psi, double tol);

struct PrefixResidual {
  Index terms = 0;
  double residual = 0.0;
};

struct ExcessOneReport {
  Index ambient_dim = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool trivial_branch = false;  // psi_0 == 0
  double tail_margin = 0.0;     // smallest Gram eigenvalue of the tail
  double pair_deviation = 0.0;  // max |S - I|
  double eq_partner = 0.0;      // max_j |dual_j - <dual_j, phi_0> psi_0 - psi_j|
  double eq_head = 0.0;         // |phi_0 - sum_k <phi_0, dual_k> phi_k|
  double final_chain = 0.0;     // max relative gap of <g,h> = sum_{k>=1} <g,dual_k><phi_k,h>
  std::vector<std::string> notes;
  bool passed() const { return eq_partner <= 10 * tol && eq_head <= 10 * tol && final_chain <= 10 * tol; }
};

ExcessOneReport excess_one_identities(const FiniteFamily& phi, const FiniteFamily& psi, double tol,
                                      std::uint64_t seed = 0, int trials = kDefaultIdentityTrials);

enum class ReducedSide { Psi, Phi };

struct Reduction {
  FiniteFamily phi;
  FiniteFamily psi;
  ReducedSide side = ReducedSide::Psi;
  // Member order of the input heads after moving the dependent element last;
  // permutation[i] is the input position of reordered element i.
  std::vector<Index> permutation;
  std::vector<Complex> coefficients;  // dependent_last = sum_j c_j other_j
};

// One reduction step on dependent heads (length n >= 2) to length n - 1
// with the same bilinear form sum <f, psi_k><phi_k, g>.
Reduction reduce_dependent_pair(const FiniteFamily& phi_head, const FiniteFamily& psi_head,
                                double tol = kDefaultRankTol);

// Bilinear form sum_k <f, psi_k><phi_k, g>.
Complex pair_form(const FiniteFamily& psi, const FiniteFamily& phi, const CVector& f,
                  const CVector& g);

// v_m = (<psi_0, phi_m>, ..., <psi_{n-1}, phi_m>) in C^n (weight 1).
FiniteFamily span_vectors(const FiniteFamily& psi_head, const FiniteFamily& phi_tail,
                          double tol = kDefaultRankTol);

struct ExcessNReport {
  Index ambient_dim = 0;
  Index n = 0;          // requested head length
  Index reduced_n = 0;  // head length after reductions
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<std::string> reduction_chain;
  double tail_margin = 0.0;
  double pair_deviation = 0.0;
  Index span_rank = 0;
  double eq_partner = 0.0;       // max_j |dual_j - psi_j - sum_k <dual_j, phi_k> psi_k|
  double eq_head = 0.0;          // max_k |phi_k - sum_j <phi_k, dual_j> phi_j|
  double eq_head_weak = 0.0;     // same identity tested against random g
  double vector_identity = 0.0;  // max over trials of |u - sum_k w_k| / |u|
  std::vector<PrefixResidual> vector_trajectory;  // |u - sum_{k<=K} w_k| for the first trial
  double final_chain = 0.0;
  std::vector<std::string> notes;
  bool passed() const {
    return eq_partner <= 10 * tol && eq_head <= 10 * tol && eq_head_weak <= 10 * tol &&
           vector_identity <= 10 * tol && final_chain <= 10 * tol;
  }
};

ExcessNReport excess_n_identities(const FiniteFamily& phi, const FiniteFamily& psi, Index n,
                                  double tol, std::uint64_t seed = 0,
                                  int trials = kDefaultIdentityTrials);

}  // namespace zakbench
