#include "zakbench/reproducing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "zakbench/error.hpp"

namespace zakbench {

namespace {

// Independent deterministic streams per (seed, purpose).
std::mt19937_64 stream(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

constexpr std::uint32_t kChainStream = 1;
constexpr std::uint32_t kHeadStream = 2;
constexpr std::uint32_t kTrialStream = 3;

void require_same_shape(const FiniteFamily& a, const FiniteFamily& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::FamilyMismatch, "families have lengths " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  }
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::FamilyMismatch, "families live in different ambient dimensions");
  }
  if (a.weight() != b.weight()) {
    throw Error(ErrorCode::FamilyMismatch, "families carry different quadrature weights");
  }
}

// Euclidean-orthonormal basis (columns) of span(family).
CMatrix orthonormal_basis(const FiniteFamily& family) {
  const CMatrix cols = family.columns();
  Eigen::BDCSVD<CMatrix> svd(cols, Eigen::ComputeThinU);
  const Index r = matrix_rank(cols);
  return svd.matrixU().leftCols(r);
}

double min_gram_eigenvalue(const FiniteFamily& family) {
  return frame_bounds_estimate(family).lower;
}

// Exactness proxy for a tail: full length and well-conditioned Gram.
double require_exact_tail(const FiniteFamily& tail) {
  if (tail.size() != tail.ambient_dim()) {
    throw Error(ErrorCode::TailNotExact, "tail has " + std::to_string(tail.size()) +
                                             " members in dimension " +
                                             std::to_string(tail.ambient_dim()));
  }
  const double margin = min_gram_eigenvalue(tail);
  if (!(margin > kExactnessMargin)) {
    throw Error(ErrorCode::TailNotExact,
                "tail Gram margin " + std::to_string(margin) + " not above 1e-8");
  }
  return margin;
}

double require_reproducing(const FiniteFamily& psi, const FiniteFamily& phi, double tol) {
  const CMatrix s = s_operator(psi, phi);
  const double dev = max_abs(s - CMatrix::Identity(s.rows(), s.cols()));
  if (!(dev <= tol)) {
    throw Error(ErrorCode::NotReproducingPair,
                "max |S - I| = " + std::to_string(dev) + " exceeds tolerance");
  }
  return dev;
}

double relative_gap(Complex lhs, Complex rhs, double scale) {
  const double gap = std::abs(lhs - rhs);
  return scale > 0.0 ? gap / scale : gap;
}

// max relative gap of <f,g> = sum_k <f, dual_k><phi_k, g> over random pairs.
double biorthogonal_chain_gap(const FiniteFamily& dual, const FiniteFamily& tail,
                              std::uint64_t seed, int trials) {
  auto rng = stream(seed, kChainStream);
  const double w = tail.weight();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const CVector f = random_cvector(tail.ambient_dim(), rng);
    const CVector g = random_cvector(tail.ambient_dim(), rng);
    Complex rhs = 0.0;
    for (Index k = 0; k < tail.size(); ++k) {
      rhs += inner_product(f, dual[k], w) * inner_product(tail[k], g, w);
    }
    worst = std::max(worst, relative_gap(inner_product(f, g, w), rhs, norm(f, w) * norm(g, w)));
  }
  return worst;
}

bool in_span_of_others(const FiniteFamily& family, Index j, Index full_rank, double tol) {
  FiniteFamily others(family.ambient_dim(), family.weight());
  for (Index i = 0; i < family.size(); ++i) {
    if (i != j) others.push_back(family[i]);
  }
  const Index r = others.empty() ? 0 : rank_and_span(others, tol);
  return r == full_rank;
}

}  // namespace

CMatrix s_operator(const FiniteFamily& psi, const FiniteFamily& phi) {
  require_same_shape(psi, phi);
  const Index d = phi.ambient_dim();
  CMatrix s = CMatrix::Zero(d, d);
  // Explicit accumulation keeps S_{Psi,Phi}^H and S_{Phi,Psi} bitwise conjugate.
  for (Index i = 0; i < phi.size(); ++i) {
    const CVector& a = phi[i];
    const CVector& b = psi[i];
    for (Index c = 0; c < d; ++c) {
      const Complex bc = std::conj(b(c));
      for (Index r = 0; r < d; ++r) s(r, c) += a(r) * bc;
    }
  }
  s *= phi.weight();
  return s;
}

ReproducingPairCheck reproducing_identity_check(const FiniteFamily& psi, const FiniteFamily& phi,
                                                int trials, std::uint64_t seed,
                                                const std::optional<FiniteFamily>& test_space) {
  require_same_shape(psi, phi);
  ReproducingPairCheck out;
  out.s_matrix = s_operator(psi, phi);
  out.trials = trials;
  out.seed = seed;

  const Index d = phi.ambient_dim();
  CMatrix basis;
  if (test_space) {
    if (test_space->ambient_dim() != d) {
      throw Error(ErrorCode::DimMismatch, "test space lives in a different ambient dimension");
    }
    basis = orthonormal_basis(*test_space);
  } else {
    basis = CMatrix::Identity(d, d);
  }
  const CMatrix defect = out.s_matrix * basis - basis;
  out.identity_deviation = max_abs(defect);
  const Eigen::VectorXd sv = singular_values(out.s_matrix * basis);
  out.invertibility_margin = sv.size() == 0 ? 0.0 : sv(sv.size() - 1);

  auto rng = stream(seed, kTrialStream);
  const double w = phi.weight();
  for (int t = 0; t < trials; ++t) {
    const CVector f = basis * random_cvector(basis.cols(), rng);
    const CVector g = random_cvector(d, rng);
    const Complex rhs = pair_form(psi, phi, f, g);
    out.weak_identity_gap = std::max(
        out.weak_identity_gap, relative_gap(inner_product(f, g, w), rhs, norm(f, w) * norm(g, w)));
  }
  return out;
}

FiniteFamily biorthogonal_family(const FiniteFamily& phi, double margin) {
  const CMatrix g = gram_matrix(phi);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::SpectrumFail, "Gram eigensolver did not converge");
  }
  const double lowest = es.eigenvalues().minCoeff();
  if (!(lowest > margin)) {
    throw Error(ErrorCode::NotMinimal,
                "Gram smallest eigenvalue " + std::to_string(lowest) + " not above margin");
  }
  const CMatrix g_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                        es.eigenvectors().adjoint();
  // <phi_i, dual_j> = (G conj(A))_ij = delta_ij  =>  A = conj(G^{-1}).
  return FiniteFamily::from_columns(phi.columns() * g_inv.conjugate(), phi.weight());
}

FiniteFamily canonical_dual_frame(const FiniteFamily& phi) {
  if (phi.empty()) throw Error(ErrorCode::EmptyFamily, "dual frame of an empty family");
  const CMatrix f = phi.columns();
  const CMatrix frame_op = phi.weight() * (f * f.adjoint());
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(frame_op);
  cod.setThreshold(kDefaultRankTol);
  return phi.transformed(cod.pseudoInverse());
}

FiniteFamily normalize_partner(const FiniteFamily& psi, const FiniteFamily& phi) {
  const CMatrix s = s_operator(psi, phi);
  Eigen::FullPivLU<CMatrix> lu(s);
  lu.setThreshold(kDefaultRankTol);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::NotReproducingPair, "S is not invertible");
  }
  return phi.transformed(lu.inverse());
}

bool partner_is_biorthogonal(const FiniteFamily& phi_exact, const FiniteFamily& psi, double tol) {
  require_same_shape(phi_exact, psi);
  const FiniteFamily dual = biorthogonal_family(phi_exact, tol);

  const CMatrix basis = orthonormal_basis(phi_exact);
  const CMatrix s = s_operator(psi, phi_exact);
  if (!(max_abs(s * basis - basis) <= tol)) return false;

  const double w = phi_exact.weight();
  double worst = 0.0;
  for (Index j = 0; j < psi.size(); ++j) worst = std::max(worst, norm(psi[j] - dual[j], w));
  return worst <= tol;
}

ExcessOneReport excess_one_identities(const FiniteFamily& phi, const FiniteFamily& psi, double tol,
                                      std::uint64_t seed, int trials) {
  require_same_shape(phi, psi);
  if (phi.size() < 2) throw Error(ErrorCode::InvalidArgument, "need phi_0 and a nonempty tail");

  ExcessOneReport rep;
  rep.ambient_dim = phi.ambient_dim();
  rep.seed = seed;
  rep.tol = tol;

  const FiniteFamily tail = phi.slice(1, phi.size());
  rep.tail_margin = require_exact_tail(tail);
  rep.pair_deviation = require_reproducing(psi, phi, tol);

  const FiniteFamily dual = biorthogonal_family(tail);
  const double w = phi.weight();
  const CVector& phi0 = phi[0];
  const CVector& psi0 = psi[0];

  rep.trivial_branch = norm(psi0, w) <= tol;
  if (rep.trivial_branch) {
    rep.notes.emplace_back("trivial branch: psi_0 = 0, so dual_j = psi_j for every j >= 1");
  }

  for (Index j = 0; j < dual.size(); ++j) {
    const CVector predicted = inner_product(dual[j], phi0, w) * psi0 + psi[j + 1];
    rep.eq_partner = std::max(rep.eq_partner, norm(dual[j] - predicted, w));
  }

  CVector expansion = CVector::Zero(phi.ambient_dim());
  for (Index k = 0; k < tail.size(); ++k) expansion += inner_product(phi0, dual[k], w) * tail[k];
  rep.eq_head = norm(phi0 - expansion, w);

  rep.final_chain = biorthogonal_chain_gap(dual, tail, seed, trials);
  return rep;
}

Complex pair_form(const FiniteFamily& psi, const FiniteFamily& phi, const CVector& f,
                  const CVector& g) {
  require_same_shape(psi, phi);
  const double w = phi.weight();
  Complex acc = 0.0;
  for (Index k = 0; k < phi.size(); ++k) {
    acc += inner_product(f, psi[k], w) * inner_product(phi[k], g, w);
  }
  return acc;
}

Reduction reduce_dependent_pair(const FiniteFamily& phi_head, const FiniteFamily& psi_head,
                                double tol) {
  require_same_shape(phi_head, psi_head);
  const Index n = phi_head.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "reduction needs heads of length >= 2");

  const Index psi_rank = rank_and_span(psi_head, tol);
  const Index phi_rank = rank_and_span(phi_head, tol);
  if (psi_rank == n && phi_rank == n) {
    throw Error(ErrorCode::NoDependence, "both heads are linearly independent");
  }
  const ReducedSide side = psi_rank < n ? ReducedSide::Psi : ReducedSide::Phi;
  const FiniteFamily& dependent = side == ReducedSide::Psi ? psi_head : phi_head;
  const FiniteFamily& other = side == ReducedSide::Psi ? phi_head : psi_head;
  const Index full_rank = side == ReducedSide::Psi ? psi_rank : phi_rank;

  // Prefer the last member that lies in the span of the rest.
  Index pick = n - 1;
  while (pick >= 0 && !in_span_of_others(dependent, pick, full_rank, tol)) --pick;
  if (pick < 0) {
    throw Error(ErrorCode::NoDependence, "no member lies in the span of the others");
  }

  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    if (i != pick) order.push_back(i);
  }
  order.push_back(pick);

  CMatrix rest(dependent.ambient_dim(), n - 1);
  for (Index i = 0; i + 1 < n; ++i) rest.col(i) = dependent[order[static_cast<std::size_t>(i)]];
  const CVector c = least_squares(rest, dependent[pick]);

  FiniteFamily kept(dependent.ambient_dim(), dependent.weight());
  FiniteFamily folded(other.ambient_dim(), other.weight());
  const CVector& absorbed = other[pick];
  for (Index i = 0; i + 1 < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    kept.push_back(dependent[src]);
    folded.push_back(other[src] + std::conj(c(i)) * absorbed);
  }

  Reduction out{side == ReducedSide::Psi ? folded : kept,
                side == ReducedSide::Psi ? kept : folded,
                side,
                order,
                std::vector<Complex>(c.data(), c.data() + c.size())};
  return out;
}

FiniteFamily span_vectors(const FiniteFamily& psi_head, const FiniteFamily& phi_tail, double tol) {
  if (psi_head.empty()) throw Error(ErrorCode::EmptyFamily, "empty head");
  if (phi_tail.empty()) throw Error(ErrorCode::EmptyFamily, "empty tail");
  if (psi_head.ambient_dim() != phi_tail.ambient_dim() || psi_head.weight() != phi_tail.weight()) {
    throw Error(ErrorCode::FamilyMismatch, "head and tail live in different spaces");
  }
  if (rank_and_span(psi_head, tol) != psi_head.size()) {
    throw Error(ErrorCode::HeadDependent, "psi head is linearly dependent");
  }
  if (rank_and_span(phi_tail, tol) != phi_tail.ambient_dim()) {
    throw Error(ErrorCode::TailNotComplete, "phi tail does not span the ambient space");
  }
  const Index n = psi_head.size();
  const double w = psi_head.weight();
  FiniteFamily out(n, 1.0);
  for (Index m = 0; m < phi_tail.size(); ++m) {
    CVector v(n);
    for (Index j = 0; j < n; ++j) v(j) = inner_product(psi_head[j], phi_tail[m], w);
    out.push_back(std::move(v));
  }
  return out;
}

ExcessNReport excess_n_identities(const FiniteFamily& phi, const FiniteFamily& psi, Index n,
                                  double tol, std::uint64_t seed, int trials) {
  require_same_shape(phi, psi);
  if (n < 1 || n >= phi.size()) {
    throw Error(ErrorCode::InvalidArgument, "head length n must lie in [1, size)");
  }
  ExcessNReport rep;
  rep.ambient_dim = phi.ambient_dim();
  rep.n = n;
  rep.seed = seed;
  rep.tol = tol;

  const FiniteFamily tail = phi.slice(n, phi.size());
  const FiniteFamily psi_tail = psi.slice(n, psi.size());
  rep.tail_margin = require_exact_tail(tail);
  rep.pair_deviation = require_reproducing(psi, phi, tol);

  FiniteFamily phi_head = phi.slice(0, n);
  FiniteFamily psi_head = psi.slice(0, n);
  const double w = phi.weight();

  auto head_dependent = [&] {
    return rank_and_span(psi_head) < psi_head.size() || rank_and_span(phi_head) < phi_head.size();
  };
  while (!phi_head.empty() && head_dependent()) {
    const Index len = phi_head.size();
    if (len == 1) {
      // A single dependent element is zero on one side; its term vanishes.
      rep.reduction_chain.emplace_back("dropped zero head element (1 -> 0)");
      phi_head = phi_head.slice(0, 0);
      psi_head = psi_head.slice(0, 0);
      break;
    }
    const Reduction red = reduce_dependent_pair(phi_head, psi_head);
    std::string step = std::string("reduced ") + (red.side == ReducedSide::Psi ? "psi" : "phi") +
                       " head " + std::to_string(len) + " -> " + std::to_string(len - 1) +
                       ", folded element " + std::to_string(red.permutation.back());
    rep.reduction_chain.push_back(std::move(step));
    phi_head = red.phi;
    psi_head = red.psi;
  }
  rep.reduced_n = phi_head.size();

  const FiniteFamily dual = biorthogonal_family(tail);
  const Index heads = rep.reduced_n;

  for (Index j = 0; j < dual.size(); ++j) {
    CVector predicted = psi_tail[j];
    for (Index k = 0; k < heads; ++k) predicted += inner_product(dual[j], phi_head[k], w) * psi_head[k];
    rep.eq_partner = std::max(rep.eq_partner, norm(dual[j] - predicted, w));
  }

  if (heads > 0) {
    rep.span_rank = rank_and_span(span_vectors(psi_head, tail));
    if (rep.span_rank != heads) rep.notes.emplace_back("span vectors do not span C^n");
  }

  for (Index k = 0; k < heads; ++k) {
    CVector expansion = CVector::Zero(phi.ambient_dim());
    for (Index j = 0; j < tail.size(); ++j) expansion += inner_product(phi_head[k], dual[j], w) * tail[j];
    rep.eq_head = std::max(rep.eq_head, norm(phi_head[k] - expansion, w));
  }

  auto rng = stream(seed, kHeadStream);
  for (int t = 0; t < trials && heads > 0; ++t) {
    const CVector g = random_cvector(phi.ambient_dim(), rng);
    const double gn = norm(g, w);
    CVector u(heads);
    for (Index k = 0; k < heads; ++k) u(k) = inner_product(phi_head[k], g, w);

    CVector partial = CVector::Zero(heads);
    for (Index j = 0; j < tail.size(); ++j) {
      const Complex tail_coeff = inner_product(tail[j], g, w);
      for (Index k = 0; k < heads; ++k) partial(k) += inner_product(phi_head[k], dual[j], w) * tail_coeff;
      if (t == 0) rep.vector_trajectory.push_back({j + 1, (u - partial).norm()});
    }
    for (Index k = 0; k < heads; ++k) {
      rep.eq_head_weak = std::max(rep.eq_head_weak,
                                  relative_gap(u(k), partial(k), norm(phi_head[k], w) * gn));
    }
    const double un = u.norm();
    rep.vector_identity = std::max(rep.vector_identity, un > 0.0 ? (u - partial).norm() / un
                                                                 : (u - partial).norm());
  }

  rep.final_chain = biorthogonal_chain_gap(dual, tail, seed, trials);
  if (heads == 0) rep.notes.emplace_back("heads vanished after reduction; tail pair is biorthogonal");
  return rep;
}

}  // namespace zakbench
