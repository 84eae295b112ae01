#pragma once

// Weighted exponential systems {g e_n} on the torus T = [0, 1) with one
// index removed, their closed-form biorthogonal duals, and the sweep that
// shows the duals cannot come from a norm-convergent expansion.
//
// Grids are shifted midpoint grids t_i = (i + 1/2) / N so that weights
// vanishing at t = 0 (g(t) = t, g(t) = sqrt(t)) stay nonzero on every node.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zakbench/linalg.hpp"

namespace zakbench {

using PeriodicSampler = std::function<Complex(double)>;

// Midpoint node (i + 1/2) / n.
double torus_node(Index i, Index n);

class PeriodicSignal {
 public:
  // N must be positive and even.
  explicit PeriodicSignal(CVector samples);

  static PeriodicSignal sample(Index n, const PeriodicSampler& f);

  Index size() const noexcept { return samples_.size(); }
  double weight() const noexcept { return 1.0 / static_cast<double>(samples_.size()); }
  double node(Index i) const { return torus_node(i, size()); }
  const CVector& samples() const noexcept { return samples_; }
  double norm() const;

 private:
  CVector samples_;
};

// Samples of e_n(t) = exp(2 pi i n t) on the shifted N-point grid.
CVector exponential_samples(int n, Index grid_size);

class ExpSystem {
 public:
  // removed == nullopt gives the full window {|n| <= W}; otherwise the
  // active set is {|n| <= W, n != k}.
  ExpSystem(PeriodicSignal weight, int window, std::optional<int> removed, double anchor);

  // Keeps the sampler so hypothesis ladders can refine the grid.
  static ExpSystem from_function(PeriodicSampler g, Index grid_size, int window,
                                 std::optional<int> removed, double anchor);

  const PeriodicSignal& weight() const noexcept { return weight_; }
  int window() const noexcept { return window_; }
  std::optional<int> removed() const noexcept { return removed_; }
  double anchor() const noexcept { return anchor_; }
  Index grid_size() const noexcept { return weight_.size(); }
  const std::optional<PeriodicSampler>& sampler() const noexcept { return sampler_; }

  // Ascending active indices.
  std::vector<int> active_indices() const;
  bool is_active(int n) const;

  // Returns a copy with a different grid size; requires a sampler.
  ExpSystem refined(Index grid_size) const;

 private:
  PeriodicSignal weight_;
  int window_;
  std::optional<int> removed_;
  double anchor_;
  std::optional<PeriodicSampler> sampler_;
};

CVector weighted_exp(const ExpSystem& sys, int n);

// c_n = -exp(2 pi i (n - k) t0); e_n + c_n e_k vanishes at t0.
Complex dual_coefficient(const ExpSystem& sys, int n);

// (e_n + c_n e_k) / conj(g) on the grid.
CVector biorthogonal_dual(const ExpSystem& sys, int n);

// Active weighted exponentials and their duals, both in ascending index order.
FiniteFamily active_family(const ExpSystem& sys);
FiniteFamily dual_family(const ExpSystem& sys);

// max over active m, n of |<g e_m, dual_n> - delta_mn|.
double biorthogonality_deviation(const ExpSystem& sys);

// Active indices with |n| <= level, ordered by |n - k| with ties negative first.
std::vector<int> concentric_order(const ExpSystem& sys, int level);

// Smallest singular value of the sqrt(1/N)-scaled matrix whose rows are the
// active weighted exponentials.
double completeness_defect(const ExpSystem& sys);

// Refinement-ladder proxy for the two weight hypotheses: growth of
// int 1/|g|^2 (consistent with 1/g not in L2) and stabilization of
// int |t - t0|^2 / |g|^2 (consistent with (t - t0)/g in L2).
struct WeightHypothesisLadder {
  std::vector<Index> grid_sizes;
  std::vector<double> inverse_sq_integral;
  std::vector<double> anchored_sq_integral;
  bool inverse_stabilizes = false;
  bool anchored_stabilizes = false;
  double stabilization_rel = 0.01;
};

WeightHypothesisLadder weight_hypothesis_ladder(const PeriodicSampler& g, double anchor,
                                                const std::vector<Index>& grid_sizes,
                                                double stabilization_rel = 0.01);

struct SweepLevel {
  int level = 0;
  double residual = 0.0;   // || g e_k - S_L ||
  double term_norm = 0.0;  // max || conj(c_n) g e_n || over terms added at this level
  std::vector<int> added;  // indices entering the partial sum at this level
};

struct SweepReport {
  Index grid_size = 0;
  int window = 0;
  int removed = 0;
  double anchor = 0.0;
  double weight_norm = 0.0;
  std::vector<SweepLevel> levels;
  double max_term_norm_deviation = 0.0;  // max | term_norm - ||g|| |
  bool term_norms_constant = false;      // deviation <= 1e-12
  bool no_norm_convergence = false;
  double biorthogonality_deviation = 0.0;
  double completeness_defect = 0.0;
  std::optional<WeightHypothesisLadder> hypothesis;
  std::vector<std::string> hypothesis_notes;
};

inline constexpr double kTermNormTol = 1e-12;

SweepReport schauder_failure_sweep(const ExpSystem& sys, int max_terms);

}  // namespace zakbench
