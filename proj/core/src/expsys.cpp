#include "zakbench/expsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zakbench/error.hpp"

namespace zakbench {

namespace {

constexpr double kVanishingWeight = 1e-300;

// exp(i pi m / n) with m reduced modulo 2n first, so large index products
// keep full phase accuracy.
Complex unit_phase(long long m, long long n) {
  const long long period = 2 * n;
  long long r = m % period;
  if (r < 0) r += period;
  return std::polar(1.0, std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

Complex exp_at(int n, double t) { return std::polar(1.0, 2.0 * std::numbers::pi * n * t); }

const CVector& window_checked_weight(const ExpSystem& sys, int n) {
  if (std::abs(n) > sys.window()) {
    throw Error(ErrorCode::IndexOutOfWindow,
                "index " + std::to_string(n) + " outside window " + std::to_string(sys.window()));
  }
  return sys.weight().samples();
}

int removed_or_throw(const ExpSystem& sys) {
  if (!sys.removed()) {
    throw Error(ErrorCode::InvalidSystem, "dual construction needs a removed index");
  }
  return *sys.removed();
}

double midpoint_integral(const PeriodicSampler& f, Index n) {
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) acc += std::norm(f(torus_node(i, n)));
  return acc / static_cast<double>(n);
}

bool stabilizes(const std::vector<double>& values, double rel) {
  if (values.size() < 2) return false;
  const double last = values.back();
  const double prev = values[values.size() - 2];
  return std::abs(last - prev) < rel * std::abs(last);
}

}  // namespace

double torus_node(Index i, Index n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

PeriodicSignal::PeriodicSignal(CVector samples) : samples_(std::move(samples)) {
  const Index n = samples_.size();
  if (n <= 0 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "periodic signal needs a positive even sample count, got " + std::to_string(n));
  }
}

PeriodicSignal PeriodicSignal::sample(Index n, const PeriodicSampler& f) {
  if (n <= 0 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid size must be positive and even");
  }
  CVector s(n);
  for (Index i = 0; i < n; ++i) s(i) = f(torus_node(i, n));
  return PeriodicSignal(std::move(s));
}

double PeriodicSignal::norm() const { return zakbench::norm(samples_, weight()); }

CVector exponential_samples(int n, Index grid_size) {
  CVector e(grid_size);
  // 2 pi n (i + 1/2) / N = pi * n (2i + 1) / N
  for (Index i = 0; i < grid_size; ++i) {
    e(i) = unit_phase(static_cast<long long>(n) * (2 * i + 1), grid_size);
  }
  return e;
}

ExpSystem::ExpSystem(PeriodicSignal weight, int window, std::optional<int> removed, double anchor)
    : weight_(std::move(weight)), window_(window), removed_(removed), anchor_(anchor) {
  if (window < 0) throw Error(ErrorCode::InvalidSystem, "window must be nonnegative");
  if (2 * static_cast<Index>(window) + 1 > weight_.size()) {
    throw Error(ErrorCode::InvalidSystem,
                "window " + std::to_string(window) + " aliases on a grid of " +
                    std::to_string(weight_.size()) + " points (need 2W+1 <= N)");
  }
  if (removed_ && std::abs(*removed_) > window) {
    throw Error(ErrorCode::IndexOutOfWindow, "removed index outside window");
  }
  if (!(anchor >= 0.0 && anchor < 1.0)) {
    throw Error(ErrorCode::InvalidSystem, "anchor t0 must lie in [0, 1)");
  }
}

ExpSystem ExpSystem::from_function(PeriodicSampler g, Index grid_size, int window,
                                   std::optional<int> removed, double anchor) {
  ExpSystem sys(PeriodicSignal::sample(grid_size, g), window, removed, anchor);
  sys.sampler_ = std::move(g);
  return sys;
}

std::vector<int> ExpSystem::active_indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(2 * window_ + 1));
  for (int n = -window_; n <= window_; ++n) {
    if (!removed_ || n != *removed_) out.push_back(n);
  }
  return out;
}

bool ExpSystem::is_active(int n) const {
  return std::abs(n) <= window_ && (!removed_ || n != *removed_);
}

ExpSystem ExpSystem::refined(Index grid_size) const {
  if (!sampler_) {
    throw Error(ErrorCode::InvalidSystem, "cannot refine a system given only by samples");
  }
  return from_function(*sampler_, grid_size, window_, removed_, anchor_);
}

CVector weighted_exp(const ExpSystem& sys, int n) {
  const CVector& g = window_checked_weight(sys, n);
  return g.cwiseProduct(exponential_samples(n, sys.grid_size()));
}

Complex dual_coefficient(const ExpSystem& sys, int n) {
  const int k = removed_or_throw(sys);
  if (n == k) throw Error(ErrorCode::RemovedIndex, "index " + std::to_string(n) + " is removed");
  if (std::abs(n) > sys.window()) {
    throw Error(ErrorCode::IndexOutOfWindow, "index " + std::to_string(n) + " outside window");
  }
  return -exp_at(n - k, sys.anchor());
}

CVector biorthogonal_dual(const ExpSystem& sys, int n) {
  const int k = removed_or_throw(sys);
  const Complex c = dual_coefficient(sys, n);
  const CVector& g = sys.weight().samples();
  const Index size = sys.grid_size();
  const CVector numerator = exponential_samples(n, size) + c * exponential_samples(k, size);
  CVector out(size);
  for (Index i = 0; i < size; ++i) {
    if (std::abs(g(i)) < kVanishingWeight) {
      throw Error(ErrorCode::WeightVanishesOnGrid,
                  "weight vanishes at node " + std::to_string(i));
    }
    out(i) = numerator(i) / std::conj(g(i));
  }
  return out;
}

FiniteFamily active_family(const ExpSystem& sys) {
  FiniteFamily fam(sys.grid_size(), sys.weight().weight());
  for (int n : sys.active_indices()) fam.push_back(weighted_exp(sys, n));
  return fam;
}

FiniteFamily dual_family(const ExpSystem& sys) {
  FiniteFamily fam(sys.grid_size(), sys.weight().weight());
  for (int n : sys.active_indices()) fam.push_back(biorthogonal_dual(sys, n));
  return fam;
}

double biorthogonality_deviation(const ExpSystem& sys) {
  const FiniteFamily f = active_family(sys);
  const FiniteFamily d = dual_family(sys);
  const double w = sys.weight().weight();
  double dev = 0.0;
  for (Index m = 0; m < f.size(); ++m) {
    for (Index n = 0; n < d.size(); ++n) {
      const Complex ip = inner_product(f[m], d[n], w);
      dev = std::max(dev, std::abs(ip - (m == n ? 1.0 : 0.0)));
    }
  }
  return dev;
}

std::vector<int> concentric_order(const ExpSystem& sys, int level) {
  const int k = sys.removed().value_or(0);
  std::vector<int> out;
  for (int n : sys.active_indices()) {
    if (std::abs(n) <= level) out.push_back(n);
  }
  std::stable_sort(out.begin(), out.end(), [k](int a, int b) {
    const int da = std::abs(a - k);
    const int db = std::abs(b - k);
    if (da != db) return da < db;
    return (a - k) < (b - k);
  });
  return out;
}

double completeness_defect(const ExpSystem& sys) {
  const std::vector<int> active = sys.active_indices();
  if (active.empty()) return 0.0;
  CMatrix rows(static_cast<Index>(active.size()), sys.grid_size());
  for (std::size_t r = 0; r < active.size(); ++r) {
    rows.row(static_cast<Index>(r)) = weighted_exp(sys, active[r]).transpose();
  }
  rows *= std::sqrt(sys.weight().weight());
  const Eigen::VectorXd sv = singular_values(rows);
  // Short-wide matrix: min(rows, cols) singular values, the last is smallest.
  return sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
}

WeightHypothesisLadder weight_hypothesis_ladder(const PeriodicSampler& g, double anchor,
                                                const std::vector<Index>& grid_sizes,
                                                double stabilization_rel) {
  WeightHypothesisLadder out;
  out.grid_sizes = grid_sizes;
  out.stabilization_rel = stabilization_rel;
  for (Index n : grid_sizes) {
    out.inverse_sq_integral.push_back(
        midpoint_integral([&](double t) { return 1.0 / g(t); }, n));
    out.anchored_sq_integral.push_back(
        midpoint_integral([&](double t) { return (t - anchor) / g(t); }, n));
  }
  out.inverse_stabilizes = stabilizes(out.inverse_sq_integral, stabilization_rel);
  out.anchored_stabilizes = stabilizes(out.anchored_sq_integral, stabilization_rel);
  return out;
}

SweepReport schauder_failure_sweep(const ExpSystem& sys, int max_terms) {
  const int k = removed_or_throw(sys);
  if (max_terms < 1 || max_terms > sys.window()) {
    throw Error(ErrorCode::InvalidArgument, "sweep length must lie in [1, W]");
  }
  SweepReport rep;
  rep.grid_size = sys.grid_size();
  rep.window = sys.window();
  rep.removed = k;
  rep.anchor = sys.anchor();
  rep.weight_norm = sys.weight().norm();

  const double w = sys.weight().weight();
  const CVector target = weighted_exp(sys, k);
  CVector partial = CVector::Zero(sys.grid_size());

  for (int level = 1; level <= max_terms; ++level) {
    SweepLevel lv;
    lv.level = level;
    for (int n : concentric_order(sys, level)) {
      if (std::abs(n) != level) continue;
      const CVector term = std::conj(dual_coefficient(sys, n)) * weighted_exp(sys, n);
      partial += term;
      lv.term_norm = std::max(lv.term_norm, norm(term, w));
      lv.added.push_back(n);
    }
    lv.residual = norm(target - partial, w);
    rep.max_term_norm_deviation =
        std::max(rep.max_term_norm_deviation, std::abs(lv.term_norm - rep.weight_norm));
    rep.levels.push_back(std::move(lv));
  }

  rep.term_norms_constant = rep.max_term_norm_deviation <= kTermNormTol;
  const std::size_t tail = std::min<std::size_t>(5, rep.levels.size());
  double tail_max = 0.0;
  for (std::size_t i = rep.levels.size() - tail; i < rep.levels.size(); ++i) {
    tail_max = std::max(tail_max, rep.levels[i].term_norm);
  }
  rep.no_norm_convergence = tail_max >= 0.99 * rep.weight_norm;

  rep.biorthogonality_deviation = biorthogonality_deviation(sys);
  rep.completeness_defect = completeness_defect(sys);

  if (sys.sampler()) {
    const Index n = sys.grid_size();
    rep.hypothesis = weight_hypothesis_ladder(*sys.sampler(), sys.anchor(), {n, 2 * n, 4 * n, 8 * n});
    if (rep.hypothesis->inverse_stabilizes) {
      rep.hypothesis_notes.emplace_back("hypothesis 1/g∉L² fails");
    } else {
      rep.hypothesis_notes.emplace_back(
          "1/g∉L²: ladder estimates of ∫1/|g|² grow under refinement (consistent, not certified)");
    }
    if (rep.hypothesis->anchored_stabilizes) {
      rep.hypothesis_notes.emplace_back(
          "(t−t0)/g∈L²: ladder estimates stabilize (consistent, not certified)");
    } else {
      rep.hypothesis_notes.emplace_back("hypothesis (t−t0)/g∈L² not supported by the ladder");
    }
  } else {
    rep.hypothesis_notes.emplace_back("weight given by samples only; hypothesis ladder not run");
  }
  return rep;
}

}  // namespace zakbench
