#pragma once

// Zak transform on the unit square Q = [0,1)^2, the Gaussian atom's Zak
// transform in direct-series and Jacobi-theta form, the cone-function
// bound for E_nk, and refinement-ladder diagnostics for singular quotients.
//
// Grids are midpoint grids ((p + 1/2)/M, (q + 1/2)/M) with M even, so the
// zero of the Gaussian's Zak transform at (1/2, 1/2) never lands on a node.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zakbench/linalg.hpp"

namespace zakbench {

using LineSampler = std::function<Complex(double)>;
using SquareSampler = std::function<Complex(double, double)>;

double square_node(Index p, Index m);

// M x M samples, row-major with the first index running over x.
class GridFunction {
 public:
  GridFunction(Index m, CVector samples);

  static GridFunction sample(Index m, const SquareSampler& f, unsigned threads = 1);

  Index size() const noexcept { return m_; }
  double weight() const noexcept { return 1.0 / static_cast<double>(m_ * m_); }
  Complex at(Index p, Index q) const { return samples_(p * m_ + q); }
  const CVector& samples() const noexcept { return samples_; }
  double norm() const;

 private:
  Index m_;
  CVector samples_;
};

// 2^{1/4} exp(-pi t^2); unit L2(R) norm.
Complex gaussian_atom(double t);

// (M_n T_k f)(t) = exp(2 pi i n t) f(t - k).
LineSampler modulate_translate(LineSampler f, int n, int k);

// Truncated Zak series sum_{|j| <= J} f(x - j) exp(2 pi i j xi).
Complex zak_point(const LineSampler& f, double x, double xi, int terms);
GridFunction zak_transform(const LineSampler& f, Index m, int terms, unsigned threads = 1);

inline constexpr int kGaussianZakTerms = 6;
inline constexpr int kThetaTerms = 8;
inline constexpr double kThetaTailBound = 1e-30;

// Nome and truncation of the theta series k in [-K-1, K].
class ThetaParams {
 public:
  ThetaParams(double nome, int truncation);
  static ThetaParams standard(int truncation = kThetaTerms);  // q = e^{-pi}

  double nome() const noexcept { return nome_; }
  int truncation() const noexcept { return truncation_; }
  // q^{(K + 1/2)^2}
  double tail_bound() const noexcept;

 private:
  double nome_;
  int truncation_;
};

inline constexpr double kThetaMaxImag = 4.0;

// theta_1(z, q) = -i sum_k (-1)^k q^{(k+1/2)^2} exp((2k+1) i z).
Complex theta1(Complex z, const ThetaParams& p);

// theta_1'(0) = 2 sum_{k >= 0} (-1)^k (2k+1) q^{(k+1/2)^2}.
double theta1_prime_zero(const ThetaParams& p);

// Gaussian Zak transform via the theta identity.
Complex gaussian_zak_theta(double x, double xi, const ThetaParams& p);
// Gaussian Zak transform via the direct j-sum.
Complex gaussian_zak_series(double x, double xi, int terms = kGaussianZakTerms);

// Magnitude of the first-order Taylor coefficient of the Gaussian Zak
// transform at (1/2, 1/2): 2^{1/4} pi |theta_1'(0)|.
double gaussian_zak_slope(const ThetaParams& p);

struct ConeParams {
  double x0 = 0.5;
  double xi0 = 0.5;
};

double cone(const ConeParams& c, double x, double xi);

// E_nk(x, xi) = exp(2 pi i n x) exp(-2 pi i k xi).
Complex enk(int n, int k, double x, double xi);

struct EnkBoundOptions {
  std::uint64_t seed = 0;
  int a = 0;  // reference index (a, b) for the unit-modulus combination
  int b = 0;
  ConeParams anchor{0.5, 0.5};
  double slack = 1e-9;
};

struct EnkBoundReport {
  int n = 0;
  int k = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  // |E_nk(x, xi) - 1| <= 2 pi sqrt(n^2 + k^2) sqrt(x^2 + xi^2)
  int origin_violations = 0;
  double origin_max_ratio = 0.0;  // lhs / rhs
  // |E_nk(x - x0, xi - xi0) - 1| <= 2 pi sqrt(n^2 + k^2) rho_{x0, xi0}
  int shifted_violations = 0;
  double shifted_max_ratio = 0.0;
  // |E_nk + c_nk E_ab| / rho_{x0, xi0} <= 2 pi sqrt((n-a)^2 + (k-b)^2) + slack
  bool combination_checked = false;
  int combination_violations = 0;
  double combination_max = 0.0;
  double combination_bound = 0.0;
  bool passed() const {
    return origin_violations == 0 && shifted_violations == 0 && combination_violations == 0;
  }
};

// Unit-modulus c with E_nk(x0, xi0) + c E_ab(x0, xi0) = 0.
Complex enk_cancelling_coefficient(int n, int k, int a, int b, const ConeParams& anchor);

EnkBoundReport enk_bound_check(int n, int k, int trials, const EnkBoundOptions& opts = {});

struct QuotientOptions {
  double converge_rel = 0.01;
  double diverge_rel = 0.10;
  unsigned threads = 1;
};

struct QuotientReport {
  std::vector<Index> ladder;
  std::vector<double> estimates;
  std::vector<double> relative_steps;  // (E_{i+1} - E_i) / E_i
  double log_slope = 0.0;              // least-squares slope of estimate vs log M
  bool converges = false;
  bool diverges = false;
  QuotientOptions options;
  std::vector<std::string> notes;
};

// Midpoint rule for the double integral of |num|^2 / |den|^2 over Q.
double quotient_estimate(const GridFunction& numerator, const GridFunction& denominator);

QuotientReport quotient_integral(const SquareSampler& numerator, const SquareSampler& denominator,
                                 const std::vector<Index>& ladder, const QuotientOptions& opts = {});

struct TaylorOptions {
  Index radial = 1000;
  Index angular = 1000;
  Index outer_grid = 1000;
  Index holdout = 10000;
  std::uint64_t seed = 0;
  double slope_radius = 1e-4;
};

struct TaylorBound {
  double delta = 0.0;
  double inner_constant = 0.0;  // C: min |Theta| / rho on the punctured ball
  double outer_constant = 0.0;  // c: min |Theta| off the ball
  Index inner_samples = 0;
  Index outer_samples = 0;
  int holdout_violations = 0;   // C rho > |Theta| at fresh points of the ball
  double slope_theory = 0.0;
  double slope_empirical = 0.0;  // mean |Theta| / rho at slope_radius
  double slope_rel_error = 0.0;
};

TaylorBound taylor_lower_bound(const ThetaParams& p, double delta, const TaylorOptions& opts = {});

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& fn);

}  // namespace zakbench
