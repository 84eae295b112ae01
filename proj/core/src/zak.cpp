#include "zakbench/zak.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "zakbench/error.hpp"

namespace zakbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularDenominator = 1e-300;

const double kFourthRootTwo = std::pow(2.0, 0.25);

void require_even_grid(Index m) {
  if (m <= 0 || m % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "midpoint grid size must be positive and even, got " + std::to_string(m));
  }
}

bool exceeds(double lhs, double rhs) { return lhs > rhs * (1.0 + 1e-12) + 1e-15; }

}  // namespace

void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double square_node(Index p, Index m) {
  return (static_cast<double>(p) + 0.5) / static_cast<double>(m);
}

GridFunction::GridFunction(Index m, CVector samples) : m_(m), samples_(std::move(samples)) {
  require_even_grid(m);
  if (samples_.size() != m * m) {
    throw Error(ErrorCode::DimMismatch, "grid of size " + std::to_string(m) + " needs " +
                                            std::to_string(m * m) + " samples");
  }
}

GridFunction GridFunction::sample(Index m, const SquareSampler& f, unsigned threads) {
  require_even_grid(m);
  CVector s(m * m);
  parallel_for(m, threads, [&](Index p) {
    const double x = square_node(p, m);
    for (Index q = 0; q < m; ++q) s(p * m + q) = f(x, square_node(q, m));
  });
  return GridFunction(m, std::move(s));
}

double GridFunction::norm() const { return zakbench::norm(samples_, weight()); }

Complex gaussian_atom(double t) { return kFourthRootTwo * std::exp(-kPi * t * t); }

LineSampler modulate_translate(LineSampler f, int n, int k) {
  return [f = std::move(f), n, k](double t) {
    return std::polar(1.0, 2.0 * kPi * n * t) * f(t - k);
  };
}

Complex zak_point(const LineSampler& f, double x, double xi, int terms) {
  Complex acc = 0.0;
  for (int j = -terms; j <= terms; ++j) {
    acc += f(x - j) * std::polar(1.0, 2.0 * kPi * j * xi);
  }
  return acc;
}

GridFunction zak_transform(const LineSampler& f, Index m, int terms, unsigned threads) {
  if (terms < 1) throw Error(ErrorCode::InvalidArgument, "Zak truncation J must be >= 1");
  return GridFunction::sample(m, [&](double x, double xi) { return zak_point(f, x, xi, terms); },
                              threads);
}

ThetaParams::ThetaParams(double nome, int truncation) : nome_(nome), truncation_(truncation) {
  if (!(nome > 0.0 && nome < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta nome must lie in (0, 1)");
  }
  if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "theta truncation must be >= 1");
  if (!(tail_bound() < kThetaTailBound)) {
    throw Error(ErrorCode::ThetaTruncation,
                "q^{(K+1/2)^2} = " + std::to_string(tail_bound()) + " is not below 1e-30");
  }
}

ThetaParams ThetaParams::standard(int truncation) { return ThetaParams(std::exp(-kPi), truncation); }

double ThetaParams::tail_bound() const noexcept {
  const double e = truncation_ + 0.5;
  return std::pow(nome_, e * e);
}

Complex theta1(Complex z, const ThetaParams& p) {
  if (std::abs(z.imag()) > kThetaMaxImag) {
    throw Error(ErrorCode::ThetaDomain, "|Im z| exceeds " + std::to_string(kThetaMaxImag));
  }
  const int kmax = p.truncation();
  const double log_q = std::log(p.nome());
  Complex acc = 0.0;
  // k and -k-1 share q^{(k+1/2)^2}; summing the symmetric range keeps oddness exact.
  for (int k = -kmax - 1; k <= kmax; ++k) {
    const double e = k + 0.5;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * std::exp(log_q * e * e) * std::exp(Complex(0.0, 2.0 * k + 1.0) * z);
  }
  return Complex(0.0, -1.0) * acc;
}

double theta1_prime_zero(const ThetaParams& p) {
  const double log_q = std::log(p.nome());
  double acc = 0.0;
  for (int k = 0; k <= p.truncation(); ++k) {
    const double e = k + 0.5;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (2.0 * k + 1.0) * std::exp(log_q * e * e);
  }
  return 2.0 * acc;
}

Complex gaussian_zak_theta(double x, double xi, const ThetaParams& p) {
  const double dx = x - 0.5;
  const double dxi = xi - 0.5;
  const Complex prefactor = std::exp(Complex(-kPi * dx * dx, kPi * dxi));
  const Complex z = kPi * Complex(dxi, -dx);
  return Complex(0.0, -kFourthRootTwo) * prefactor * theta1(z, p);
}

Complex gaussian_zak_series(double x, double xi, int terms) {
  return zak_point(gaussian_atom, x, xi, terms);
}

double gaussian_zak_slope(const ThetaParams& p) {
  return kFourthRootTwo * kPi * std::abs(theta1_prime_zero(p));
}

double cone(const ConeParams& c, double x, double xi) { return std::hypot(x - c.x0, xi - c.xi0); }

Complex enk(int n, int k, double x, double xi) {
  return std::polar(1.0, 2.0 * kPi * (n * x - k * xi));
}

Complex enk_cancelling_coefficient(int n, int k, int a, int b, const ConeParams& anchor) {
  if (n == a && k == b) {
    throw Error(ErrorCode::ExcludedIndex, "(n, k) must differ from the reference (a, b)");
  }
  return -enk(n, k, anchor.x0, anchor.xi0) / enk(a, b, anchor.x0, anchor.xi0);
}

EnkBoundReport enk_bound_check(int n, int k, int trials, const EnkBoundOptions& opts) {
  if (n == 0 && k == 0) throw Error(ErrorCode::ExcludedIndex, "(n, k) = (0, 0) is excluded");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be positive");

  EnkBoundReport rep;
  rep.n = n;
  rep.k = k;
  rep.trials = trials;
  rep.seed = opts.seed;

  const double lipschitz = 2.0 * kPi * std::hypot(static_cast<double>(n), static_cast<double>(k));
  rep.combination_checked = !(n == opts.a && k == opts.b);
  Complex c = 0.0;
  if (rep.combination_checked) {
    c = enk_cancelling_coefficient(n, k, opts.a, opts.b, opts.anchor);
    rep.combination_bound = 2.0 * kPi * std::hypot(static_cast<double>(n - opts.a),
                                                    static_cast<double>(k - opts.b));
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    const double x = unit(rng);
    const double xi = unit(rng);

    const double lhs0 = std::abs(enk(n, k, x, xi) - 1.0);
    const double rhs0 = lipschitz * std::hypot(x, xi);
    if (exceeds(lhs0, rhs0)) ++rep.origin_violations;
    if (rhs0 > 0.0) rep.origin_max_ratio = std::max(rep.origin_max_ratio, lhs0 / rhs0);

    const double rho = cone(opts.anchor, x, xi);
    if (rho == 0.0) continue;
    const double lhs1 = std::abs(enk(n, k, x - opts.anchor.x0, xi - opts.anchor.xi0) - 1.0);
    const double rhs1 = lipschitz * rho;
    if (exceeds(lhs1, rhs1)) ++rep.shifted_violations;
    rep.shifted_max_ratio = std::max(rep.shifted_max_ratio, lhs1 / rhs1);

    if (rep.combination_checked) {
      const double ratio = std::abs(enk(n, k, x, xi) + c * enk(opts.a, opts.b, x, xi)) / rho;
      rep.combination_max = std::max(rep.combination_max, ratio);
      if (ratio > rep.combination_bound + opts.slack) ++rep.combination_violations;
    }
  }
  return rep;
}

double quotient_estimate(const GridFunction& numerator, const GridFunction& denominator) {
  if (numerator.size() != denominator.size()) {
    throw Error(ErrorCode::DimMismatch, "numerator and denominator grids differ in size");
  }
  const CVector& num = numerator.samples();
  const CVector& den = denominator.samples();
  double acc = 0.0;
  for (Index i = 0; i < num.size(); ++i) {
    const double d = std::norm(den(i));
    if (!(std::sqrt(d) >= kSingularDenominator)) {
      throw Error(ErrorCode::SingularNode, "denominator vanishes at node " + std::to_string(i));
    }
    acc += std::norm(num(i)) / d;
  }
  return acc * numerator.weight();
}

QuotientReport quotient_integral(const SquareSampler& numerator, const SquareSampler& denominator,
                                 const std::vector<Index>& ladder, const QuotientOptions& opts) {
  if (ladder.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "refinement ladder needs at least two levels");
  }
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    require_even_grid(ladder[i]);
    if (i > 0 && ladder[i] <= ladder[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "refinement ladder must be increasing");
    }
  }

  QuotientReport rep;
  rep.ladder = ladder;
  rep.options = opts;
  rep.estimates.resize(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Index m = ladder[i];
    const GridFunction num = GridFunction::sample(m, numerator, opts.threads);
    const GridFunction den = GridFunction::sample(m, denominator, opts.threads);
    rep.estimates[i] = quotient_estimate(num, den);
  }

  bool all_grow = true;
  for (std::size_t i = 1; i < rep.estimates.size(); ++i) {
    const double step = (rep.estimates[i] - rep.estimates[i - 1]) / std::abs(rep.estimates[i - 1]);
    rep.relative_steps.push_back(step);
    if (!(step > opts.diverge_rel)) all_grow = false;
  }
  const double last_step = std::abs(rep.relative_steps.back());
  rep.converges = last_step < opts.converge_rel;
  rep.diverges = all_grow;

  // Least-squares slope of estimate against log M.
  double mean_x = 0.0, mean_y = 0.0;
  const double count = static_cast<double>(ladder.size());
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    mean_x += std::log(static_cast<double>(ladder[i]));
    mean_y += rep.estimates[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double dx = std::log(static_cast<double>(ladder[i])) - mean_x;
    sxy += dx * (rep.estimates[i] - mean_y);
    sxx += dx * dx;
  }
  rep.log_slope = sxy / sxx;

  rep.notes.emplace_back("midpoint-rule ladder at finite resolution; flags describe the ladder, "
                         "they do not certify (non-)integrability");
  rep.notes.emplace_back("converges: final relative step < " + std::to_string(opts.converge_rel) +
                         "; diverges: every relative step > " + std::to_string(opts.diverge_rel));
  return rep;
}

TaylorBound taylor_lower_bound(const ThetaParams& p, double delta, const TaylorOptions& opts) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1/2)");
  }
  if (opts.radial < 1 || opts.angular < 1 || opts.outer_grid < 2) {
    throw Error(ErrorCode::InvalidArgument, "Taylor sampling resolution too small");
  }
  const ConeParams center{0.5, 0.5};
  TaylorBound out;
  out.delta = delta;

  // Closed polar rings r_i = delta (i+1)/radial, so the rim r = delta is sampled.
  double inner = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < opts.radial; ++i) {
    const double r = delta * static_cast<double>(i + 1) / static_cast<double>(opts.radial);
    for (Index j = 0; j < opts.angular; ++j) {
      const double a = 2.0 * kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(opts.angular);
      const double x = 0.5 + r * std::cos(a);
      const double xi = 0.5 + r * std::sin(a);
      inner = std::min(inner, std::abs(gaussian_zak_theta(x, xi, p)) / cone(center, x, xi));
    }
  }
  out.inner_constant = inner;
  out.inner_samples = opts.radial * opts.angular;

  double outer = std::numeric_limits<double>::infinity();
  Index outer_count = 0;
  for (Index a = 0; a < opts.outer_grid; ++a) {
    const double x = square_node(a, opts.outer_grid);
    for (Index b = 0; b < opts.outer_grid; ++b) {
      const double xi = square_node(b, opts.outer_grid);
      if (cone(center, x, xi) < delta) continue;
      outer = std::min(outer, std::abs(gaussian_zak_theta(x, xi, p)));
      ++outer_count;
    }
  }
  out.outer_constant = outer;
  out.outer_samples = outer_count;

  if (!(out.inner_constant > 0.0) || !(out.outer_constant > 0.0) || outer_count == 0) {
    throw Error(ErrorCode::BoundViolated, "empirical lower-bound constant is not positive");
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index t = 0; t < opts.holdout; ++t) {
    const double r = delta * std::sqrt(unit(rng));
    const double a = 2.0 * kPi * unit(rng);
    const double x = 0.5 + r * std::cos(a);
    const double xi = 0.5 + r * std::sin(a);
    const double rho = cone(center, x, xi);
    if (rho == 0.0) continue;
    if (out.inner_constant * rho > std::abs(gaussian_zak_theta(x, xi, p))) ++out.holdout_violations;
  }

  out.slope_theory = gaussian_zak_slope(p);
  constexpr int kSlopeAngles = 64;
  double slope = 0.0;
  for (int j = 0; j < kSlopeAngles; ++j) {
    const double a = 2.0 * kPi * (j + 0.5) / kSlopeAngles;
    const double x = 0.5 + opts.slope_radius * std::cos(a);
    const double xi = 0.5 + opts.slope_radius * std::sin(a);
    slope += std::abs(gaussian_zak_theta(x, xi, p)) / cone(center, x, xi);
  }
  out.slope_empirical = slope / kSlopeAngles;
  out.slope_rel_error = std::abs(out.slope_empirical - out.slope_theory) / out.slope_theory;
  return out;
}

}  // namespace zakbench
