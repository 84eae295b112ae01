// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: zakbench_acceptance <path-to-zakbench-cli> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "zakbench/expsys.hpp"
#include "zakbench/reproducing.hpp"
#include "zakbench/zak.hpp"

using namespace zakbench;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Result()>& body, double budget_s) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << "  [" << secs << " s";
  if (budget_s > 0) os << " / budget " << budget_s << " s";
  os << "]";
  if (budget_s > 0 && secs >= budget_s) {
    r.ok = false;
    os << " over budget";
  }
  if (!r.ok) ++failures;
  std::cout << (r.ok ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << r.detail << os.str()
            << std::endl;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

PeriodicSampler linear_weight() {
  return [](double t) { return Complex(t, 0.0); };
}

Result biorthogonality() {
  std::vector<double> devs;
  for (Index n : {64, 128, 256}) {
    const ExpSystem sys = ExpSystem::from_function(linear_weight(), n, 16, 0, 0.0);
    devs.push_back(biorthogonality_deviation(sys));
  }
  const bool small = devs[2] < 5e-4;
  const bool monotone = devs[1] < devs[0] && devs[2] < devs[1];
  return {small && monotone, "dev(N=64,128,256) = " + num(devs[0]) + ", " + num(devs[1]) + ", " +
                                 num(devs[2]) + (monotone ? " (monotone)" : " (not monotone)")};
}

Result term_norms() {
  const ExpSystem sys = ExpSystem::from_function(linear_weight(), 64, 16, 0, 0.0);
  const SweepReport rep = schauder_failure_sweep(sys, 16);
  double dev = 0.0;
  for (int n : sys.active_indices()) {
    const CVector term = std::conj(dual_coefficient(sys, n)) * weighted_exp(sys, n);
    dev = std::max(dev, std::abs(norm(term, sys.weight().weight()) - rep.weight_norm));
  }
  const bool ok = dev <= 1e-12 && rep.max_term_norm_deviation <= 1e-12 && rep.no_norm_convergence;
  return {ok, "max | |term| - |g| | = " + num(dev) +
                  ", no_norm_convergence = " + (rep.no_norm_convergence ? "true" : "false")};
}

Result zak_unitarity_covariance() {
  const GridFunction z = zak_transform(gaussian_atom, 128, 6);
  const double unit = std::abs(z.norm() - 1.0);
  double cov = 0.0;
  for (int n = -2; n <= 2; ++n) {
    for (int k = -2; k <= 2; ++k) {
      const GridFunction zg = zak_transform(modulate_translate(gaussian_atom, n, k), 128, 6);
      for (Index p = 0; p < 128; ++p) {
        for (Index q = 0; q < 128; ++q) {
          const Complex pred = enk(n, k, square_node(p, 128), square_node(q, 128)) * z.at(p, q);
          cov = std::max(cov, std::abs(zg.at(p, q) - pred));
        }
      }
    }
  }
  return {unit <= 1e-6 && cov <= 1e-10, "| |Zg| - 1 | = " + num(unit) + ", covariance error = " + num(cov)};
}

Result theta_cross() {
  const ThetaParams p = ThetaParams::standard();
  double diff = 0.0, diff_oracle = 0.0;
  for (Index a = 0; a < 128; ++a) {
    for (Index b = 0; b < 128; ++b) {
      const double x = square_node(a, 128), xi = square_node(b, 128);
      const Complex th = gaussian_zak_theta(x, xi, p);
      diff = std::max(diff, std::abs(th - gaussian_zak_series(x, xi)));
      const oracle::cld o = oracle::gaussian_zak(x, xi);
      diff_oracle = std::max(diff_oracle, std::abs(th - Complex(double(o.real()), double(o.imag()))));
    }
  }
  const double zero = std::abs(gaussian_zak_theta(0.5, 0.5, p));
  const double prime = theta1_prime_zero(p);
  const long double ref = oracle::theta1_prime_zero(std::exp(-oracle::kPi), 20);
  const double rel = static_cast<double>(std::abs((prime - ref) / ref));
  const bool ok = diff <= 1e-10 && diff_oracle <= 1e-10 && zero < 1e-12 && rel <= 1e-13 && prime >= 0.9;
  return {ok, "theta vs series = " + num(diff) + ", vs oracle = " + num(diff_oracle) +
                  ", |Theta(1/2,1/2)| = " + num(zero) + ", theta1'(0) = " + num(prime) +
                  " (rel " + num(rel) + ")"};
}

Result l2_dichotomy() {
  const ThetaParams p = ThetaParams::standard();
  const SquareSampler theta = [p](double x, double xi) { return gaussian_zak_theta(x, xi, p); };
  const SquareSampler rho = [](double x, double xi) { return Complex(cone({}, x, xi), 0.0); };
  const SquareSampler one = [](double, double) { return Complex(1.0, 0.0); };
  const std::vector<Index> ladder{64, 128, 256, 512};
  const QuotientReport c = quotient_integral(rho, theta, ladder);
  const QuotientReport d = quotient_integral(one, theta, ladder);
  const double last_c = std::abs(c.estimates[3] - c.estimates[2]) / c.estimates[2];
  const double min_d = *std::min_element(d.relative_steps.begin(), d.relative_steps.end());
  const bool ok = c.converges && last_c < 0.01 && d.diverges && min_d > 0.10 && d.log_slope > 0.0;
  return {ok, "rho^2/|Theta|^2 last step " + num(last_c) + ", 1/|Theta|^2 min step " + num(min_d) +
                  " slope " + num(d.log_slope)};
}

Result enk_bound() {
  const int pairs[][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 2}, {2, 3}, {3, -1}, {-2, -2}, {4, 1}, {0, -3}, {5, 5}};
  int violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < std::size(pairs); ++i) {
    EnkBoundOptions o;
    o.seed = 1000 + i;
    const EnkBoundReport r = enk_bound_check(pairs[i][0], pairs[i][1], 10000, o);
    violations += r.origin_violations + r.shifted_violations;
    worst = std::max({worst, r.origin_max_ratio, r.shifted_max_ratio});
  }
  return {violations == 0, std::to_string(violations) + " violations, max lhs/rhs = " + num(worst)};
}

FiniteFamily random_family(Index dim, Index count, std::mt19937_64& rng) {
  return FiniteFamily::from_columns(random_cmatrix(dim, count, rng), 1.0);
}

Result excess_one() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const FiniteFamily phi = random_family(8, 9, rng);
    const FiniteFamily psi = canonical_dual_frame(phi);
    const ExcessOneReport r = excess_one_identities(phi, psi, 1e-11, seed);
    worst = std::max({worst, r.eq_partner, r.eq_head, r.final_chain});
  }
  return {worst < 1e-10, "max residual over 50 seeds = " + num(worst)};
}

Result excess_n() {
  double form_gap = 0.0;
  bool rank_ok = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const Index n = 2 + static_cast<Index>(seed % 3);
    // dependent head: last element lies in the span of the others
    CMatrix ph = random_cmatrix(8, n, rng);
    ph.col(n - 1) = ph.leftCols(n - 1) * random_cvector(n - 1, rng);
    const FiniteFamily phi_head = FiniteFamily::from_columns(ph, 1.0);
    const FiniteFamily psi_head = random_family(8, n, rng);
    const Reduction red = reduce_dependent_pair(phi_head, psi_head);
    for (int t = 0; t < 8; ++t) {
      const CVector f = random_cvector(8, rng), g = random_cvector(8, rng);
      const Complex before = pair_form(psi_head, phi_head, f, g);
      const Complex after = pair_form(red.psi, red.phi, f, g);
      form_gap = std::max(form_gap, std::abs(before - after) / (f.norm() * g.norm()));
    }
    const FiniteFamily psi_lin = random_family(8, n, rng);
    const FiniteFamily tail = random_family(8, 8, rng);
    rank_ok = rank_ok && rank_and_span(span_vectors(psi_lin, tail)) == n;
  }
  double resid = 0.0;
  for (Index n : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      const FiniteFamily phi = random_family(8, 8 + n, rng);
      const FiniteFamily psi = canonical_dual_frame(phi);
      const ExcessNReport r = excess_n_identities(phi, psi, n, 1e-11, seed);
      resid = std::max({resid, r.eq_partner, r.eq_head, r.eq_head_weak});
    }
  }
  const bool ok = form_gap <= 1e-11 && rank_ok && resid < 1e-10;
  return {ok, "form gap = " + num(form_gap) + ", span rank = n: " + (rank_ok ? "yes" : "no") +
                  ", identity residuals (n=2,3) = " + num(resid)};
}

Result rp_normalization() {
  double dev = 0.0, sym = 0.0;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const FiniteFamily psi = random_family(8, 8, rng);
    const FiniteFamily phi = random_family(8, 8, rng);
    const FiniteFamily phi_n = normalize_partner(psi, phi);
    dev = std::max(dev, reproducing_identity_check(psi, phi_n, 16, i).identity_deviation);
    const CMatrix s = s_operator(psi, phi);
    sym = std::max(sym, max_abs(s.adjoint() - s_operator(phi, psi)) / max_abs(s));
  }
  return {dev < 1e-10 && sym <= 1e-15, "identity_deviation = " + num(dev) + ", adjoint symmetry = " + num(sym)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Result cli_determinism(const std::string& cli, const std::filesystem::path& scratch) {
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"expsys-sweep", ""},
      {"zak-validate", ""},
      {"quotient-ladder", ""},
      {"rp-check", ""},
      {"excess-n", ""}};
  std::string bad;
  for (const auto& [cmd, extra] : cmds) {
    std::string reports[2];
    for (int run = 0; run < 2; ++run) {
      const auto dir = scratch / ("run" + std::to_string(run));
      std::filesystem::create_directories(dir);
      const std::string line = "\"" + cli + "\" --seed 7 --csv --out \"" + dir.string() + "\" " + cmd +
                               " " + extra + " > /dev/null 2>&1";
      const int rc = std::system(line.c_str());
      if (rc != 0) bad += " " + cmd + "(exit " + std::to_string(rc) + ")";
      reports[run] = slurp(dir / (cmd + ".json")) + slurp(dir / (cmd + ".csv"));
    }
    if (reports[0].empty() || reports[0] != reports[1]) bad += " " + cmd + "(differs)";
  }
  return {bad.empty(), bad.empty() ? "5 commands byte-identical" : "mismatch:" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: " << argv[0] << " <zakbench-cli> <scratch-dir>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const std::filesystem::path scratch = argv[2];
  std::filesystem::remove_all(scratch);
  std::filesystem::create_directories(scratch);

  report(1, "biorthogonality", biorthogonality, 5.0);
  report(2, "non-convergence mechanism", term_norms, 1.0);
  report(3, "Zak unitarity and covariance", zak_unitarity_covariance, 10.0);
  report(4, "theta cross-validation", theta_cross, 0.0);
  report(5, "L2 dichotomy", l2_dichotomy, 60.0);
  report(6, "E_nk cone bound", enk_bound, 0.0);
  report(7, "excess-one identities", excess_one, 0.0);
  report(8, "excess-n pipeline", excess_n, 0.0);
  report(9, "reproducing-pair normalization", rp_normalization, 0.0);
  report(10, "CLI determinism", [&] { return cli_determinism(cli, scratch); }, 0.0);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
