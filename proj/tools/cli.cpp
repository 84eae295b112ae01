#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "zakbench/error.hpp"
#include "zakbench/expsys.hpp"
#include "zakbench/io.hpp"
#include "zakbench/linalg.hpp"
#include "zakbench/reproducing.hpp"
#include "zakbench/zak.hpp"

namespace zakbench::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvRow {
  double level;
  double value;
  bool flag;
};

struct Outcome {
  Json report;
  bool passed = true;
  std::vector<CsvRow> csv;
};

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  bool has(const std::string& key) const {
    auto it = raw_.find(key);
    return it != raw_.end() && !it->second.empty();
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw_.at(key) : fallback;
  }

  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = raw_.at(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw UsageError("--" + key + " expects an integer, got '" + s + "'");
    return v;
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = raw_.at(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw UsageError("--" + key + " expects a number, got '" + s + "'");
    }
    return v;
  }

  std::vector<Index> integer_list(const std::string& key, const std::vector<Index>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<Index> out;
    std::stringstream ss(raw_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (item.empty() || used != item.size()) {
        throw UsageError("--" + key + " expects a comma-separated integer list");
      }
      out.push_back(static_cast<Index>(v));
    }
    return out;
  }

 private:
  const std::map<std::string, std::string>& raw_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

PeriodicSampler named_weight(const std::string& name) {
  if (name == "linear") return [](double t) { return Complex(t, 0.0); };
  if (name == "one") return [](double) { return Complex(1.0, 0.0); };
  if (name == "sqrt") return [](double t) { return Complex(std::sqrt(t), 0.0); };
  throw UsageError("unknown weight '" + name + "' (expected linear, one, sqrt)");
}

ExpSystem build_exp_system(const Params& p, bool need_removed = true) {
  const long long n = p.integer("N", 128);
  const long long w = p.integer("W", 16);
  const long long k = p.integer("k", 0);
  const double t0 = p.real("t0", 0.0);
  require(n > 0 && n % 2 == 0, "--N must be a positive even integer");
  require(w >= 1, "--W must be >= 1");
  require(2 * w + 1 <= n, "--W too large for --N (need 2W+1 <= N)");
  require(!need_removed || std::abs(k) <= w, "--k must satisfy |k| <= W");
  require(t0 >= 0.0 && t0 < 1.0, "--t0 must lie in [0, 1)");
  const std::optional<int> removed = static_cast<int>(k);
  if (p.has("g-file")) {
    PeriodicSignal sig = signal_from_json(read_json_file(p.str("g-file", "")));
    require(sig.size() >= 2 * w + 1, "--W too large for the signal file grid");
    return ExpSystem(std::move(sig), static_cast<int>(w), removed, t0);
  }
  return ExpSystem::from_function(named_weight(p.str("g", "linear")), static_cast<Index>(n),
                                  static_cast<int>(w), removed, t0);
}

Outcome run_expsys_sweep(const Params& p, const ExperimentConfig&) {
  const ExpSystem sys = build_exp_system(p);
  const long long terms = p.integer("terms", sys.window());
  require(terms >= 1 && terms <= sys.window(), "--terms must lie in [1, W]");
  const SweepReport rep = schauder_failure_sweep(sys, static_cast<int>(terms));

  Outcome out;
  out.report = to_json(rep);
  out.passed = rep.term_norms_constant && rep.no_norm_convergence;
  for (const auto& lv : rep.levels) {
    out.csv.push_back({static_cast<double>(lv.level), lv.residual,
                       lv.term_norm >= 0.99 * rep.weight_norm});
  }
  return out;
}

Outcome run_zak_validate(const Params& p, const ExperimentConfig& cfg) {
  const long long m = p.integer("M", 128);
  const long long j = p.integer("J", kGaussianZakTerms);
  const long long k = p.integer("K", kThetaTerms);
  const double delta = p.real("delta", 0.1);
  const long long trials = p.integer("trials", 10000);
  const long long res = p.integer("taylor-res", 1000);
  require(m > 0 && m % 2 == 0, "--M must be a positive even integer");
  require(j >= 1, "--J must be >= 1");
  require(k >= 1, "--K must be >= 1");
  require(delta > 0.0 && delta < 0.5, "--delta must lie in (0, 1/2)");
  require(trials >= 1, "--trials must be positive");
  require(res >= 2, "--taylor-res must be >= 2");

  const ThetaParams theta = ThetaParams::standard(static_cast<int>(k));
  const int terms = static_cast<int>(j);
  const Index grid = static_cast<Index>(m);

  const GridFunction z = zak_transform(gaussian_atom, grid, terms, cfg.threads);
  const GridFunction z_shift =
      zak_transform([](double t) { return gaussian_atom(t - 0.3); }, grid, terms, cfg.threads);
  const double unit_err = std::max(std::abs(z.norm() - 1.0), std::abs(z_shift.norm() - 1.0));

  double cov_err = 0.0;
  for (int n = -2; n <= 2; ++n) {
    for (int kk = -2; kk <= 2; ++kk) {
      const GridFunction zg = zak_transform(modulate_translate(gaussian_atom, n, kk), grid, terms,
                                            cfg.threads);
      for (Index a = 0; a < grid; ++a) {
        for (Index b = 0; b < grid; ++b) {
          const Complex pred = enk(n, kk, square_node(a, grid), square_node(b, grid)) * z.at(a, b);
          cov_err = std::max(cov_err, std::abs(zg.at(a, b) - pred));
        }
      }
    }
  }

  const GridFunction th = GridFunction::sample(
      grid, [&](double x, double xi) { return gaussian_zak_theta(x, xi, theta); }, cfg.threads);
  const double theta_err = max_abs(th.samples() - z.samples());
  const double zero_abs = std::abs(gaussian_zak_theta(0.5, 0.5, theta));
  const double prime = theta1_prime_zero(theta);
  const double prime_ref = theta1_prime_zero(ThetaParams::standard(20));
  const double prime_rel = std::abs(prime - prime_ref) / std::abs(prime_ref);

  TaylorOptions topts;
  topts.radial = topts.angular = topts.outer_grid = static_cast<Index>(res);
  topts.seed = cfg.seed;
  const TaylorBound taylor = taylor_lower_bound(theta, delta, topts);

  Json enk_reports = Json::array();
  bool enk_ok = true;
  const int pairs[][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 2}, {2, 3}, {3, -1}, {-2, -2}, {4, 1}, {0, -3}, {5, 5}};
  for (std::size_t i = 0; i < std::size(pairs); ++i) {
    EnkBoundOptions eo;
    eo.seed = cfg.seed + i;
    const EnkBoundReport r = enk_bound_check(pairs[i][0], pairs[i][1], static_cast<int>(trials), eo);
    enk_ok = enk_ok && r.passed();
    enk_reports.push_back(to_json(r));
  }

  const bool unit_ok = unit_err <= 1e-6;
  const bool cov_ok = cov_err <= 1e-10;
  const bool theta_ok = theta_err <= 1e-10 && zero_abs < 1e-12 && prime_rel <= 1e-13 && prime >= 0.9;
  const bool taylor_ok = taylor.holdout_violations == 0 && taylor.slope_rel_error <= 0.02;

  Outcome out;
  out.report = Json{{"M", grid},
                    {"J", terms},
                    {"K", theta.truncation()},
                    {"unitarity", {{"norm", z.norm()},
                                   {"translated_norm", z_shift.norm()},
                                   {"max_error", unit_err},
                                   {"passed", unit_ok}}},
                    {"covariance", {{"max_error", cov_err}, {"passed", cov_ok}}},
                    {"theta", {{"max_series_diff", theta_err},
                               {"zero_abs", zero_abs},
                               {"theta1_prime_zero", prime},
                               {"theta1_prime_zero_rel_vs_K20", prime_rel},
                               {"passed", theta_ok}}},
                    {"taylor", to_json(taylor)},
                    {"taylor_passed", taylor_ok},
                    {"enk_bounds", enk_reports},
                    {"enk_passed", enk_ok}};
  out.passed = unit_ok && cov_ok && theta_ok && taylor_ok && enk_ok;

  if (p.has("emit-grid")) write_json_file(p.str("emit-grid", ""), grid_to_json(th));
  return out;
}

Outcome run_quotient_ladder(const Params& p, const ExperimentConfig& cfg) {
  QuotientOptions qopts;
  qopts.threads = cfg.threads;
  const ThetaParams theta = ThetaParams::standard();
  const SquareSampler theta_fn = [theta](double x, double xi) { return gaussian_zak_theta(x, xi, theta); };

  Outcome out;
  if (p.has("numerator-file") || p.has("denominator-file")) {
    require(p.has("numerator-file") && p.has("denominator-file"),
            "--numerator-file and --denominator-file go together");
    const GridFunction num = grid_from_json(read_json_file(p.str("numerator-file", "")));
    const GridFunction den = grid_from_json(read_json_file(p.str("denominator-file", "")));
    const double est = quotient_estimate(num, den);
    out.report = Json{{"M", num.size()}, {"estimate", est}, {"source", "grid files"}};
    out.csv.push_back({static_cast<double>(num.size()), est, false});
    return out;
  }

  const std::string numer = p.str("numerator", "cone");
  const std::string denom = p.str("denominator", "theta");
  require(denom == "theta", "--denominator supports only 'theta'");
  SquareSampler num_fn;
  std::string expected;
  if (numer == "cone") {
    num_fn = [](double x, double xi) { return Complex(cone({0.5, 0.5}, x, xi), 0.0); };
    expected = "converges";
  } else if (numer == "one") {
    num_fn = [](double, double) { return Complex(1.0, 0.0); };
    expected = "diverges";
  } else if (numer == "theta") {
    num_fn = theta_fn;
    expected = "converges";
  } else {
    throw UsageError("unknown numerator '" + numer + "' (expected cone, one, theta)");
  }
  const std::string expect = p.str("expect", expected);
  require(expect == "converges" || expect == "diverges" || expect == "none",
          "--expect must be converges, diverges or none");

  const std::vector<Index> ladder = p.integer_list("ladder", {64, 128, 256, 512});
  for (Index m : ladder) require(m > 0 && m % 2 == 0, "--ladder entries must be positive and even");

  const QuotientReport rep = quotient_integral(num_fn, theta_fn, ladder, qopts);
  out.report = to_json(rep);
  out.report["numerator"] = numer;
  out.report["denominator"] = denom;
  out.report["expected_flag"] = expect;
  if (expect == "converges") out.passed = rep.converges;
  if (expect == "diverges") out.passed = rep.diverges && rep.log_slope > 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const bool grew = i > 0 && rep.relative_steps[i - 1] > qopts.diverge_rel;
    out.csv.push_back({static_cast<double>(ladder[i]), rep.estimates[i], grew});
  }
  return out;
}

Outcome run_rp_check(const Params& p, const ExperimentConfig& cfg) {
  const std::string family = p.str("family", "random");
  const long long trials = p.integer("trials", 16);
  require(trials >= 1, "--trials must be positive");
  Outcome out;

  if (family == "expsys") {
    const ExpSystem sys = build_exp_system(p);
    const FiniteFamily phi = active_family(sys);
    const FiniteFamily psi = dual_family(sys);
    const ReproducingPairCheck chk =
        reproducing_identity_check(psi, phi, static_cast<int>(trials), cfg.seed, phi);
    out.report = Json{{"family", "expsys"}, {"grid_N", sys.grid_size()}, {"window_W", sys.window()},
                      {"check", to_json(chk)}};
    out.passed = chk.identity_deviation < 1e-3 && chk.weak_identity_gap < 1e-3;
    return out;
  }
  require(family == "random", "--family must be random or expsys");

  const long long dim = p.integer("dim", 8);
  const long long pairs = p.integer("pairs", 20);
  require(dim >= 1 && dim <= 256, "--dim must lie in [1, 256]");
  require(pairs >= 1, "--pairs must be positive");

  std::mt19937_64 rng(cfg.seed);
  Json checks = Json::array();
  double worst_dev = 0.0, worst_sym = 0.0;
  bool partners_ok = true;
  for (long long i = 0; i < pairs; ++i) {
    const FiniteFamily psi = FiniteFamily::from_columns(random_cmatrix(dim, dim, rng), 1.0);
    const FiniteFamily phi = FiniteFamily::from_columns(random_cmatrix(dim, dim, rng), 1.0);
    const FiniteFamily phi_n = normalize_partner(psi, phi);
    const ReproducingPairCheck chk =
        reproducing_identity_check(psi, phi_n, static_cast<int>(trials), cfg.seed + static_cast<std::uint64_t>(i));
    const CMatrix s = s_operator(psi, phi);
    const double sym = max_abs(s.adjoint() - s_operator(phi, psi)) / max_abs(s);
    const bool partner = partner_is_biorthogonal(phi_n, psi, 1e-8);
    worst_dev = std::max(worst_dev, chk.identity_deviation);
    worst_sym = std::max(worst_sym, sym);
    partners_ok = partners_ok && partner;
    Json c = to_json(chk);
    c["adjoint_symmetry_defect"] = sym;
    c["partner_is_biorthogonal"] = partner;
    checks.push_back(c);
  }
  out.report = Json{{"family", "random"},
                    {"ambient_dim", dim},
                    {"pairs", pairs},
                    {"max_identity_deviation", worst_dev},
                    {"max_adjoint_symmetry_defect", worst_sym},
                    {"checks", checks}};
  out.passed = worst_dev < 1e-10 && worst_sym <= 1e-15 && partners_ok;
  return out;
}

Outcome run_excess_n(const Params& p, const ExperimentConfig& cfg) {
  const long long dim = p.integer("dim", 8);
  const long long n = p.integer("n", 2);
  const double tol = p.real("tol", 1e-11);
  require(dim >= 1 && dim <= 256, "--dim must lie in [1, 256]");
  require(n >= 1 && n <= dim, "--n must lie in [1, dim]");
  require(tol > 0.0, "--tol must be positive");

  std::mt19937_64 rng(cfg.seed);
  CMatrix cols(dim, n + dim);
  cols.leftCols(n) = random_cmatrix(dim, n, rng);
  cols.rightCols(dim) = random_cmatrix(dim, dim, rng);
  if (p.has("zero-head") && p.str("zero-head", "") != "false") cols.col(0).setZero();
  const FiniteFamily phi = FiniteFamily::from_columns(cols, 1.0);
  const FiniteFamily psi = canonical_dual_frame(phi);

  const ExcessNReport rep = excess_n_identities(phi, psi, static_cast<Index>(n), tol, cfg.seed);
  Outcome out;
  out.report = to_json(rep);
  out.passed = rep.passed() && (rep.reduced_n == 0 || rep.span_rank == rep.reduced_n);
  if (n == 1) {
    const ExcessOneReport one = excess_one_identities(phi, psi, tol, cfg.seed);
    const double agree = std::max({std::abs(one.eq_partner - rep.eq_partner),
                                   std::abs(one.eq_head - rep.eq_head),
                                   std::abs(one.final_chain - rep.final_chain)});
    out.report["excess_one"] = to_json(one);
    out.report["excess_one_agreement"] = agree;
    out.passed = out.passed && one.passed() && agree <= 1e-12;
  }
  for (const auto& pt : rep.vector_trajectory) {
    out.csv.push_back({static_cast<double>(pt.terms), pt.residual, pt.residual <= 10 * tol});
  }
  return out;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "level,value,flag\n";
  out << std::setprecision(17);
  for (const auto& r : rows) out << r.level << ',' << r.value << ',' << (r.flag ? 1 : 0) << '\n';
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"expsys-sweep", "zak-validate", "quotient-ladder",
                                              "rp-check", "excess-n"};
  return names;
}

unsigned thread_limit_from_env() {
  const char* env = std::getenv("ZAKBENCH_THREADS");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return std::min<unsigned>(static_cast<unsigned>(v), hw);
}

std::optional<ExperimentConfig> parse_args(int argc, const char* const* argv, int& exit_code,
                                           std::ostream& out, std::ostream& err) {
  CLI::App app{"zakbench: weighted exponentials, Zak transforms and reproducing pairs"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string out_dir = "reports";
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--out", out_dir, "report directory")->capture_default_str();
  app.add_flag("--csv", cfg.write_csv, "also write a level,value,flag CSV");

  auto& params = cfg.params;
  auto opt = [&params](CLI::App* sub, const std::string& name, const std::string& help) {
    sub->add_option("--" + name, params[name], help);
  };

  CLI::App* sweep = app.add_subcommand("expsys-sweep", "partial sums of the dual expansion");
  opt(sweep, "g", "weight: linear | one | sqrt");
  opt(sweep, "g-file", "weight samples (PeriodicSignal JSON)");
  opt(sweep, "k", "removed index");
  opt(sweep, "W", "index window |n| <= W");
  opt(sweep, "N", "grid size (even)");
  opt(sweep, "t0", "anchor in [0,1)");
  opt(sweep, "terms", "number of truncation levels (<= W)");

  CLI::App* zak = app.add_subcommand("zak-validate", "Zak transform and theta checks");
  opt(zak, "M", "grid size (even)");
  opt(zak, "J", "Zak series truncation");
  opt(zak, "K", "theta series truncation");
  opt(zak, "delta", "ball radius for the lower bound");
  opt(zak, "trials", "random points per E_nk pair");
  opt(zak, "taylor-res", "sampling resolution for the lower bound");
  opt(zak, "emit-grid", "write the theta-form grid (GridFunction JSON)");

  CLI::App* quot = app.add_subcommand("quotient-ladder", "refinement ladder for |num|^2/|Theta|^2");
  opt(quot, "numerator", "cone | one | theta");
  opt(quot, "denominator", "theta");
  opt(quot, "ladder", "comma-separated grid sizes");
  opt(quot, "expect", "converges | diverges | none");
  opt(quot, "numerator-file", "numerator grid (GridFunction JSON)");
  opt(quot, "denominator-file", "denominator grid (GridFunction JSON)");

  CLI::App* rp = app.add_subcommand("rp-check", "reproducing-pair identity checks");
  opt(rp, "family", "random | expsys");
  opt(rp, "dim", "ambient dimension (random)");
  opt(rp, "pairs", "number of random pairs");
  opt(rp, "trials", "random (f, g) trials per check");
  opt(rp, "g", "weight (expsys)");
  opt(rp, "g-file", "weight samples (expsys)");
  opt(rp, "k", "removed index (expsys)");
  opt(rp, "W", "window (expsys)");
  opt(rp, "N", "grid size (expsys)");
  opt(rp, "t0", "anchor (expsys)");

  CLI::App* excess = app.add_subcommand("excess-n", "identity chain for n extra elements");
  opt(excess, "dim", "ambient dimension");
  opt(excess, "n", "number of extra elements");
  opt(excess, "tol", "precondition tolerance (conclusions at 10 tol)");
  excess->add_flag("--zero-head", [&params](std::int64_t) { params["zero-head"] = "true"; },
                   "make the first head element zero");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    if (exit_code != 0) exit_code = kExitUsage;
    return std::nullopt;
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.output_path = out_dir;
  cfg.threads = thread_limit_from_env();
  exit_code = kExitOk;
  return cfg;
}

int run(const ExperimentConfig& config, std::ostream& log) {
  const Params p(config.params);
  Outcome outcome;
  try {
    if (config.command == "expsys-sweep") {
      outcome = run_expsys_sweep(p, config);
    } else if (config.command == "zak-validate") {
      outcome = run_zak_validate(p, config);
    } else if (config.command == "quotient-ladder") {
      outcome = run_quotient_ladder(p, config);
    } else if (config.command == "rp-check") {
      outcome = run_rp_check(p, config);
    } else if (config.command == "excess-n") {
      outcome = run_excess_n(p, config);
    } else {
      log << "error: unknown command '" << config.command << "'\n";
      return kExitUsage;
    }

    Json report{{"command", config.command}, {"seed", config.seed}};
    Json echoed = Json::object();
    for (const auto& [key, value] : config.params) {
      if (!value.empty()) echoed[key] = value;
    }
    report["params"] = echoed;
    for (auto it = outcome.report.begin(); it != outcome.report.end(); ++it) report[it.key()] = it.value();
    report["passed"] = outcome.passed;

    std::error_code ec;
    std::filesystem::create_directories(config.output_path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + config.output_path.string());
    const auto base = config.output_path / config.command;
    write_json_file(base.string() + ".json", report);
    write_json_file(base.string() + ".meta.json",
                    Json{{"timestamp_utc", timestamp_utc()}, {"threads", config.threads}});
    if (config.write_csv && !outcome.csv.empty()) write_csv(base.string() + ".csv", outcome.csv);

    log << config.command << ": " << (outcome.passed ? "PASS" : "FAIL") << " -> " << base.string()
        << ".json\n";
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    log << "error [" << e.name() << "]: " << e.what() << '\n';
    return kExitUsage;
  }
  return outcome.passed ? kExitOk : kExitAssertion;
}

}  // namespace zakbench::cli
