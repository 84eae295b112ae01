#include "zakbench/io.hpp"

#include <fstream>

#include "zakbench/error.hpp"

namespace zakbench {

namespace {

Json samples_to_json(const CVector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

CVector samples_from_json(const Json& arr, Index expected) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
    throw Error(ErrorCode::Format, "expected " + std::to_string(expected) + " samples");
  }
  CVector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const Json& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorCode::Format, "sample " + std::to_string(i) + " is not [re, im]");
    }
    v(i) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

void expect_field(const Json& j, const char* key, const char* value) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>() != value) {
    throw Error(ErrorCode::Format, std::string("expected ") + key + " = \"" + value + "\"");
  }
}

Index positive_size(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
    throw Error(ErrorCode::Format, std::string("missing positive integer field ") + key);
  }
  return static_cast<Index>(j[key].get<long long>());
}

}  // namespace

Json to_json(const WeightHypothesisLadder& l) {
  return Json{{"grid_sizes", l.grid_sizes},
              {"inverse_sq_integral", l.inverse_sq_integral},
              {"anchored_sq_integral", l.anchored_sq_integral},
              {"inverse_stabilizes", l.inverse_stabilizes},
              {"anchored_stabilizes", l.anchored_stabilizes},
              {"stabilization_rel", l.stabilization_rel}};
}

Json to_json(const SweepReport& r) {
  Json levels = Json::array();
  for (const auto& lv : r.levels) {
    levels.push_back({{"L", lv.level}, {"residual", lv.residual}, {"term_norm", lv.term_norm}});
  }
  Json j{{"grid_N", r.grid_size},
         {"window_W", r.window},
         {"removed_k", r.removed},
         {"anchor_t0", r.anchor},
         {"levels", levels},
         {"flags", {{"no_norm_convergence", r.no_norm_convergence},
                    {"hypothesis_notes", r.hypothesis_notes}}}};
  Json diag{{"weight_norm", r.weight_norm},
            {"max_term_norm_deviation", r.max_term_norm_deviation},
            {"term_norms_constant", r.term_norms_constant},
            {"biorthogonality_deviation", r.biorthogonality_deviation},
            {"completeness_defect", r.completeness_defect}};
  if (r.hypothesis) diag["hypothesis_ladder"] = to_json(*r.hypothesis);
  j["diagnostics"] = diag;
  return j;
}

Json to_json(const EnkBoundReport& r) {
  return Json{{"n", r.n},
              {"k", r.k},
              {"trials", r.trials},
              {"seed", r.seed},
              {"origin_violations", r.origin_violations},
              {"origin_max_ratio", r.origin_max_ratio},
              {"shifted_violations", r.shifted_violations},
              {"shifted_max_ratio", r.shifted_max_ratio},
              {"combination_checked", r.combination_checked},
              {"combination_violations", r.combination_violations},
              {"combination_max", r.combination_max},
              {"combination_bound", r.combination_bound},
              {"passed", r.passed()}};
}

Json to_json(const QuotientReport& r) {
  return Json{{"ladder", r.ladder},
              {"estimates", r.estimates},
              {"relative_steps", r.relative_steps},
              {"log_slope", r.log_slope},
              {"flags", {{"converges", r.converges}, {"diverges", r.diverges}}},
              {"thresholds",
               {{"converge_rel", r.options.converge_rel}, {"diverge_rel", r.options.diverge_rel}}},
              {"notes", r.notes}};
}

Json to_json(const TaylorBound& t) {
  return Json{{"delta", t.delta},
              {"inner_constant", t.inner_constant},
              {"outer_constant", t.outer_constant},
              {"inner_samples", t.inner_samples},
              {"outer_samples", t.outer_samples},
              {"holdout_violations", t.holdout_violations},
              {"slope_theory", t.slope_theory},
              {"slope_empirical", t.slope_empirical},
              {"slope_rel_error", t.slope_rel_error}};
}

Json to_json(const ReproducingPairCheck& c) {
  return Json{{"ambient_dim", c.s_matrix.rows()},
              {"identity_deviation", c.identity_deviation},
              {"invertibility_margin", c.invertibility_margin},
              {"weak_identity_gap", c.weak_identity_gap},
              {"trials", c.trials},
              {"seed", c.seed}};
}

Json to_json(const ExcessOneReport& r) {
  return Json{{"experiment", "excess_one"},
              {"ambient_dim", r.ambient_dim},
              {"n", 1},
              {"residuals",
               {{"eq2_2", r.eq_partner}, {"eq2_3", r.eq_head}, {"final_chain", r.final_chain}}},
              {"margins", {{"tail_gram", r.tail_margin}, {"pair_deviation", r.pair_deviation}}},
              {"seed", r.seed},
              {"tol", r.tol},
              {"trivial_branch", r.trivial_branch},
              {"passed", r.passed()},
              {"notes", r.notes}};
}

Json to_json(const ExcessNReport& r) {
  Json traj = Json::array();
  for (const auto& p : r.vector_trajectory) traj.push_back({p.terms, p.residual});
  return Json{{"experiment", "excess_n"},
              {"ambient_dim", r.ambient_dim},
              {"n", r.n},
              {"reduced_n", r.reduced_n},
              {"residuals",
               {{"eq5_3", r.eq_partner},
                {"eq5_5", r.eq_head},
                {"eq5_5_weak", r.eq_head_weak},
                {"vector_identity", r.vector_identity},
                {"final_chain", r.final_chain}}},
              {"margins",
               {{"tail_gram", r.tail_margin},
                {"pair_deviation", r.pair_deviation},
                {"span_rank", r.span_rank}}},
              {"seed", r.seed},
              {"tol", r.tol},
              {"reduction_chain", r.reduction_chain},
              {"vector_trajectory", traj},
              {"passed", r.passed()},
              {"notes", r.notes}};
}

Json grid_to_json(const GridFunction& g) {
  return Json{{"M", g.size()},
              {"grid", "midpoint"},
              {"domain", "unit_square"},
              {"samples", samples_to_json(g.samples())}};
}

GridFunction grid_from_json(const Json& j) {
  expect_field(j, "grid", "midpoint");
  expect_field(j, "domain", "unit_square");
  const Index m = positive_size(j, "M");
  if (!j.contains("samples")) throw Error(ErrorCode::Format, "missing samples");
  return GridFunction(m, samples_from_json(j["samples"], m * m));
}

Json signal_to_json(const PeriodicSignal& s) {
  return Json{{"N", s.size()},
              {"grid", "shifted_midpoint"},
              {"domain", "torus"},
              {"samples", samples_to_json(s.samples())}};
}

PeriodicSignal signal_from_json(const Json& j) {
  expect_field(j, "grid", "shifted_midpoint");
  const Index n = positive_size(j, "N");
  if (!j.contains("samples")) throw Error(ErrorCode::Format, "missing samples");
  return PeriodicSignal(samples_from_json(j["samples"], n));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Format, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace zakbench
