#pragma once

// JSON serialization of diagnostics reports and of the GridFunction and
// PeriodicSignal file formats.
//
// GridFunction file:
//   {"M": 128, "grid": "midpoint", "domain": "unit_square",
//    "samples": [[re, im], ...]}            // row-major, M*M entries
// PeriodicSignal file:
//   {"N": 64, "grid": "shifted_midpoint", "domain": "torus",
//    "samples": [[re, im], ...]}

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "zakbench/expsys.hpp"
#include "zakbench/reproducing.hpp"
#include "zakbench/zak.hpp"

namespace zakbench {

using Json = nlohmann::ordered_json;

Json to_json(const SweepReport& r);
Json to_json(const WeightHypothesisLadder& l);
Json to_json(const EnkBoundReport& r);
Json to_json(const QuotientReport& r);
Json to_json(const TaylorBound& t);
Json to_json(const ReproducingPairCheck& c);
Json to_json(const ExcessOneReport& r);
Json to_json(const ExcessNReport& r);

Json grid_to_json(const GridFunction& g);
GridFunction grid_from_json(const Json& j);
Json signal_to_json(const PeriodicSignal& s);
PeriodicSignal signal_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; throws Io on failure.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace zakbench
