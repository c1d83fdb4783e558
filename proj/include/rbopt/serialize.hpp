#pragma once

#include <string>

#include "json.hpp"
#include "rbopt/driver.hpp"
#include "rbopt/experiment.hpp"

namespace rbopt {

using Json = nlohmann::json;

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

Json surrogate_to_json(const QuadraticSurrogate& s);
Json counters_to_json(const EvalCounters& c);
Json iteration_to_json(const IterationRecord& r);
Json run_result_to_json(const RunResult& r);

/// Per-run row without wall time (wall time lives only in the CSVs, so the
/// JSON artifacts stay byte-identical across repeated runs).
Json run_row_to_json(const RunRow& row);
Json summary_to_json(const ExperimentSummary& summary);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Fixed-width full-precision formatting for CSV cells (17 significant
/// digits, lossless for doubles).
std::string format_full(double v);

}  // namespace rbopt
