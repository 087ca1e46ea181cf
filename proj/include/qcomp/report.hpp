#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/experiments.hpp"

namespace qcomp {

enum class OutputFormat { kCsv, kJsonLines };

/// Floating values use 9 significant digits; absent values are empty cells
/// (CSV) or null (JSON lines).
std::string format_number(double v);

/// Header: sweep_value,trial_index,<measurement columns>.
void write_records(std::ostream& out, const ExperimentResult& result, OutputFormat format = OutputFormat::kCsv);

/// Header: sweep_value,measurement,estimate,ci_low,ci_high,trials,theory_prediction.
void write_summary(std::ostream& out, const Summary& summary, OutputFormat format = OutputFormat::kCsv);

/// `# ` prefixed comment rows, one per line of `lines`.
void write_comment_header(std::ostream& out, const std::vector<std::string>& lines);

/// Parses an ExperimentConfig from a JSON document whose keys mirror the
/// struct's field names:
///
///   {"model": "composed",
///    "params": {"n": 1000, "K": 35, "P": 10000, "q": 2, "p": 1.0, "x": 0.1},
///    "sweep": {"field": "K", "values": [30, 35]}   // or start/end/step
///    "k_values": [1, 2], "trials": 500, "master_seed": 7,
///    "measurements": ["connected", "k_connected"], "h_max": 10, "workers": 4}
///
/// Throws ValidationError naming each malformed or unknown field. Semantic
/// checks are left to ExperimentConfig::validate().
ExperimentConfig parse_config(std::string_view json_text);

/// Values start, start+step, ..., up to and including end (within 1e-9 of a step).
std::vector<double> expand_range(double start, double end, double step);

}  // namespace qcomp

namespace qcomp {

/// Canonical JSON form of a config (parse_config round-trips it). Omits
/// `workers`, which never affects results.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace qcomp
