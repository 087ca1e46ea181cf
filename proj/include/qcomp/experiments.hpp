#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/models.hpp"

namespace qcomp {

enum class ModelKind { kComposed, kUniformQIntersection, kBinomialQIntersection, kErdosRenyi, kCoupledPair };

enum class Measurement {
  kConnected,
  kKConnected,
  kMinDegreeGeK,
  kDegreeCensus,
  kEdgeCount,
  kCouplingOk,
  kSubgraphHolds,
};

std::string_view to_string(ModelKind m);
std::string_view to_string(Measurement m);
std::optional<ModelKind> parse_model(std::string_view s);
std::optional<Measurement> parse_measurement(std::string_view s);

/// One swept ModelParams field (n, K, P, q, p or x) and its values.
struct Sweep {
  std::string field;
  std::vector<double> values;
};

struct ExperimentConfig {
  ModelKind model = ModelKind::kComposed;
  ModelParams params;
  /// Binomial key probability; required for the binomial model. For the
  /// coupled pair it defaults to theory::coupling_x(n, K, P).
  std::optional<double> x;
  std::optional<Sweep> sweep;
  std::vector<std::uint32_t> k_values;
  std::uint64_t trials = 500;
  std::uint64_t master_seed = 0;
  std::vector<Measurement> measurements{Measurement::kConnected};
  std::uint32_t h_max = 10;
  /// 0 = one worker per hardware thread. Never affects results.
  unsigned workers = 0;

  /// Throws ValidationError listing every offending field, including
  /// per-sweep-value parameter checks.
  void validate() const;

  bool measures(Measurement m) const;
};

/// Model parameters at one sweep point.
struct PointParams {
  ModelParams params;
  std::optional<double> x;
};

PointParams params_at(const ExperimentConfig& config, std::optional<double> sweep_value);

/// One trial's measurements; `values` is aligned with ExperimentResult::columns.
/// Booleans are stored as 0/1.
struct TrialRecord {
  std::optional<double> sweep_value;
  std::uint64_t trial_index = 0;
  std::vector<std::int64_t> values;
};

struct SummaryRow {
  std::optional<double> sweep_value;
  std::string measurement;
  double estimate = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::uint64_t trials = 0;
  std::optional<double> theory_prediction;
};

struct Summary {
  std::vector<SummaryRow> rows;

  /// First row matching (measurement, sweep value); throws std::out_of_range.
  const SummaryRow& at(std::string_view measurement, std::optional<double> sweep_value = std::nullopt) const;
};

struct ExperimentResult {
  std::vector<std::string> columns;
  std::vector<TrialRecord> records;  ///< sweep-point-major, trial_index ascending
  Summary summary;

  /// Index of a measurement column; throws std::out_of_range.
  std::size_t column(std::string_view name) const;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Per-trial seed: the sampler Seed for (master_seed, sweep value, trial).
Seed trial_seed(std::uint64_t master_seed, std::optional<double> sweep_value, std::uint64_t trial_index);

/// Runs every trial at every sweep point and aggregates. Output is identical
/// for any worker count.
ExperimentResult run(const ExperimentConfig& config);

/// Coupling check: coupled uniform/binomial draws with x = coupling_x
/// (or `x_override`), reporting coupling_ok and, among ok trials,
/// subgraph_holds.
Summary coupling_experiment(const ModelParams& params, std::uint64_t trials, std::uint64_t master_seed,
                            std::optional<double> x_override = std::nullopt, unsigned workers = 0);

struct BinomialParams {
  std::uint32_t n = 0;
  double x = 0.0;
  std::uint32_t P = 0;
  std::uint32_t q = 1;
};

/// Statistical dominance of H_q(n, x, P) over G(n, y) on monotone
/// properties: rows binomial_*, erdos_renyi_* and diff_* (binomial minus
/// Erdős–Rényi) for connectivity and min degree >= k.
Summary dominance_experiment(const BinomialParams& h, double y, std::uint32_t k, std::uint64_t trials,
                             std::uint64_t master_seed, unsigned workers = 0);

/// Degree census of the composed graph against the Poisson means.
ExperimentResult degree_census_experiment(const ModelParams& params, std::uint32_t h_max, std::uint64_t trials,
                                          std::uint64_t master_seed, unsigned workers = 0);

}  // namespace qcomp
