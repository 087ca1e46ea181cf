#include "qcomp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qcomp/connectivity.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/theory.hpp"

namespace qcomp {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Named {
  std::string_view name;
  ModelKind model;
};
constexpr Named kModels[] = {
    {"composed", ModelKind::kComposed},
    {"uniform_q_intersection", ModelKind::kUniformQIntersection},
    {"binomial_q_intersection", ModelKind::kBinomialQIntersection},
    {"erdos_renyi", ModelKind::kErdosRenyi},
    {"coupled_pair", ModelKind::kCoupledPair},
};

struct NamedMeasurement {
  std::string_view name;
  Measurement m;
};
constexpr NamedMeasurement kMeasurements[] = {
    {"connected", Measurement::kConnected},
    {"k_connected", Measurement::kKConnected},
    {"min_degree_ge_k", Measurement::kMinDegreeGeK},
    {"degree_census", Measurement::kDegreeCensus},
    {"edge_count", Measurement::kEdgeCount},
    {"coupling_ok", Measurement::kCouplingOk},
    {"subgraph_holds", Measurement::kSubgraphHolds},
};

bool is_integer_field(std::string_view f) { return f == "n" || f == "K" || f == "P" || f == "q"; }

std::string field_label(std::string_view field, std::optional<double> sweep_value) {
  std::string label = "params." + std::string(field);
  if (sweep_value) label += " (sweep value " + std::to_string(*sweep_value) + ")";
  return label;
}

void check_point(const ExperimentConfig& cfg, std::optional<double> sweep_value, std::vector<FieldError>& errs) {
  auto add = [&](std::string_view field, std::string msg) {
    errs.push_back({field_label(field, sweep_value), std::move(msg)});
  };
  PointParams pt;
  try {
    pt = params_at(cfg, sweep_value);
  } catch (const UnsupportedRegime&) {
    throw;
  } catch (const std::invalid_argument& e) {
    add("x", e.what());
    return;
  }
  const ModelParams& mp = pt.params;
  switch (cfg.model) {
    case ModelKind::kComposed:
    case ModelKind::kUniformQIntersection:
    case ModelKind::kCoupledPair:
      try {
        mp.validate();
      } catch (const ValidationError& e) {
        for (const auto& fe : e.errors()) add(fe.field, fe.message);
      }
      break;
    case ModelKind::kBinomialQIntersection:
      if (mp.n < 2) add("n", "must be >= 2");
      if (mp.P < 1) add("P", "must be >= 1");
      if (mp.q < 1) add("q", "must be >= 1");
      break;
    case ModelKind::kErdosRenyi:
      if (mp.n < 2) add("n", "must be >= 2");
      if (!(mp.p >= 0.0 && mp.p <= 1.0)) add("p", "must lie in [0, 1]");
      break;
  }
  if (cfg.model == ModelKind::kBinomialQIntersection && !pt.x) add("x", "required for the binomial model");
  if (pt.x && !(*pt.x >= 0.0 && *pt.x <= 1.0)) add("x", "must lie in [0, 1]");
}

/// Edge probability implied by theory at one point, when it has a closed form.
std::optional<double> theory_edge_probability(ModelKind model, const PointParams& pt) {
  const ModelParams& mp = pt.params;
  auto exact_s = [&]() -> std::optional<double> {
    if (2ull * mp.K > mp.P || mp.q < 1 || mp.q > mp.K) return std::nullopt;
    return theory::exact_s_probability(mp.K, mp.P, mp.q);
  };
  switch (model) {
    case ModelKind::kComposed:
      if (auto s = exact_s()) return mp.p * *s;
      return std::nullopt;
    case ModelKind::kUniformQIntersection:
    case ModelKind::kCoupledPair:
      return exact_s();
    case ModelKind::kErdosRenyi:
      return mp.p;
    case ModelKind::kBinomialQIntersection:
      return std::nullopt;
  }
  return std::nullopt;
}

struct Layout {
  std::vector<std::string> columns;
  bool connected = false;
  std::vector<std::uint32_t> k_connected;
  std::vector<std::uint32_t> min_degree;
  bool census = false;
  std::uint32_t h_max = 0;
  bool edge_count = false;
  bool coupling_ok = false;
  bool subgraph_holds = false;
};

Layout make_layout(const ExperimentConfig& cfg) {
  Layout l;
  l.h_max = cfg.h_max;
  if (cfg.measures(Measurement::kConnected)) {
    l.connected = true;
    l.columns.emplace_back("connected");
  }
  if (cfg.measures(Measurement::kKConnected)) {
    l.k_connected = cfg.k_values;
    for (auto k : cfg.k_values) l.columns.push_back("k_connected_" + std::to_string(k));
  }
  if (cfg.measures(Measurement::kMinDegreeGeK)) {
    l.min_degree = cfg.k_values;
    for (auto k : cfg.k_values) l.columns.push_back("min_degree_ge_" + std::to_string(k));
  }
  if (cfg.measures(Measurement::kDegreeCensus)) {
    l.census = true;
    for (std::uint32_t h = 0; h <= cfg.h_max; ++h) l.columns.push_back("degree_" + std::to_string(h));
    l.columns.push_back("degree_gt_" + std::to_string(cfg.h_max));
  }
  if (cfg.measures(Measurement::kEdgeCount)) {
    l.edge_count = true;
    l.columns.emplace_back("edge_count");
  }
  // subgraph_holds is summarized among coupling_ok trials, so it drags coupling_ok along
  if (cfg.measures(Measurement::kCouplingOk) || cfg.measures(Measurement::kSubgraphHolds)) {
    l.coupling_ok = true;
    l.columns.emplace_back("coupling_ok");
  }
  if (cfg.measures(Measurement::kSubgraphHolds)) {
    l.subgraph_holds = true;
    l.columns.emplace_back("subgraph_holds");
  }
  return l;
}

bool edges_contained(const Graph& small, const Graph& big) {
  for (NodeId i = 0; i < small.node_count(); ++i) {
    auto a = small.neighbors(i);
    auto b = big.neighbors(i);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

std::vector<std::int64_t> measure_trial(const ExperimentConfig& cfg, const Layout& layout, const PointParams& pt,
                                        const Seed& seed) {
  const ModelParams& mp = pt.params;
  Graph g;
  bool coupling_ok = false;
  bool subgraph_holds = false;
  switch (cfg.model) {
    case ModelKind::kComposed:
      g = sample_composed(mp, seed);
      break;
    case ModelKind::kUniformQIntersection:
      g = intersection_graph(sample_uniform_rings(mp, seed), mp.q);
      break;
    case ModelKind::kBinomialQIntersection:
      g = intersection_graph(sample_binomial_rings(mp.P, *pt.x, mp.n, seed), mp.q);
      break;
    case ModelKind::kErdosRenyi:
      g = sample_er(mp.n, mp.p, seed);
      break;
    case ModelKind::kCoupledPair: {
      CoupledPair pair = sample_coupled_pair(mp, *pt.x, seed);
      g = intersection_graph(pair.uniform_rings, mp.q);
      coupling_ok = pair.coupling_ok;
      if (layout.subgraph_holds) subgraph_holds = edges_contained(intersection_graph(pair.binomial_rings, mp.q), g);
      break;
    }
  }

  std::vector<std::int64_t> values;
  values.reserve(layout.columns.size());
  if (layout.connected) values.push_back(is_connected(g));
  std::vector<bool> kcon;
  for (auto k : layout.k_connected) {
    kcon.push_back(is_k_connected(g, k));
    values.push_back(kcon.back());
  }
  const std::size_t delta = min_degree(g);
  for (std::size_t idx = 0; idx < layout.min_degree.size(); ++idx) {
    const auto k = layout.min_degree[idx];
    values.push_back(delta >= k);
  }
  // k-connected => min degree >= k, and => (k-1)-connected
  for (std::size_t idx = 0; idx < kcon.size(); ++idx) {
    const auto k = layout.k_connected[idx];
    if (!kcon[idx]) continue;
    if (delta < k || (k >= 2 && !is_k_connected(g, k - 1))) {
      throw std::logic_error("k-connectivity sandwich violated at k = " + std::to_string(k));
    }
  }
  if (layout.census) {
    std::vector<std::int64_t> counts(layout.h_max + 2, 0);
    for (NodeId i = 0; i < g.node_count(); ++i) ++counts[std::min<std::size_t>(g.degree(i), layout.h_max + 1)];
    values.insert(values.end(), counts.begin(), counts.end());
  }
  if (layout.edge_count) values.push_back(static_cast<std::int64_t>(g.edge_count()));
  if (layout.coupling_ok) values.push_back(coupling_ok);
  if (layout.subgraph_holds) {
    if (coupling_ok && !subgraph_holds) throw std::logic_error("coupling_ok trial without subgraph containment");
    values.push_back(subgraph_holds);
  }
  return values;
}

SummaryRow proportion_row(std::optional<double> sv, std::string name, std::uint64_t successes, std::uint64_t trials,
                          std::optional<double> theory) {
  SummaryRow row{sv, std::move(name), 0.0, std::nullopt, std::nullopt, trials, theory};
  if (trials > 0) {
    row.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    const Interval ci = wilson_interval(successes, trials);
    row.ci_low = ci.low;
    row.ci_high = ci.high;
  }
  return row;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased sample variance
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<double>(xs.size() - 1);
  }
  return m;
}

SummaryRow mean_row(std::optional<double> sv, std::string name, const std::vector<double>& xs,
                    std::optional<double> theory) {
  const Moments m = moments(xs);
  const double half = kZ95 * std::sqrt(m.variance / static_cast<double>(std::max<std::size_t>(xs.size(), 1)));
  return {sv, std::move(name), m.mean, m.mean - half, m.mean + half, xs.size(), theory};
}

void summarize_point(const ExperimentConfig& cfg, const Layout& layout, const ExperimentResult& res,
                     std::size_t first, std::size_t count, std::optional<double> sv, Summary& out) {
  const PointParams pt = params_at(cfg, sv);
  const std::optional<double> t = theory_edge_probability(cfg.model, pt);
  const std::uint32_t n = pt.params.n;

  auto column_values = [&](std::size_t col) {
    std::vector<double> xs;
    xs.reserve(count);
    for (std::size_t r = first; r < first + count; ++r) xs.push_back(static_cast<double>(res.records[r].values[col]));
    return xs;
  };
  auto successes = [&](std::size_t col) {
    std::uint64_t s = 0;
    for (std::size_t r = first; r < first + count; ++r) s += res.records[r].values[col] != 0;
    return s;
  };
  auto k_prediction = [&](std::uint32_t k) -> std::optional<double> {
    if (!t || n < 3) return std::nullopt;
    return theory::predicted_k_connectivity(theory::scaling_alpha(n, k, *t).alpha, k);
  };

  std::size_t col = 0;
  if (layout.connected) {
    out.rows.push_back(proportion_row(sv, "connected", successes(col), count, k_prediction(1)));
    ++col;
  }
  for (auto k : layout.k_connected) {
    out.rows.push_back(proportion_row(sv, res.columns[col], successes(col), count, k_prediction(k)));
    ++col;
  }
  for (auto k : layout.min_degree) {
    std::optional<double> pred;
    if (t && n >= 3) pred = theory::predicted_min_degree_at_least_k(theory::scaling_alpha(n, k, *t).alpha, k);
    out.rows.push_back(proportion_row(sv, res.columns[col], successes(col), count, pred));
    ++col;
  }
  if (layout.census) {
    for (std::uint32_t h = 0; h <= layout.h_max; ++h, ++col) {
      std::optional<double> lambda;
      if (t) lambda = theory::poisson_degree_mean(n, *t, h);
      const auto xs = column_values(col);
      out.rows.push_back(mean_row(sv, res.columns[col], xs, lambda));
      out.rows.push_back({sv, res.columns[col] + "_variance", moments(xs).variance, std::nullopt, std::nullopt,
                          xs.size(), lambda});
    }
    out.rows.push_back(mean_row(sv, res.columns[col], column_values(col), std::nullopt));
    ++col;
  }
  if (layout.edge_count) {
    std::optional<double> expected;
    if (t) expected = 0.5 * n * (n - 1.0) * *t;
    out.rows.push_back(mean_row(sv, "edge_count", column_values(col), expected));
    ++col;
  }
  std::optional<std::size_t> ok_col;
  if (layout.coupling_ok) {
    ok_col = col;
    out.rows.push_back(proportion_row(sv, "coupling_ok", successes(col), count, std::nullopt));
    ++col;
  }
  if (layout.subgraph_holds) {
    std::uint64_t ok = 0;
    std::uint64_t holds = 0;
    for (std::size_t r = first; r < first + count; ++r) {
      if (res.records[r].values[*ok_col] == 0) continue;
      ++ok;
      holds += res.records[r].values[col] != 0;
    }
    out.rows.push_back(proportion_row(sv, "subgraph_holds", holds, ok, std::nullopt));
    ++col;
  }
}

}  // namespace

std::string_view to_string(ModelKind m) {
  for (const auto& e : kModels) {
    if (e.model == m) return e.name;
  }
  return "unknown";
}

std::string_view to_string(Measurement m) {
  for (const auto& e : kMeasurements) {
    if (e.m == m) return e.name;
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view s) {
  for (const auto& e : kModels) {
    if (e.name == s) return e.model;
  }
  return std::nullopt;
}

std::optional<Measurement> parse_measurement(std::string_view s) {
  for (const auto& e : kMeasurements) {
    if (e.name == s) return e.m;
  }
  return std::nullopt;
}

bool ExperimentConfig::measures(Measurement m) const {
  return std::find(measurements.begin(), measurements.end(), m) != measurements.end();
}

PointParams params_at(const ExperimentConfig& config, std::optional<double> sweep_value) {
  PointParams pt{config.params, config.x};
  if (sweep_value && config.sweep) {
    const std::string& f = config.sweep->field;
    const double v = *sweep_value;
    if (f == "n") pt.params.n = static_cast<std::uint32_t>(v);
    else if (f == "K") pt.params.K = static_cast<std::uint32_t>(v);
    else if (f == "P") pt.params.P = static_cast<std::uint32_t>(v);
    else if (f == "q") pt.params.q = static_cast<std::uint32_t>(v);
    else if (f == "p") pt.params.p = v;
    else if (f == "x") pt.x = v;
  }
  if (config.model == ModelKind::kCoupledPair && !pt.x) {
    pt.x = theory::coupling_x(pt.params.n, pt.params.K, pt.params.P);
  }
  return pt;
}

void ExperimentConfig::validate() const {
  std::vector<FieldError> errs;
  if (trials < 1) errs.push_back({"trials", "must be >= 1"});
  if (measurements.empty()) errs.push_back({"measurements", "must list at least one measurement"});
  const bool needs_k = measures(Measurement::kKConnected) || measures(Measurement::kMinDegreeGeK);
  if (needs_k && k_values.empty()) errs.push_back({"k_values", "required by k_connected / min_degree_ge_k"});
  for (auto k : k_values) {
    if (k < 1) errs.push_back({"k_values", "entries must be >= 1"});
  }
  if ((measures(Measurement::kCouplingOk) || measures(Measurement::kSubgraphHolds)) && model != ModelKind::kCoupledPair) {
    errs.push_back({"measurements", "coupling_ok / subgraph_holds need model coupled_pair"});
  }
  if (sweep) {
    static constexpr std::string_view kFields[] = {"n", "K", "P", "q", "p", "x"};
    if (std::find(std::begin(kFields), std::end(kFields), sweep->field) == std::end(kFields)) {
      errs.push_back({"sweep.field", "must be one of n, K, P, q, p, x; got `" + sweep->field + "`"});
    }
    if (sweep->values.empty()) errs.push_back({"sweep.values", "must not be empty"});
    for (double v : sweep->values) {
      if (is_integer_field(sweep->field) && (v < 0 || v != std::floor(v) || v > 4294967295.0)) {
        errs.push_back({"sweep.values", "field " + sweep->field + " takes non-negative integers, got " + std::to_string(v)});
      }
    }
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));

  if (sweep) {
    for (double v : sweep->values) check_point(*this, v, errs);
  } else {
    check_point(*this, std::nullopt, errs);
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
}

const SummaryRow& Summary::at(std::string_view measurement, std::optional<double> sweep_value) const {
  for (const auto& row : rows) {
    if (row.measurement == measurement && row.sweep_value == sweep_value) return row;
  }
  throw std::out_of_range("no summary row for measurement `" + std::string(measurement) + "`");
}

std::size_t ExperimentResult::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column `" + std::string(name) + "`");
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half = kZ95 * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::clamp(std::min(center - half, phat), 0.0, 1.0), std::clamp(std::max(center + half, phat), 0.0, 1.0)};
}

Seed trial_seed(std::uint64_t master_seed, std::optional<double> sweep_value, std::uint64_t trial_index) {
  const std::uint64_t point_tag = sweep_value ? std::bit_cast<std::uint64_t>(*sweep_value) : 0x5eedULL;
  return {mix_seed({master_seed, point_tag, sweep_value.has_value()}), trial_index};
}

ExperimentResult run(const ExperimentConfig& config) {
  config.validate();
  const Layout layout = make_layout(config);

  std::vector<std::optional<double>> points;
  if (config.sweep) {
    points.assign(config.sweep->values.begin(), config.sweep->values.end());
  } else {
    points.emplace_back(std::nullopt);
  }
  std::vector<PointParams> point_params;
  for (const auto& sv : points) point_params.push_back(params_at(config, sv));

  ExperimentResult res;
  res.columns = layout.columns;
  const std::uint64_t trials = config.trials;
  const std::size_t total = points.size() * trials;
  res.records.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t point = job / trials;
      const std::uint64_t trial = job % trials;
      try {
        TrialRecord& rec = res.records[job];
        rec.sweep_value = points[point];
        rec.trial_index = trial;
        rec.values = measure_trial(config, layout, point_params[point], trial_seed(config.master_seed, points[point], trial));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t p = 0; p < points.size(); ++p) {
    summarize_point(config, layout, res, p * trials, trials, points[p], res.summary);
  }
  return res;
}

Summary coupling_experiment(const ModelParams& params, std::uint64_t trials, std::uint64_t master_seed,
                            std::optional<double> x_override, unsigned workers) {
  ExperimentConfig cfg;
  cfg.model = ModelKind::kCoupledPair;
  cfg.params = params;
  cfg.x = x_override ? x_override : std::optional(theory::coupling_x(params.n, params.K, params.P));
  cfg.trials = trials;
  cfg.master_seed = master_seed;
  cfg.measurements = {Measurement::kCouplingOk, Measurement::kSubgraphHolds};
  cfg.workers = workers;
  return run(cfg).summary;
}

Summary dominance_experiment(const BinomialParams& h, double y, std::uint32_t k, std::uint64_t trials,
                             std::uint64_t master_seed, unsigned workers) {
  ExperimentConfig hcfg;
  hcfg.model = ModelKind::kBinomialQIntersection;
  hcfg.params = {h.n, 0, h.P, h.q, 1.0};
  hcfg.x = h.x;
  hcfg.k_values = {k};
  hcfg.trials = trials;
  hcfg.master_seed = master_seed;
  hcfg.measurements = {Measurement::kConnected, Measurement::kMinDegreeGeK};
  hcfg.workers = workers;

  ExperimentConfig gcfg = hcfg;
  gcfg.model = ModelKind::kErdosRenyi;
  gcfg.params.p = y;
  gcfg.x.reset();
  gcfg.master_seed = mix_seed({master_seed, 0xd0d0ULL});

  const Summary hs = run(hcfg).summary;
  const Summary gs = run(gcfg).summary;

  Summary out;
  const std::string min_name = "min_degree_ge_" + std::to_string(k);
  for (const std::string& name : {std::string("connected"), min_name}) {
    SummaryRow hr = hs.at(name);
    SummaryRow gr = gs.at(name);
    const double nt = static_cast<double>(trials);
    const double se = std::sqrt(hr.estimate * (1 - hr.estimate) / nt + gr.estimate * (1 - gr.estimate) / nt);
    const double diff = hr.estimate - gr.estimate;
    hr.measurement = "binomial_" + name;
    gr.measurement = "erdos_renyi_" + name;
    out.rows.push_back(hr);
    out.rows.push_back(gr);
    out.rows.push_back({std::nullopt, "diff_" + name, diff, diff - kZ95 * se, diff + kZ95 * se, trials, std::nullopt});
  }
  return out;
}

ExperimentResult degree_census_experiment(const ModelParams& params, std::uint32_t h_max, std::uint64_t trials,
                                          std::uint64_t master_seed, unsigned workers) {
  ExperimentConfig cfg;
  cfg.model = ModelKind::kComposed;
  cfg.params = params;
  cfg.trials = trials;
  cfg.master_seed = master_seed;
  cfg.measurements = {Measurement::kDegreeCensus};
  cfg.h_max = h_max;
  cfg.workers = workers;
  return run(cfg);
}

}  // namespace qcomp
