#include "qcomp/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

using nlohmann::json;

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

json json_value(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_comment_header(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

void write_records(std::ostream& out, const ExperimentResult& result, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    out << "sweep_value,trial_index";
    for (const auto& c : result.columns) out << ',' << c;
    out << '\n';
    for (const auto& r : result.records) {
      out << cell(r.sweep_value) << ',' << r.trial_index;
      for (auto v : r.values) out << ',' << v;
      out << '\n';
    }
    return;
  }
  for (const auto& r : result.records) {
    json row = json::object();
    row["sweep_value"] = json_value(r.sweep_value);
    row["trial_index"] = r.trial_index;
    for (std::size_t i = 0; i < result.columns.size(); ++i) row[result.columns[i]] = r.values[i];
    out << row.dump() << '\n';
  }
}

void write_summary(std::ostream& out, const Summary& summary, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    out << "sweep_value,measurement,estimate,ci_low,ci_high,trials,theory_prediction\n";
    for (const auto& r : summary.rows) {
      out << cell(r.sweep_value) << ',' << r.measurement << ',' << format_number(r.estimate) << ','
          << cell(r.ci_low) << ',' << cell(r.ci_high) << ',' << r.trials << ',' << cell(r.theory_prediction)
          << '\n';
    }
    return;
  }
  for (const auto& r : summary.rows) {
    // numbers go through format_number so both formats carry the same digits
    auto num = [](const std::optional<double>& v) { return v ? json::parse(format_number(*v)) : json(nullptr); };
    json row = {{"sweep_value", num(r.sweep_value)}, {"measurement", r.measurement},
                {"estimate", num(r.estimate)},        {"ci_low", num(r.ci_low)},
                {"ci_high", num(r.ci_high)},          {"trials", r.trials},
                {"theory_prediction", num(r.theory_prediction)}};
    out << row.dump() << '\n';
  }
}

std::vector<double> expand_range(double start, double end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  if (end < start) throw std::invalid_argument("range end precedes start");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("<document>", e.what());
  }
  if (!doc.is_object()) throw ValidationError("<document>", "top level must be an object");

  ExperimentConfig cfg;
  std::vector<FieldError> errs;

  auto read = [&](const json& node, const std::string& path, auto& target) {
    using T = std::remove_reference_t<decltype(target)>;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!node.is_number()) throw std::invalid_argument("expected a number");
        target = node.get<double>();
      } else {
        if (!node.is_number_unsigned()) {
          throw std::invalid_argument("expected a non-negative integer");
        }
        target = node.get<T>();
      }
    } catch (const std::exception& e) {
      errs.push_back({path, e.what()});
    }
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "model") {
      auto m = value.is_string() ? parse_model(value.get<std::string>()) : std::nullopt;
      if (!m) {
        errs.push_back({"model", "expected one of composed, uniform_q_intersection, binomial_q_intersection, "
                                 "erdos_renyi, coupled_pair"});
      } else {
        cfg.model = *m;
      }
    } else if (key == "params") {
      if (!value.is_object()) {
        errs.push_back({"params", "expected an object"});
        continue;
      }
      for (const auto& [pk, pv] : value.items()) {
        const std::string path = "params." + pk;
        if (pk == "n") read(pv, path, cfg.params.n);
        else if (pk == "K") read(pv, path, cfg.params.K);
        else if (pk == "P") read(pv, path, cfg.params.P);
        else if (pk == "q") read(pv, path, cfg.params.q);
        else if (pk == "p") read(pv, path, cfg.params.p);
        else if (pk == "x") {
          double x = 0.0;
          read(pv, path, x);
          cfg.x = x;
        } else errs.push_back({path, "unknown parameter"});
      }
    } else if (key == "sweep") {
      if (!value.is_object() || !value.contains("field") || !value["field"].is_string()) {
        errs.push_back({"sweep", "expected {\"field\": ..., \"values\": [...]} or start/end/step"});
        continue;
      }
      Sweep sw;
      sw.field = value["field"].get<std::string>();
      if (value.contains("values")) {
        if (!value["values"].is_array()) {
          errs.push_back({"sweep.values", "expected an array"});
        } else {
          for (const auto& v : value["values"]) {
            double d = 0.0;
            read(v, "sweep.values", d);
            sw.values.push_back(d);
          }
        }
      } else {
        double start = 0, end = 0, step = 1;
        if (!value.contains("start") || !value.contains("end")) {
          errs.push_back({"sweep", "needs values or start/end"});
        } else {
          read(value["start"], "sweep.start", start);
          read(value["end"], "sweep.end", end);
          if (value.contains("step")) read(value["step"], "sweep.step", step);
          try {
            sw.values = expand_range(start, end, step);
          } catch (const std::exception& e) {
            errs.push_back({"sweep", e.what()});
          }
        }
      }
      cfg.sweep = std::move(sw);
    } else if (key == "k_values") {
      cfg.k_values.clear();
      if (!value.is_array()) {
        errs.push_back({"k_values", "expected an array"});
        continue;
      }
      for (const auto& v : value) {
        std::uint32_t k = 0;
        read(v, "k_values", k);
        cfg.k_values.push_back(k);
      }
    } else if (key == "trials") {
      read(value, "trials", cfg.trials);
    } else if (key == "master_seed") {
      read(value, "master_seed", cfg.master_seed);
    } else if (key == "h_max") {
      read(value, "h_max", cfg.h_max);
    } else if (key == "workers") {
      read(value, "workers", cfg.workers);
    } else if (key == "measurements") {
      cfg.measurements.clear();
      if (!value.is_array()) {
        errs.push_back({"measurements", "expected an array"});
        continue;
      }
      for (const auto& v : value) {
        auto m = v.is_string() ? parse_measurement(v.get<std::string>()) : std::nullopt;
        if (!m) {
          errs.push_back({"measurements", "unknown measurement " + v.dump()});
        } else {
          cfg.measurements.push_back(*m);
        }
      }
    } else {
      errs.push_back({key, "unknown field"});
    }
  }
  if (!doc.contains("master_seed")) errs.push_back({"master_seed", "required (no implicit entropy)"});
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return cfg;
}

}  // namespace qcomp

namespace qcomp {

std::string config_to_json(const ExperimentConfig& config) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["model"] = std::string(to_string(config.model));
  ordered_json params;
  params["n"] = config.params.n;
  params["K"] = config.params.K;
  params["P"] = config.params.P;
  params["q"] = config.params.q;
  params["p"] = config.params.p;
  if (config.x) params["x"] = *config.x;
  doc["params"] = params;
  if (config.sweep) doc["sweep"] = {{"field", config.sweep->field}, {"values", config.sweep->values}};
  doc["k_values"] = config.k_values;
  doc["trials"] = config.trials;
  doc["master_seed"] = config.master_seed;
  ordered_json ms = ordered_json::array();
  for (auto m : config.measurements) ms.push_back(std::string(to_string(m)));
  doc["measurements"] = ms;
  doc["h_max"] = config.h_max;
  return doc.dump();
}

}  // namespace qcomp
