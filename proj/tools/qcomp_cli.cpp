// qcomp: predictions, K* design thresholds and Monte Carlo experiments for
// q-composite key predistribution over on/off channels.
//
// Exit codes: 0 success, 2 validation error, 3 unsupported regime, 4 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/experiments.hpp"
#include "qcomp/report.hpp"
#include "qcomp/theory.hpp"

namespace {

using namespace qcomp;

constexpr int kExitValidation = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::uint32_t n = 1000;
  std::uint32_t K = 0;
  std::uint32_t P = 10000;
  std::uint32_t q = 2;
  double p = 1.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool with_ring = true, bool with_p = true) {
  cmd->add_option("--n", f.n, "number of sensors n")->capture_default_str();
  if (with_ring) cmd->add_option("--ring,-K", f.K, "key-ring size K_n")->required();
  cmd->add_option("--pool,-P", f.P, "key-pool size P_n")->capture_default_str();
  cmd->add_option("--q", f.q, "required key overlap q")->capture_default_str();
  if (with_p) cmd->add_option("--p-on", f.p, "channel-on probability p_n")->capture_default_str();
}

ModelParams to_params(const ModelFlags& f) { return {f.n, f.K, f.P, f.q, f.p}; }

struct OutputFlags {
  std::string out;
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputFlags& o, const std::string& out_help) {
  cmd->add_option("--out", o.out, out_help);
  cmd->add_option("--format", o.format, "csv or json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->capture_default_str();
}

OutputFormat format_of(const OutputFlags& o) { return o.format == "csv" ? OutputFormat::kCsv : OutputFormat::kJsonLines; }

std::string extension(const OutputFlags& o) { return o.format == "csv" ? ".csv" : ".jsonl"; }

/// Invocation echo with --workers dropped: output must not depend on it.
std::vector<std::string> header_lines(int argc, char** argv, const std::string& config_json) {
  std::string line = "qcomp";
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--workers") {
      ++i;
      continue;
    }
    if (arg.rfind("--workers=", 0) == 0) continue;
    line += ' ' + arg;
  }
  std::vector<std::string> lines{line};
  if (!config_json.empty()) lines.push_back("config: " + config_json);
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open `" + path + "` for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing `" + path + "`");
}

/// Writes all buffers only after every one of them is ready.
void emit(const OutputFlags& o, const std::vector<std::pair<std::string, std::string>>& files,
          const std::string& stdout_content) {
  if (o.out.empty()) {
    std::cout << stdout_content;
    return;
  }
  for (const auto& [suffix, content] : files) write_file(o.out + suffix + extension(o), content);
}

void print_kv(std::ostream& out, OutputFormat fmt, const std::vector<std::pair<std::string, std::string>>& rows) {
  if (fmt == OutputFormat::kCsv) {
    out << "quantity,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    return;
  }
  out << '{';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out << ',';
    const std::string& v = rows[i].second;
    const bool numeric = !v.empty() && v.find_first_not_of("0123456789.eE+-infa") == std::string::npos &&
                         v != "inf" && v != "-inf" && v != "nan";
    out << '"' << rows[i].first << "\":" << (numeric ? v : '"' + v + '"');
  }
  out << "}\n";
}

void warn_asymptotic_conditions(const ModelParams& mp) {
  const double ln_n = std::log(static_cast<double>(mp.n));
  const double ring_ratio = static_cast<double>(mp.K) * mp.K / mp.P;
  if (ring_ratio * ln_n >= 1.0) {
    std::cerr << "warning: K^2/P * ln n = " << format_number(ring_ratio * ln_n)
              << " is not small; the asymptotic law assumes K^2/P = o(1/ln n)\n";
  }
  const double frac = static_cast<double>(mp.K) / mp.P;
  if (frac * mp.n * ln_n >= 1.0) {
    std::cerr << "warning: K/P * n ln n = " << format_number(frac * mp.n * ln_n)
              << " is not small; the asymptotic law assumes K/P = o(1/(n ln n))\n";
  }
  if (mp.K < ln_n) {
    std::cerr << "warning: K = " << mp.K << " is below ln n; the asymptotic law assumes K grows polynomially in n\n";
  }
}

int cmd_predict(const ModelFlags& f, std::uint32_t k, const OutputFlags& o) {
  const ModelParams mp = to_params(f);
  mp.validate();
  const double s = theory::exact_s_probability(mp.K, mp.P, mp.q);
  const double t = theory::exact_t_probability(mp);
  const auto pt = theory::scaling_alpha(mp.n, k, t);
  warn_asymptotic_conditions(mp);
  std::vector<std::pair<std::string, std::string>> rows{
      {"n", std::to_string(mp.n)},
      {"K", std::to_string(mp.K)},
      {"P", std::to_string(mp.P)},
      {"q", std::to_string(mp.q)},
      {"p", format_number(mp.p)},
      {"k", std::to_string(k)},
      {"s_exact", format_number(s)},
      {"t_exact", format_number(t)},
      {"s_asymptotic", format_number(theory::asymptotic_s(mp.K, mp.P, mp.q))},
      {"alpha", format_number(pt.alpha)},
      {"predicted_k_connected", format_number(theory::predicted_k_connectivity(pt.alpha, k))},
      {"predicted_min_degree_ge_k", format_number(theory::predicted_min_degree_at_least_k(pt.alpha, k))},
  };
  for (std::uint32_t h = 0; h < k; ++h) {
    rows.emplace_back("lambda_" + std::to_string(h), format_number(theory::poisson_degree_mean(mp.n, t, h)));
  }
  std::ostringstream buf;
  print_kv(buf, format_of(o), rows);
  emit(o, {{"", buf.str()}}, buf.str());
  return 0;
}

int cmd_threshold(std::uint32_t n, std::uint32_t P, std::uint32_t q, double p, std::uint32_t k, const OutputFlags& o) {
  const auto r = theory::k_star(n, P, q, p, k);
  if (r.extended_rule) {
    std::cerr << "note: k > 1 uses the threshold (ln n + (k-1) ln ln n)/n, an extension of the k = 1 design rule\n";
  }
  std::ostringstream buf;
  print_kv(buf, format_of(o),
           {{"K_star", std::to_string(r.k_star)},
            {"t_below", format_number(r.t_below)},
            {"t_at", format_number(r.t_at)},
            {"threshold", format_number(r.threshold)},
            {"rule", r.extended_rule ? "extended_k" : "connectivity"}});
  emit(o, {{"", buf.str()}}, buf.str());
  return 0;
}

std::optional<Sweep> parse_sweep(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("--sweep", "expected <field>=<start>:<end>[:<step>]");
  Sweep sw;
  sw.field = text.substr(0, eq);
  std::vector<double> parts;
  std::stringstream rest(text.substr(eq + 1));
  std::string item;
  try {
    while (std::getline(rest, item, ':')) parts.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw ValidationError("--sweep", "non-numeric range in `" + text + "`");
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ValidationError("--sweep", "expected <field>=<start>:<end>[:<step>]");
  }
  try {
    sw.values = expand_range(parts[0], parts[1], parts.size() == 3 ? parts[2] : 1.0);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("--sweep", e.what());
  }
  return sw;
}

int write_experiment(const ExperimentResult& res, const OutputFlags& o, const std::vector<std::string>& header) {
  std::ostringstream rec, sum;
  write_comment_header(rec, header);
  write_records(rec, res, format_of(o));
  write_comment_header(sum, header);
  write_summary(sum, res.summary, format_of(o));
  emit(o, {{"_records", rec.str()}, {"_summary", sum.str()}}, sum.str());
  return 0;
}

int write_summary_only(const Summary& s, const OutputFlags& o, const std::vector<std::string>& header) {
  std::ostringstream sum;
  write_comment_header(sum, header);
  write_summary(sum, s, format_of(o));
  emit(o, {{"_summary", sum.str()}}, sum.str());
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"q-composite key predistribution over on/off channels: theory and Monte Carlo"};
  app.require_subcommand(1);

  // predict
  ModelFlags pf;
  std::uint32_t pk = 1;
  OutputFlags po;
  auto* predict = app.add_subcommand("predict", "exact edge probabilities and the predicted k-connectivity probability");
  add_model_flags(predict, pf);
  predict->add_option("--k", pk, "connectivity order k")->capture_default_str()->check(CLI::PositiveNumber);
  add_output_flags(predict, po, "write the report to this file instead of stdout");

  // threshold
  std::uint32_t tn = 1000, tP = 10000, tq = 2, tk = 1;
  double tp = 1.0;
  OutputFlags to;
  auto* threshold = app.add_subcommand("threshold", "smallest key-ring size K* with t(K*) above the critical scaling");
  threshold->add_option("--n", tn, "number of sensors n")->capture_default_str();
  threshold->add_option("--pool,-P", tP, "key-pool size P_n")->capture_default_str();
  threshold->add_option("--q", tq, "required key overlap q")->capture_default_str();
  threshold->add_option("--p-on", tp, "channel-on probability p_n")->capture_default_str();
  threshold->add_option("--k", tk, "connectivity order k (k > 1 is an extension)")->capture_default_str()->check(CLI::PositiveNumber);
  add_output_flags(threshold, to, "write the report to this file instead of stdout");

  // simulate
  std::string config_path, model_name = "composed", sweep_spec;
  ModelFlags sf;
  std::optional<double> sx;
  std::vector<std::uint32_t> sk;
  std::vector<std::string> smeasure;
  std::uint64_t strials = 500;
  std::optional<std::uint64_t> sseed;
  std::uint32_t shmax = 10;
  unsigned sworkers = 0;
  OutputFlags so;
  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo experiment from a config file or flags");
  simulate->add_option("--config", config_path, "JSON experiment config (flags below are then ignored, except --workers)");
  simulate->add_option("--model", model_name,
                       "composed | uniform_q_intersection | binomial_q_intersection | erdos_renyi | coupled_pair")
      ->capture_default_str();
  add_model_flags(simulate, sf, false);
  simulate->add_option("--ring,-K", sf.K, "key-ring size K_n");
  simulate->add_option("--x", sx, "binomial key probability x_n");
  simulate->add_option("--k", sk, "k values for k_connected / min_degree_ge_k (repeatable)");
  simulate->add_option("--measure", smeasure, "measurements (repeatable); default connected");
  simulate->add_option("--trials", strials, "trials per sweep point")->capture_default_str();
  simulate->add_option("--seed", sseed, "master seed (required)");
  simulate->add_option("--sweep", sweep_spec, "<field>=<start>:<end>[:<step>]");
  simulate->add_option("--h-max", shmax, "degree census truncation")->capture_default_str();
  simulate->add_option("--workers", sworkers, "worker threads (0 = all cores); never changes output");
  add_output_flags(simulate, so, "output prefix: writes <out>_records and <out>_summary");

  // degree-dist
  ModelFlags df;
  std::uint32_t dhmax = 10;
  std::uint64_t dtrials = 500;
  std::optional<std::uint64_t> dseed;
  unsigned dworkers = 0;
  OutputFlags dout;
  auto* degree = app.add_subcommand("degree-dist", "degree census of the composed graph against Poisson means");
  add_model_flags(degree, df);
  degree->add_option("--h-max", dhmax, "largest degree tabulated")->capture_default_str();
  degree->add_option("--trials", dtrials, "trials")->capture_default_str();
  degree->add_option("--seed", dseed, "master seed")->required();
  degree->add_option("--workers", dworkers, "worker threads");
  add_output_flags(degree, dout, "output prefix: writes <out>_records and <out>_summary");

  // coupling-check
  ModelFlags cf;
  std::optional<double> cx;
  std::uint64_t ctrials = 100;
  std::optional<std::uint64_t> cseed;
  unsigned cworkers = 0;
  OutputFlags cout_flags;
  auto* coupling = app.add_subcommand("coupling-check", "uniform vs binomial ring coupling (spanning-subgraph check)");
  add_model_flags(coupling, cf, true, false);
  coupling->add_option("--x", cx, "override the binomial key probability");
  coupling->add_option("--trials", ctrials, "trials")->capture_default_str();
  coupling->add_option("--seed", cseed, "master seed")->required();
  coupling->add_option("--workers", cworkers, "worker threads");
  add_output_flags(coupling, cout_flags, "output prefix: writes <out>_summary");

  // dominance-check
  std::uint32_t mn = 500, mP = 10000, mq = 1, mk = 1;
  std::optional<std::uint32_t> mK;
  std::optional<double> mx, my;
  std::uint64_t mtrials = 500;
  std::optional<std::uint64_t> mseed;
  unsigned mworkers = 0;
  OutputFlags mo;
  auto* dominance = app.add_subcommand("dominance-check", "binomial intersection graph vs G(n, y) on monotone properties");
  dominance->add_option("--n", mn, "number of sensors n")->capture_default_str();
  dominance->add_option("--pool,-P", mP, "key-pool size P_n")->capture_default_str();
  dominance->add_option("--q", mq, "required key overlap q")->capture_default_str();
  dominance->add_option("--x", mx, "binomial key probability x_n");
  dominance->add_option("--ring,-K", mK, "derive x from K via the coupling rule when --x is absent");
  dominance->add_option("--y", my, "Erdős–Rényi edge probability (default (P x^2)^q / q!)");
  dominance->add_option("--k", mk, "min-degree order k")->capture_default_str()->check(CLI::PositiveNumber);
  dominance->add_option("--trials", mtrials, "trials")->capture_default_str();
  dominance->add_option("--seed", mseed, "master seed")->required();
  dominance->add_option("--workers", mworkers, "worker threads");
  add_output_flags(dominance, mo, "output prefix: writes <out>_summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*predict) return cmd_predict(pf, pk, po);
  if (*threshold) return cmd_threshold(tn, tP, tq, tp, tk, to);

  if (*simulate) {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot read config `" + config_path + "`");
      std::stringstream text;
      text << in.rdbuf();
      cfg = parse_config(text.str());
    } else {
      auto model = parse_model(model_name);
      if (!model) throw ValidationError("--model", "unknown model `" + model_name + "`");
      if (!sseed) throw ValidationError("--seed", "required (no implicit entropy)");
      cfg.model = *model;
      cfg.params = to_params(sf);
      cfg.x = sx;
      cfg.k_values = sk;
      cfg.trials = strials;
      cfg.master_seed = *sseed;
      cfg.h_max = shmax;
      cfg.sweep = parse_sweep(sweep_spec);
      if (!smeasure.empty()) {
        cfg.measurements.clear();
        for (const auto& m : smeasure) {
          auto parsed = parse_measurement(m);
          if (!parsed) throw ValidationError("--measure", "unknown measurement `" + m + "`");
          cfg.measurements.push_back(*parsed);
        }
      }
    }
    if (sworkers) cfg.workers = sworkers;
    cfg.validate();
    const ExperimentResult res = run(cfg);
    return write_experiment(res, so, header_lines(argc, argv, config_to_json(cfg)));
  }

  if (*degree) {
    const ModelParams mp = to_params(df);
    mp.validate();
    const auto res = degree_census_experiment(mp, dhmax, dtrials, *dseed, dworkers);
    return write_experiment(res, dout, header_lines(argc, argv, ""));
  }

  if (*coupling) {
    const ModelParams mp = to_params(cf);
    mp.validate();
    if (!cx) theory::coupling_x(mp.n, mp.K, mp.P);  // surfaces the unsupported regime before any work
    const Summary s = coupling_experiment(mp, ctrials, *cseed, cx, cworkers);
    return write_summary_only(s, cout_flags, header_lines(argc, argv, ""));
  }

  if (*dominance) {
    double x = 0.0;
    if (mx) {
      x = *mx;
    } else if (mK) {
      x = theory::coupling_x(mn, *mK, mP);
    } else {
      throw ValidationError("--x", "give --x or --ring to derive it");
    }
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("--x", "must lie in [0, 1]");
    const double y = my ? *my : theory::coupling_y(mP, x, mq);
    if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("--y", "must lie in [0, 1]");
    const Summary s = dominance_experiment({mn, x, mP, mq}, y, mk, mtrials, *mseed, mworkers);
    return write_summary_only(s, mo, header_lines(argc, argv, ""));
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const UnsupportedRegime& e) {
    std::cerr << "error: unsupported regime: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
