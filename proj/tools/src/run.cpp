#include "ngls_cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ngls/approximation.hpp"
#include "ngls/config.hpp"
#include "ngls/dimension.hpp"
#include "ngls/errors.hpp"
#include "ngls/expansion.hpp"
#include "ngls/measure.hpp"

namespace ngls::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int thread_cap() {
  if (const char* env = std::getenv("NGLS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<int64_t> parse_word(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty digit word");
  std::vector<int64_t> word;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    size_t used = 0;
    const int64_t b = std::stoll(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad digit: " + item);
    }
    word.push_back(b);
  }
  return word;
}

struct Options {
  std::string config_path;
  std::string alpha_spec;
  std::string omega_spec;
  std::string out_path;
  std::string word_text;
  std::string x_text;
  std::string symbol_id;
  std::string sigma_id;
  uint64_t seed = 0;
  int64_t seeds = 1;
  int64_t stride = 1;
  int64_t M = 200;
  int64_t horizon = int64_t{1} << 20;
  int64_t schedule_horizon = 0;
  int exact_depth = kDefaultExactDepth;
  double eps_window = 0.05;
  double t = 0.0;
  int64_t m = 1;
  int64_t m_hi = 0;
  int64_t n = 0;
  int64_t depth = 0;
  int64_t budget = 1'000'000;
  int64_t digits = 1000;
  double eps = 0.1;
  double delta = 0.9;
  double gamma = 1.5;
  bool raw = false;
  bool summary = false;
};

struct Loaded {
  Family family;
  json family_json;
  std::string omega_spec;
  OmegaRule rule;
};

std::string default_omega(const Family& family) {
  std::string spec = "periodic:";
  for (int s = 0; s < family.size(); ++s) {
    if (s > 0) spec += ',';
    spec += family[s].id();
  }
  return spec;
}

Loaded load(const Options& o) {
  if (o.config_path.empty()) {
    throw ConfigError("--config", "a family config file is required");
  }
  Family family = load_family(o.config_path);
  const std::string omega_spec =
      o.omega_spec.empty() ? default_omega(family) : o.omega_spec;
  OmegaRule rule = parse_omega(family, omega_spec, o.seed);
  json fam_json = json::parse(family_to_json(family));
  return Loaded{std::move(family), std::move(fam_json), omega_spec,
                std::move(rule)};
}

json config_block(const char* command, const Loaded& loaded,
                  const Options& o, json params) {
  json cfg{{"family", loaded.family_json},
           {"omega", loaded.omega_spec},
           {"seed", o.seed},
           {"params", std::move(params)}};
  if (!o.alpha_spec.empty()) cfg["alpha"] = o.alpha_spec;
  return json{{"version", kVersion}, {"command", command},
              {"config", std::move(cfg)}};
}

void emit(const Options& o, std::ostream& fallback, const std::string& text) {
  if (o.out_path.empty() || o.out_path == "-") {
    fallback << text;
    return;
  }
  std::ofstream file(o.out_path);
  if (!file) {
    throw std::invalid_argument("cannot write to " + o.out_path);
  }
  file << text;
}

void emit_report(const Options& o, std::ostream& fallback, json report,
                 json result) {
  report["result"] = std::move(result);
  emit(o, fallback, report.dump(2) + "\n");
}

void emit_trace(const Options& o, std::ostream& fallback, const json& report,
                const std::string& header,
                const std::vector<std::string>& rows) {
  std::string text = "# " + report.dump() + "\n" + header + "\n";
  for (const std::string& row : rows) {
    text += row;
    text += '\n';
  }
  emit(o, fallback, text);
}

std::string trace_row(const TraceRow& r) {
  return std::to_string(r.n) + "," + fmt(r.log_mass) + "," +
         fmt(r.log_length) + "," + fmt(r.ratio) + "," + fmt(r.comparator);
}

int resolve_symbol(const Family& family, const std::string& id,
                   const char* flag) {
  if (!id.empty()) return family.index_of(id);
  if (family.size() == 1) return 0;
  throw ConfigError(flag, "the family has several symbols; name one");
}

double comparator_beta(const Family& family, const FrequencyVector& alpha,
                       int64_t M) {
  try {
    return beta(family, alpha, M).value;
  } catch (const GuardError&) {
    return 0.0;
  }
}

std::vector<std::vector<int64_t>> frequency_streams(
    const Family& family, const FrequencyVector& alpha, OmegaSequence& omega,
    int64_t n) {
  omega.ensure(n);
  const std::span<const int> pref = omega.prefix(n);
  std::vector<int64_t> counts(static_cast<size_t>(family.size()), 0);
  for (int64_t i = 0; i < n; ++i) {
    ++counts[static_cast<size_t>(pref[static_cast<size_t>(i)])];
  }
  std::vector<std::vector<int64_t>> streams(
      static_cast<size_t>(family.size()));
  for (int s = 0; s < family.size(); ++s) {
    if (counts[static_cast<size_t>(s)] > 0) {
      streams[static_cast<size_t>(s)] = frequency_sequence(
          alpha.conditional_law(s), counts[static_cast<size_t>(s)]);
    }
  }
  return streams;
}

json branch_json(const ApproxBranch& br) {
  json node{{"digit", br.digit}, {"merged", br.merged},
            {"lo", br.lo},       {"hi", br.hi},
            {"log_N", br.log_N}};
  if (br.lo_exact) node["lo_exact"] = to_string(*br.lo_exact);
  if (br.hi_exact) node["hi_exact"] = to_string(*br.hi_exact);
  if (br.ratio_exact) node["ratio_exact"] = to_string(*br.ratio_exact);
  return node;
}

void cmd_eta(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  json params{{"horizon", o.horizon}, {"extrapolate", !o.raw}};
  json per = json::array();
  double eta_T = 0.0;
  for (int s = 0; s < loaded.family.size(); ++s) {
    const EtaResult r = eta(loaded.family[s], o.horizon, !o.raw);
    eta_T = std::max(eta_T, r.value);
    per.push_back(json{{"id", loaded.family[s].id()},
                       {"value", r.value},
                       {"raw", r.raw},
                       {"analytic", r.analytic}});
  }
  emit_report(o, out, config_block("eta", loaded, o, params),
              json{{"per_symbol", per},
                   {"eta_T", eta_T},
                   {"eta_T_analytic", loaded.family.eta_max()}});
}

void cmd_beta(const Options& o, std::ostream& out, bool csv) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  json params{{"M", o.M}};
  const BetaResult b = beta(loaded.family, alpha, o.M);
  const json report = config_block("beta", loaded, o, params);
  if (csv) {
    std::vector<std::string> rows;
    for (const BetaRow& r : b.trace) {
      rows.push_back(std::to_string(r.m) + "," + fmt(r.numerator) + "," +
                     fmt(r.denominator) + "," + fmt(r.value));
    }
    emit_trace(o, out, report, "m,numerator,denominator,value", rows);
    return;
  }
  emit_report(o, out, report,
              json{{"value", b.value},
                   {"oscillation", b.oscillation},
                   {"divergent", b.lyapunov_divergent}});
}

void cmd_dim(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  const DimensionReport r = dim_formula(loaded.family, alpha, o.M);
  emit_report(o, out, config_block("dim", loaded, o, json{{"M", o.M}}),
              json{{"eta", r.eta_T},
                   {"eta_per_symbol", r.eta_per_symbol},
                   {"beta", r.beta.value},
                   {"oscillation", r.beta.oscillation},
                   {"divergent", r.beta.lyapunov_divergent},
                   {"dim", r.dim}});
}

void cmd_coverrate(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  const double value = cover_rate(loaded.family, alpha, o.t, o.m);
  emit_report(o, out,
              config_block("coverrate", loaded, o,
                           json{{"t", o.t}, {"m", o.m}}),
              json{{"value", value}});
}

void cmd_coversum(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  OmegaSequence omega(loaded.family, loaded.rule);
  const double log_sum =
      exact_cover_sum(loaded.family, omega, o.n, alpha, o.t, o.m,
                      o.eps_window, o.budget);
  emit_report(o, out,
              config_block("coversum", loaded, o,
                           json{{"n", o.n},
                                {"t", o.t},
                                {"m", o.m},
                                {"eps_window", o.eps_window},
                                {"budget", o.budget}}),
              json{{"log_sum", log_sum}, {"sum", std::exp(log_sum)}});
}

void cmd_expand(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  OmegaSequence omega(loaded.family, loaded.rule);
  const std::vector<int64_t> word = parse_word(o.word_text);
  const ProjectResult p = project(loaded.family, omega, word, o.exact_depth);
  const double series = series_expansion(loaded.family, omega, word);
  json result{{"word", word},
              {"point", p.value},
              {"error_bound", p.error_bound},
              {"log_length", p.log_length},
              {"depth", p.depth},
              {"exact", p.exact},
              {"series_point", series}};
  if (p.exact) result["point_exact"] = to_string(p.value_exact);
  emit_report(o, out,
              config_block("expand", loaded, o,
                           json{{"word", o.word_text},
                                {"exact_depth", o.exact_depth}}),
              result);
}

void cmd_digits(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  OmegaSequence omega(loaded.family, loaded.rule);
  Rat x(0);
  try {
    x = parse_rational(o.x_text);
  } catch (const std::exception&) {
    size_t used = 0;
    const double xd = std::stod(o.x_text, &used);
    if (used != o.x_text.size()) {
      throw std::invalid_argument("bad point: " + o.x_text);
    }
    x = rat_from_double(xd);
  }
  const Expansion e = digits_of(loaded.family, omega, x, o.n);
  json result;
  switch (e.cls) {
    case PointClass::unique: result["classification"] = "unique"; break;
    case PointClass::boundary: result["classification"] = "boundary"; break;
    case PointClass::no_expansion:
      result["classification"] = "no-expansion";
      break;
  }
  result["word"] = e.word;
  result["exact"] = e.exact;
  result["certified_depth"] = e.certified_depth;
  if (!e.alt_word.empty()) result["alt_word"] = e.alt_word;
  if (!e.word.empty()) {
    const ProjectResult p =
        project(loaded.family, omega, e.word, o.exact_depth);
    result["point"] = p.value;
    result["error_bound"] = p.error_bound;
    result["residual"] = std::abs(p.value - to_double(x));
  }
  emit_report(o, out,
              config_block("digits", loaded, o,
                           json{{"x", o.x_text},
                                {"n", o.n},
                                {"exact_depth", o.exact_depth}}),
              result);
}

void cmd_weave(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  OmegaSequence omega(loaded.family, loaded.rule);
  const auto streams =
      frequency_streams(loaded.family, alpha, omega, o.n);
  const std::vector<int64_t> word = weave(omega, streams, o.n);
  const json report =
      config_block("weave", loaded, o, json{{"n", o.n}});
  std::vector<std::string> rows;
  rows.reserve(word.size());
  for (int64_t i = 1; i <= o.n; ++i) {
    rows.push_back(std::to_string(i) + "," +
                   loaded.family[omega.at(i)].id() + "," +
                   std::to_string(word[static_cast<size_t>(i - 1)]));
  }
  emit_trace(o, out, report, "n,symbol,digit", rows);
}

void cmd_freq(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  const int s = resolve_symbol(loaded.family, o.symbol_id, "--symbol");
  const std::vector<int64_t> stream =
      frequency_sequence(alpha.conditional_law(s), o.n);
  const json report = config_block(
      "freq", loaded, o,
      json{{"n", o.n}, {"symbol", loaded.family[s].id()}});
  std::vector<std::string> rows;
  rows.reserve(stream.size());
  for (size_t k = 0; k < stream.size(); ++k) {
    rows.push_back(std::to_string(k + 1) + "," + std::to_string(stream[k]));
  }
  emit_trace(o, out, report, "k,digit", rows);
}

void cmd_sample(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  OmegaSequence omega(loaded.family, loaded.rule);
  omega.ensure(o.depth);
  const double comparator = comparator_beta(loaded.family, alpha, o.M);

  const auto trace_for = [&](uint64_t seed) {
    OmegaSequence local = omega;
    FibreBernoulli mu(loaded.family, alpha, local);
    const std::vector<int64_t> word = mu.sample(o.depth, seed);
    return local_dimension_trace(mu, word, comparator, o.stride);
  };

  std::vector<std::vector<TraceRow>> traces(
      static_cast<size_t>(o.seeds));
  const int workers =
      std::min<int64_t>(thread_cap(), o.seeds) > 1
          ? static_cast<int>(std::min<int64_t>(thread_cap(), o.seeds))
          : 1;
  if (workers > 1) {
    std::vector<std::future<std::vector<TraceRow>>> futures;
    futures.reserve(static_cast<size_t>(o.seeds));
    for (int64_t i = 0; i < o.seeds; ++i) {
      futures.push_back(std::async(std::launch::async, trace_for,
                                   o.seed + static_cast<uint64_t>(i)));
    }
    for (int64_t i = 0; i < o.seeds; ++i) {
      traces[static_cast<size_t>(i)] = futures[static_cast<size_t>(i)].get();
    }
  } else {
    for (int64_t i = 0; i < o.seeds; ++i) {
      traces[static_cast<size_t>(i)] =
          trace_for(o.seed + static_cast<uint64_t>(i));
    }
  }

  const json report = config_block(
      "sample", loaded, o,
      json{{"depth", o.depth}, {"seeds", o.seeds}, {"stride", o.stride},
           {"M", o.M}});
  std::vector<std::string> rows;
  for (int64_t i = 0; i < o.seeds; ++i) {
    const uint64_t seed = o.seed + static_cast<uint64_t>(i);
    for (const TraceRow& r : traces[static_cast<size_t>(i)]) {
      rows.push_back(std::to_string(seed) + "," + trace_row(r));
    }
  }
  emit_trace(o, out, report,
             "seed,n,log_mass,log_length,ratio,comparator", rows);
}

void cmd_localdim(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  OmegaSequence omega(loaded.family, loaded.rule);
  const std::vector<int64_t> word = parse_word(o.word_text);
  const double comparator = comparator_beta(loaded.family, alpha, o.M);
  FibreBernoulli mu(loaded.family, alpha, omega);
  const auto trace = local_dimension_trace(mu, word, comparator, o.stride);
  const json report = config_block(
      "localdim", loaded, o,
      json{{"word", o.word_text}, {"stride", o.stride}, {"M", o.M}});
  std::vector<std::string> rows;
  rows.reserve(trace.size());
  for (const TraceRow& r : trace) rows.push_back(trace_row(r));
  emit_trace(o, out, report, "n,log_mass,log_length,ratio,comparator", rows);
}

void cmd_etalower(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
  OmegaSequence omega(loaded.family, loaded.rule);

  int sigma = -1;
  if (!o.sigma_id.empty()) {
    sigma = loaded.family.index_of(o.sigma_id);
    if (loaded.family[sigma].digit_count().has_value()) {
      throw std::invalid_argument(
          "the scheduled symbol must carry infinitely many digits");
    }
  } else {
    double best = -1.0;
    for (int s = 0; s < loaded.family.size(); ++s) {
      if (loaded.family[s].digit_count().has_value()) continue;
      const double e = loaded.family[s].eta_analytic();
      if (e > best) {
        best = e;
        sigma = s;
      }
    }
    if (sigma < 0) {
      throw std::invalid_argument(
          "the family needs a system with infinitely many digits");
    }
  }

  const int64_t schedule_horizon =
      o.schedule_horizon > 0 ? o.schedule_horizon
                             : std::max<int64_t>(4 * o.depth, 4096);
  const ThetaSchedule schedule = theta_schedule(
      loaded.family, omega, sigma, o.gamma, schedule_horizon);
  const BaseSequence base =
      build_base_sequence(loaded.family, alpha, omega, o.depth, o.eps);
  const EaSampler sampler(loaded.family, schedule, base, o.eps, o.delta);
  const auto trace =
      eta_lower_trace(sampler, loaded.family, omega, o.depth, o.seed);

  const json params{{"depth", o.depth},
                    {"eps", o.eps},
                    {"delta", o.delta},
                    {"gamma", o.gamma},
                    {"sigma", loaded.family[sigma].id()},
                    {"schedule_horizon", schedule_horizon}};
  const json report = config_block("etalower", loaded, o, params);
  if (o.summary) {
    json result{{"kappa1", sampler.kappa1()},
                {"kappa2", sampler.kappa2()},
                {"kappa", sampler.kappa()},
                {"sigma", loaded.family[sigma].id()},
                {"theta_kappa", sampler.first_scheduled_depth()},
                {"comparator",
                 o.delta * loaded.family.eta_max() / (1.0 + o.eps)},
                {"realized_digit_bound", base.realized_bound},
                {"bound_exponent", base.bound_exponent}};
    if (!trace.empty()) result["final_ratio"] = trace.back().ratio;
    emit_report(o, out, report, result);
    return;
  }
  std::vector<std::string> rows;
  rows.reserve(trace.size());
  for (const TraceRow& r : trace) rows.push_back(trace_row(r));
  emit_trace(o, out, report, "n,log_mass,log_length,ratio,comparator", rows);
}

void cmd_approx(const Options& o, std::ostream& out, bool csv) {
  const Loaded loaded = load(o);
  const ApproxFamily af = approximate_family(loaded.family, o.m);
  const json report =
      config_block("approx", loaded, o, json{{"m", o.m}});

  if (csv) {
    std::vector<std::string> rows;
    for (const ApproxSystem& sys : af.systems) {
      for (const ApproxBranch& br : sys.branches) {
        rows.push_back(sys.id + "," + std::to_string(br.digit) + "," +
                       (br.merged ? "1" : "0") + "," + fmt(br.lo) + "," +
                       fmt(br.hi));
      }
    }
    emit_trace(o, out, report, "symbol,digit,merged,lo,hi", rows);
    return;
  }

  json systems = json::array();
  for (const ApproxSystem& sys : af.systems) {
    json branches = json::array();
    for (const ApproxBranch& br : sys.branches) {
      branches.push_back(branch_json(br));
    }
    systems.push_back(json{{"id", sys.id},
                           {"m", sys.m},
                           {"exact", sys.exact},
                           {"branches", branches}});
  }
  json result{{"systems", systems}};

  if (!o.alpha_spec.empty()) {
    const FrequencyVector alpha = parse_alpha(loaded.family, o.alpha_spec);
    const ApproxFrequency fr = project_frequency(loaded.family, alpha, o.m);
    json masses = json::array();
    for (int s = 0; s < loaded.family.size(); ++s) {
      json per = json::array();
      for (const ApproxDigitMass& dm :
           fr.per_symbol[static_cast<size_t>(s)]) {
        json node{{"digit", dm.digit},
                  {"merged", dm.merged},
                  {"mass", dm.mass}};
        if (dm.mass_exact) node["mass_exact"] = to_string(*dm.mass_exact);
        per.push_back(node);
      }
      masses.push_back(json{{"id", loaded.family[s].id()}, {"masses", per}});
    }
    result["alpha_m"] = masses;
    const auto trend =
        approx_dimension_trend(loaded.family, alpha, o.m, o.m);
    result["dimension"] = json{{"value", trend[0].value},
                               {"e_m", trend[0].e_m},
                               {"corrected", trend[0].corrected}};
  }
  emit_report(o, out, report, result);
}

void cmd_validate(const Options& o, std::ostream& out) {
  const Loaded loaded = load(o);
  json systems = json::array();
  bool all_ok = true;
  for (int s = 0; s < loaded.family.size(); ++s) {
    const GlsSystem& sys = loaded.family[s];
    int64_t digits = o.digits;
    if (const auto count = sys.digit_count()) {
      digits = std::min(digits, *count);
    }
    const PartitionReport r = validate_partition(sys, digits);
    all_ok = all_ok && r.ok;
    systems.push_back(json{{"id", sys.id()},
                           {"ok", r.ok},
                           {"message", r.message},
                           {"digits_checked", r.digits_checked}});
  }
  emit_report(o, out,
              config_block("validate", loaded, o,
                           json{{"digits", o.digits}}),
              json{{"ok", all_ok}, {"systems", systems}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"non-autonomous generalised Luroth series toolkit"};
  app.name("ngls");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options o;
  bool beta_csv = false;
  bool approx_csv = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path,
                    "family description JSON file");
    sub->add_option("--out", o.out_path, "write the report here instead of stdout");
    sub->add_option("--seed", o.seed, "seed for stochastic commands");
  };
  const auto add_alpha = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha_spec, "digit-law spec")->required();
  };
  const auto add_omega = [&](CLI::App* sub) {
    sub->add_option("--omega", o.omega_spec,
                    "driving-sequence spec (default: periodic over all symbols)");
  };

  CLI::App* eta_cmd = app.add_subcommand("eta", "exponent of convergence per system");
  add_common(eta_cmd);
  eta_cmd->add_option("--horizon", o.horizon, "largest grid point");
  eta_cmd->add_flag("--raw", o.raw, "skip extrapolation");
  eta_cmd->callback([&] { cmd_eta(o, out); });

  CLI::App* beta_cmd = app.add_subcommand("beta", "entropy over Lyapunov liminf ratio");
  add_common(beta_cmd);
  add_alpha(beta_cmd);
  beta_cmd->add_option("--M", o.M, "trace cut");
  beta_cmd->add_flag("--csv", beta_csv, "emit the ratio trace as CSV");
  beta_cmd->callback([&] { cmd_beta(o, out, beta_csv); });

  CLI::App* dim_cmd = app.add_subcommand("dim", "Hausdorff dimension of the level set");
  add_common(dim_cmd);
  add_alpha(dim_cmd);
  dim_cmd->add_option("--M", o.M, "trace cut");
  dim_cmd->callback([&] { cmd_dim(o, out); });

  CLI::App* coverrate_cmd =
      app.add_subcommand("coverrate", "per-level growth rate of the cover sum");
  add_common(coverrate_cmd);
  add_alpha(coverrate_cmd);
  coverrate_cmd->add_option("--t", o.t, "covering exponent")->required();
  coverrate_cmd->add_option("--m", o.m, "digit window cut")->required();
  coverrate_cmd->callback([&] { cmd_coverrate(o, out); });

  CLI::App* coversum_cmd =
      app.add_subcommand("coversum", "exact multinomial cover sum at depth n");
  add_common(coversum_cmd);
  add_alpha(coversum_cmd);
  add_omega(coversum_cmd);
  coversum_cmd->add_option("--n", o.n, "word length")->required();
  coversum_cmd->add_option("--t", o.t, "covering exponent")->required();
  coversum_cmd->add_option("--m", o.m, "digit window cut")->required();
  coversum_cmd->add_option("--eps-window", o.eps_window, "frequency window half-width");
  coversum_cmd->add_option("--budget", o.budget, "count-vector enumeration cap");
  coversum_cmd->callback([&] { cmd_coversum(o, out); });

  CLI::App* expand_cmd = app.add_subcommand("expand", "digit word to point");
  add_common(expand_cmd);
  add_omega(expand_cmd);
  expand_cmd->add_option("--word", o.word_text, "comma-separated digits")->required();
  expand_cmd->add_option("--exact-depth", o.exact_depth, "rational-arithmetic depth cap");
  expand_cmd->callback([&] { cmd_expand(o, out); });

  CLI::App* digits_cmd = app.add_subcommand("digits", "point to digit word");
  add_common(digits_cmd);
  add_omega(digits_cmd);
  digits_cmd->add_option("--x", o.x_text, "point in [0,1], rational or decimal")->required();
  digits_cmd->add_option("--n", o.n, "digits to produce")->required();
  digits_cmd->add_option("--exact-depth", o.exact_depth, "rational-arithmetic depth cap");
  digits_cmd->callback([&] { cmd_digits(o, out); });

  CLI::App* weave_cmd =
      app.add_subcommand("weave", "frequency-realizing digit word along omega");
  add_common(weave_cmd);
  add_alpha(weave_cmd);
  add_omega(weave_cmd);
  weave_cmd->add_option("--n", o.n, "word length")->required();
  weave_cmd->callback([&] { cmd_weave(o, out); });

  CLI::App* freq_cmd =
      app.add_subcommand("freq", "greedy digit stream for one symbol's law");
  add_common(freq_cmd);
  add_alpha(freq_cmd);
  freq_cmd->add_option("--n", o.n, "stream length")->required();
  freq_cmd->add_option("--symbol", o.symbol_id, "system id (defaults to a lone symbol)");
  freq_cmd->callback([&] { cmd_freq(o, out); });

  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw words from the digit measure and trace them");
  add_common(sample_cmd);
  add_alpha(sample_cmd);
  add_omega(sample_cmd);
  sample_cmd->add_option("--depth", o.depth, "word length")->required();
  sample_cmd->add_option("--seeds", o.seeds, "number of consecutive seeds");
  sample_cmd->add_option("--stride", o.stride, "trace row spacing");
  sample_cmd->add_option("--M", o.M, "trace cut for the comparator");
  sample_cmd->callback([&] { cmd_sample(o, out); });

  CLI::App* localdim_cmd =
      app.add_subcommand("localdim", "mass-to-length ratio trace of a word");
  add_common(localdim_cmd);
  add_alpha(localdim_cmd);
  add_omega(localdim_cmd);
  localdim_cmd->add_option("--word", o.word_text, "comma-separated digits")->required();
  localdim_cmd->add_option("--stride", o.stride, "trace row spacing");
  localdim_cmd->add_option("--M", o.M, "trace cut for the comparator");
  localdim_cmd->callback([&] { cmd_localdim(o, out); });

  CLI::App* etalower_cmd =
      app.add_subcommand("etalower", "scheduled-digit measure trace for the eta bound");
  add_common(etalower_cmd);
  add_alpha(etalower_cmd);
  add_omega(etalower_cmd);
  etalower_cmd->add_option("--depth", o.depth, "trace depth")->required();
  etalower_cmd->add_option("--eps", o.eps, "threshold slack");
  etalower_cmd->add_option("--delta", o.delta, "window exponent");
  etalower_cmd->add_option("--gamma", o.gamma, "schedule exponent");
  etalower_cmd->add_option("--sigma", o.sigma_id, "scheduled symbol id");
  etalower_cmd->add_option("--schedule-horizon", o.schedule_horizon,
                           "omega positions to scan for the schedule");
  etalower_cmd->add_flag("--summary", o.summary, "JSON summary instead of the CSV trace");
  etalower_cmd->callback([&] { cmd_etalower(o, out); });

  CLI::App* approx_cmd =
      app.add_subcommand("approx", "finite approximant branch tables");
  add_common(approx_cmd);
  approx_cmd->add_option("--m", o.m, "cut")->required();
  approx_cmd->add_option("--alpha", o.alpha_spec,
                         "digit-law spec; adds regrouped masses and the dimension row");
  approx_cmd->add_flag("--csv", approx_csv, "emit branch rows as CSV");
  approx_cmd->callback([&] { cmd_approx(o, out, approx_csv); });

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "partition health checks for the family");
  add_common(validate_cmd);
  validate_cmd->add_option("--digits", o.digits, "digits to check per system");
  validate_cmd->callback([&] { cmd_validate(o, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    err << "config error at " << e.path() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    err << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ngls::cli
