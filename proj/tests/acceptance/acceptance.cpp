// End-to-end checks for the dimension toolkit. Each check prints exactly one
// PASS/FAIL line; the process exit code is the number of failures. Reference
// values are computed inline from closed forms or exhaustive enumeration,
// never from the code paths under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ngls/approximation.hpp"
#include "ngls/dimension.hpp"
#include "ngls/errors.hpp"
#include "ngls/expansion.hpp"
#include "ngls/measure.hpp"
#include "ngls/rng.hpp"

using namespace ngls;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

Family single(GlsSystem sys) {
  std::vector<GlsSystem> systems;
  systems.push_back(std::move(sys));
  return Family(std::move(systems));
}

Family binary_family() {
  return single(GlsSystem::finite("B", {rat(1, 2), rat(1, 2)}));
}

Family ternary_family() {
  return single(GlsSystem::finite("T", {rat(1, 2), rat(1, 3), rat(1, 6)}));
}

// ---------------------------------------------------------------------------
// 1. closed-form exponents of convergence

Outcome check_eta() {
  struct Probe {
    GlsSystem sys;
    double target;
  };
  std::vector<Probe> probes;
  probes.push_back({GlsSystem::luroth("L"), 0.5});
  probes.push_back({GlsSystem::power("P2", 2.0), 0.5});
  probes.push_back({GlsSystem::power("P3", 3.0), 1.0 / 3.0});
  probes.push_back({GlsSystem::power("P5", 5.0), 0.2});

  double worst = 0.0;
  double slowest = 0.0;
  for (const Probe& probe : probes) {
    const auto start = std::chrono::steady_clock::now();
    const EtaResult r = eta(probe.sys, int64_t{1} << 20);
    const double elapsed = seconds_since(start);
    slowest = std::max(slowest, elapsed);
    worst = std::max(worst, std::abs(r.value - probe.target));
    if (std::abs(r.value - probe.target) > 1e-3) {
      return {false, probe.sys.id() + " off by " +
                         fmt(std::abs(r.value - probe.target))};
    }
    if (elapsed >= 1.0) {
      return {false, probe.sys.id() + " took " + fmt(elapsed) + "s"};
    }
  }
  const EtaResult fin = eta(GlsSystem::finite("F", {rat(1, 2), rat(1, 2)}));
  if (fin.value != 0.0) return {false, "finite system eta nonzero"};
  return {true, "max |error| " + fmt(worst) + ", slowest " + fmt(slowest) + "s"};
}

// ---------------------------------------------------------------------------
// 2. finite-system dimension against entropy oracles

Outcome check_finite_dimension() {
  const Family binary = binary_family();
  const FrequencyVector uniform(binary, {uniform_law(2)});
  const double flat = dim_formula(binary, uniform).dim;
  if (flat != 1.0) return {false, "uniform binary dim " + fmt(flat)};

  const FrequencyVector skew(binary, {head_law({rat(1, 4), rat(3, 4)})});
  const double got = dim_formula(binary, skew).dim;
  const double ln2 = std::log(2.0);
  const double skew_oracle =
      -(0.25 * std::log(0.25) + 0.75 * std::log(0.75)) / ln2;
  if (std::abs(got - skew_oracle) > 1e-6) {
    return {false, "skewed binary off by " + fmt(std::abs(got - skew_oracle))};
  }

  const Family ternary = ternary_family();
  const FrequencyVector third(ternary, {uniform_law(3)});
  const double got3 = dim_formula(ternary, third).dim;
  const double oracle3 = 3.0 * std::log(3.0) / (2.0 * std::log(6.0));
  if (std::abs(got3 - oracle3) > 1e-10) {
    return {false, "three-branch off by " + fmt(std::abs(got3 - oracle3))};
  }
  return {true, "binary skew err " + fmt(std::abs(got - skew_oracle)) +
                    ", ternary err " + fmt(std::abs(got3 - oracle3))};
}

// ---------------------------------------------------------------------------
// 3. the universal lower bound kicks in at zero entropy

Outcome check_universal_floor() {
  const Family fam = single(GlsSystem::luroth("L"));
  const FrequencyVector alpha(fam, {dirac_law(1)});
  const DimensionReport r = dim_formula(fam, alpha);
  if (r.beta.value != 0.0) return {false, "beta " + fmt(r.beta.value)};
  if (r.dim != 0.5) return {false, "dim " + fmt(r.dim)};
  return {true, "beta 0, dim 0.5"};
}

// ---------------------------------------------------------------------------
// 4. the general formula collapses to the classical one-system form

Outcome check_singleton_reduction() {
  const Family fam = single(GlsSystem::luroth("L"));
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    SymbolLaw law;
    if (trial % 2 == 0) {
      law = geometric_law(rat(5 + static_cast<int64_t>(rng.below(91)), 100));
    } else {
      law = power_law(1.5 + 2.5 * rng.uniform01());
    }
    const FrequencyVector alpha(fam, {law});
    const DimensionReport general = dim_formula(fam, alpha);
    const double classical = flmw_dim(fam, alpha);
    if (general.dim != classical) {
      return {false, "trial " + std::to_string(trial) + ": " +
                         fmt(general.dim) + " vs " + fmt(classical)};
    }
    const std::vector<BetaRow> rows = flmw_trace(fam, alpha);
    if (rows.size() != general.beta.trace.size()) {
      return {false, "trial " + std::to_string(trial) + ": trace sizes differ"};
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      const BetaRow& a = rows[i];
      const BetaRow& b = general.beta.trace[i];
      if (a.m != b.m || a.numerator != b.numerator ||
          a.denominator != b.denominator || a.value != b.value) {
        return {false, "trial " + std::to_string(trial) + ": row " +
                           std::to_string(i) + " differs"};
      }
    }
  }
  return {true, "20 randomized laws, traces identical"};
}

// ---------------------------------------------------------------------------
// 5. cover sums against exhaustive word enumeration

double brute_cover_sum(const Family& family, OmegaSequence& omega, int64_t n,
                       const FrequencyVector& alpha, double t, int64_t m,
                       const Rat& eps) {
  const std::vector<Digit> window = family.digit_window(m);
  std::vector<int64_t> word(static_cast<size_t>(n), 1);
  double total = 0.0;
  for (;;) {
    std::vector<int64_t> counts(window.size(), 0);
    double weight = 1.0;
    for (int64_t i = 1; i <= n; ++i) {
      const int s = omega.at(i);
      const int64_t b = word[static_cast<size_t>(i - 1)];
      weight *= std::exp(t * family[s].log_ratio(b));
      for (size_t d = 0; d < window.size(); ++d) {
        if (window[d].sym == s && window[d].b == b) ++counts[d];
      }
    }
    bool inside = true;
    for (size_t d = 0; d < window.size() && inside; ++d) {
      const Rat dev = Rat(counts[d], static_cast<long>(n)) -
                      *alpha.alpha_exact(window[d].sym, window[d].b);
      if (abs(dev) >= eps) inside = false;
    }
    if (inside) total += weight;

    int64_t pos = n - 1;
    while (pos >= 0) {
      const int s = omega.at(pos + 1);
      if (word[static_cast<size_t>(pos)] < *family[s].digit_count()) {
        ++word[static_cast<size_t>(pos)];
        break;
      }
      word[static_cast<size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return total;
}

Outcome check_cover_sums() {
  const auto start = std::chrono::steady_clock::now();

  struct Instance {
    Family family;
    FrequencyVector alpha;
    OmegaRule rule;
    std::string name;
  };
  std::vector<Instance> instances;
  {
    Family fam = binary_family();
    FrequencyVector alpha(fam, {uniform_law(2)});
    instances.push_back(
        {std::move(fam), std::move(alpha), OmegaRule::periodic({0}), "binary"});
  }
  {
    Family fam = ternary_family();
    FrequencyVector alpha(fam, {head_law({rat(1, 2), rat(1, 3), rat(1, 6)})});
    instances.push_back({std::move(fam), std::move(alpha),
                         OmegaRule::periodic({0}), "ternary"});
  }
  {
    std::vector<GlsSystem> systems;
    systems.push_back(GlsSystem::finite("B", {rat(1, 2), rat(1, 2)}));
    systems.push_back(GlsSystem::finite("T", {rat(1, 2), rat(1, 3), rat(1, 6)}));
    Family fam(std::move(systems));
    FrequencyVector alpha(
        fam, {uniform_law(2, rat(1, 2)), uniform_law(3, rat(1, 2))});
    instances.push_back({std::move(fam), std::move(alpha),
                         OmegaRule::periodic({0, 1}), "two-symbol"});
  }
  {
    Family fam = single(GlsSystem::finite(
        "S", {rat(1, 4), rat(1, 4), rat(1, 8), rat(1, 8), rat(1, 8), rat(1, 8)}));
    FrequencyVector alpha(fam, {uniform_law(6)});
    instances.push_back(
        {std::move(fam), std::move(alpha), OmegaRule::periodic({0}), "six"});
  }

  int compared = 0;
  double worst_rel = 0.0;
  for (Instance& inst : instances) {
    for (int64_t n = 1; n <= 6; ++n) {
      for (double t : {0.5, 0.8, 1.0}) {
        OmegaSequence oa(inst.family, inst.rule);
        OmegaSequence ob(inst.family, inst.rule);
        const double log_sum =
            exact_cover_sum(inst.family, oa, n, inst.alpha, t, 2, 0.31);
        const double got = std::exp(log_sum);
        const double want =
            brute_cover_sum(inst.family, ob, n, inst.alpha, t, 2, rat(31, 100));
        if (want == 0.0) {
          if (got > 1e-300) {
            return {false, inst.name + " n=" + std::to_string(n) +
                               " t=" + fmt(t) + ": expected empty sum"};
          }
          continue;
        }
        const double rel = std::abs(got - want) / want;
        worst_rel = std::max(worst_rel, rel);
        ++compared;
        if (rel > 1e-8) {
          return {false, inst.name + " n=" + std::to_string(n) +
                             " t=" + fmt(t) + " rel err " + fmt(rel)};
        }
      }
    }
    OmegaSequence omega(inst.family, inst.rule);
    const double unity =
        std::exp(exact_cover_sum(inst.family, omega, 6, inst.alpha, 1.0, 2, 2.0));
    if (std::abs(unity - 1.0) > 1e-12) {
      return {false, inst.name + " partition of unity off by " +
                         fmt(std::abs(unity - 1.0))};
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) return {false, "took " + fmt(elapsed) + "s"};
  return {true, std::to_string(compared) + " instances, worst rel err " +
                    fmt(worst_rel) + ", " + fmt(elapsed) + "s"};
}

// ---------------------------------------------------------------------------
// 6. cover-rate sign changes around the dimension

Outcome check_cover_rate_signs() {
  const Family binary = binary_family();
  const FrequencyVector uniform(binary, {uniform_law(2)});
  const double ln2 = std::log(2.0);
  const double above = cover_rate(binary, uniform, 1.05, 50);
  const double below = cover_rate(binary, uniform, 0.95, 50);
  if (!(above < 0.0) || std::abs(above + 0.05 * ln2) > 1e-10) {
    return {false, "binary above-rate " + fmt(above)};
  }
  if (!(below > 0.0) || std::abs(below - 0.05 * ln2) > 1e-10) {
    return {false, "binary below-rate " + fmt(below)};
  }

  const Family lur = single(GlsSystem::luroth("L"));
  const FrequencyVector geo(lur, {geometric_law(rat(1, 2))});
  const double d = dim_formula(lur, geo).dim;
  const double up = cover_rate(lur, geo, d + 0.05, 50);
  const double down = cover_rate(lur, geo, std::max(0.0, d - 0.05), 50);
  if (!(up < 0.0 && down > 0.0)) {
    return {false, "luroth rates " + fmt(up) + " / " + fmt(down)};
  }
  return {true, "binary rates " + fmt(below) + " / " + fmt(above) +
                    ", luroth " + fmt(down) + " / " + fmt(up)};
}

// ---------------------------------------------------------------------------
// 7. sampled words realize the entropy-over-Lyapunov ratio

Outcome check_sampled_local_dimension() {
  const auto start = std::chrono::steady_clock::now();
  const int64_t depth = 100000;

  struct Target {
    const Family* family;
    FrequencyVector alpha;
    double beta_oracle;
    std::string name;
  };
  std::vector<Family> families;
  families.reserve(2);
  families.push_back(binary_family());
  families.push_back(single(GlsSystem::luroth("L")));

  std::vector<Target> targets;
  {
    const double oracle =
        -(0.25 * std::log(0.25) + 0.75 * std::log(0.75)) / std::log(2.0);
    targets.push_back({&families[0],
                       FrequencyVector(families[0],
                                       {head_law({rat(1, 4), rat(3, 4)})}),
                       oracle, "binary"});
  }
  {
    double num = 0.0;
    double den = 0.0;
    for (int k = 1; k <= 220; ++k) {
      const double w = std::pow(0.5, k);
      num += w * k * std::log(2.0);
      den += w * std::log(static_cast<double>(k) * (k + 1.0));
    }
    targets.push_back({&families[1],
                       FrequencyVector(families[1],
                                       {geometric_law(rat(1, 2))}),
                       num / den, "luroth"});
  }

  double worst = 0.0;
  for (Target& target : targets) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      OmegaSequence omega(*target.family, OmegaRule::periodic({0}));
      FibreBernoulli mu(*target.family, target.alpha, omega);
      const std::vector<int64_t> word = mu.sample(depth, seed);
      const auto rows = local_dimension_trace(mu, word, 0.0, depth);
      const double gap = std::abs(rows.back().ratio - target.beta_oracle);
      worst = std::max(worst, gap);
      if (gap > 0.02) {
        return {false, target.name + " seed " + std::to_string(seed) +
                           " ratio gap " + fmt(gap)};
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) return {false, "took " + fmt(elapsed) + "s"};
  return {true, "20 runs, worst ratio gap " + fmt(worst) + ", " +
                    fmt(elapsed) + "s"};
}

// ---------------------------------------------------------------------------
// 8. scheduled huge-digit machinery

Outcome check_scheduled_digits() {
  const KappaThresholds halves = kappa_thresholds(0.5, 0.5, GlsSystem::luroth("L"));
  if (halves.kappa1 != 3 || halves.kappa2 != 2) {
    return {false, "half-threshold values " + std::to_string(halves.kappa1) +
                       "/" + std::to_string(halves.kappa2)};
  }

  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::luroth("L"));
  systems.push_back(GlsSystem::power("P", 5.0));
  const Family fam(std::move(systems));
  OmegaSequence omega(fam, OmegaRule::periodic({1, 0}));
  const ThetaSchedule schedule = theta_schedule(fam, omega, 0, 1.5, 2600);
  const FrequencyVector alpha(
      fam, {dirac_law(1, rat(1, 2)), dirac_law(1, rat(1, 2))});
  const int64_t depth = 600;
  const BaseSequence base = build_base_sequence(fam, alpha, omega, depth, 0.1);
  const EaSampler sampler(fam, schedule, base, 0.1, 0.9);

  int64_t scheduled_hits = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const std::vector<int64_t> word = sampler.sample(depth, seed);
    for (int64_t k = sampler.kappa(); k <= schedule.max_k(); ++k) {
      const int64_t pos = schedule.theta_of(k);
      if (pos > depth) break;
      const auto [lo, hi] = sampler.window(k);
      const int64_t digit = word[static_cast<size_t>(pos - 1)];
      if (digit < lo || digit > hi) {
        return {false, "seed " + std::to_string(seed) + " window miss at k=" +
                           std::to_string(k)};
      }
      ++scheduled_hits;
    }
  }

  const double bar = 0.9 * fam.eta_max() / 1.1 - 0.05;
  double worst = 1.0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto rows = eta_lower_trace(sampler, fam, omega, depth, seed);
    worst = std::min(worst, rows.back().ratio);
    if (rows.back().ratio < bar) {
      return {false, "seed " + std::to_string(seed) + " final ratio " +
                         fmt(rows.back().ratio) + " under " + fmt(bar)};
    }
  }
  return {true, std::to_string(scheduled_hits) +
                    " window draws in range, min final ratio " + fmt(worst) +
                    " vs bar " + fmt(bar)};
}

// ---------------------------------------------------------------------------
// 9. woven greedy streams hit their target frequencies

Outcome check_spectrum_weave() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::finite("B", {rat(1, 2), rat(1, 2)}));
  systems.push_back(GlsSystem::luroth("L"));
  const Family fam(std::move(systems));
  const FrequencyVector alpha(
      fam, {uniform_law(2, rat(1, 2)), geometric_law(rat(1, 2), rat(1, 2))});
  OmegaSequence omega(fam, OmegaRule::weave({rat(1, 2), rat(1, 2)}));

  const int64_t n = 1000000;
  omega.ensure(n);
  std::vector<int64_t> symbol_counts(2, 0);
  for (int64_t i = 1; i <= n; ++i) ++symbol_counts[static_cast<size_t>(omega.at(i))];
  const std::vector<std::vector<int64_t>> streams{
      frequency_sequence(alpha.conditional_law(0), symbol_counts[0]),
      frequency_sequence(alpha.conditional_law(1), symbol_counts[1])};
  const std::vector<int64_t> word = weave(omega, streams, n);

  TauCounter tau(2);
  for (int64_t i = 1; i <= n; ++i) {
    tau.record(omega.at(i), word[static_cast<size_t>(i - 1)]);
  }
  double worst = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int64_t b = 1; b <= 64; ++b) {
      const double a = alpha.alpha(s, b);
      if (a < 1e-3) continue;
      const double dev =
          std::abs(tau.digit_count(s, b) / static_cast<double>(n) - a);
      worst = std::max(worst, dev);
    }
  }
  const double elapsed = seconds_since(start);
  if (worst >= 1e-2) return {false, "max deviation " + fmt(worst)};
  if (elapsed >= 10.0) return {false, "took " + fmt(elapsed) + "s"};
  return {true, "max deviation " + fmt(worst) + " at n=10^6, " + fmt(elapsed) +
                    "s"};
}

// ---------------------------------------------------------------------------
// 10. finite approximants: breakpoints, mass, stabilization

Outcome check_approximants() {
  const GlsSystem lur = GlsSystem::luroth("L");
  const ApproxSystem cut1 = approximate_system(lur, 1);
  if (!(*cut1.find(1).lo_exact == rat(1, 2) &&
        *cut1.find(2).hi_exact == rat(1, 2) &&
        *cut1.find(2).lo_exact == rat(0))) {
    return {false, "cut-1 breakpoints"};
  }
  const ApproxSystem cut2 = approximate_system(lur, 2);
  if (!(*cut2.find(1).lo_exact == rat(1, 2) &&
        *cut2.find(2).lo_exact == rat(1, 3) &&
        *cut2.find(3).hi_exact == rat(1, 3))) {
    return {false, "cut-2 breakpoints"};
  }

  const Family fam = single(GlsSystem::luroth("L"));
  const FrequencyVector alpha(fam, {geometric_law(rat(1, 2))});
  for (int64_t m = 1; m <= 50; ++m) {
    const ApproxFrequency fr = project_frequency(fam, alpha, m);
    Rat total = 0;
    for (const ApproxDigitMass& dm : fr.per_symbol[0]) {
      if (!dm.mass_exact) return {false, "mass not exact at m=" + std::to_string(m)};
      total += *dm.mass_exact;
    }
    if (total != 1) return {false, "mass total != 1 at m=" + std::to_string(m)};
  }

  OmegaSequence omega(fam, OmegaRule::periodic({0}));
  FibreBernoulli mu(fam, alpha, omega);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const std::vector<int64_t> word = mu.sample(12, seed);
    int64_t top = 0;
    for (int64_t b : word) top = std::max(top, b);
    OmegaSequence local(fam, OmegaRule::periodic({0}));
    const ConvergenceTable table =
        measure_convergence_check(fam, alpha, local, word, top + 1, top + 3);
    for (const ConvergenceRow& row : table.rows) {
      if (!row.equal) {
        return {false, "seed " + std::to_string(seed) +
                           " not stabilized at m=" + std::to_string(row.m)};
      }
    }
  }
  return {true, "breakpoints exact, 50 mass totals exact, 100 words stable"};
}

// ---------------------------------------------------------------------------
// 11. digit words reproduce their points

Outcome check_roundtrip() {
  std::vector<GlsSystem> systems;
  systems.push_back(GlsSystem::finite("B", {rat(1, 2), rat(1, 2)}));
  systems.push_back(GlsSystem::luroth("L"));
  systems.push_back(GlsSystem::geometric("G", rat(1, 3)));
  const Family fam(std::move(systems));

  Rng rng(7777);
  double worst_slack = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    OmegaSequence omega(
        fam, OmegaRule::bernoulli({rat(1, 3), rat(1, 3), rat(1, 3)},
                                  static_cast<uint64_t>(trial)));
    double x = rng.uniform01();
    while (x == 0.0) x = rng.uniform01();
    const RoundtripResult r = roundtrip_check(fam, omega, x, 20);
    if (r.residual > r.ffi_length) {
      return {false, "trial " + std::to_string(trial) + " residual " +
                         fmt(r.residual) + " > length " + fmt(r.ffi_length)};
    }
    if (r.ffi_length > 0.0) {
      worst_slack = std::max(worst_slack, r.residual / r.ffi_length);
    }
  }
  return {true, "1000 pairs, worst residual/length " + fmt(worst_slack)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"exponent of convergence closed forms", check_eta},
      {"finite-system dimension oracles", check_finite_dimension},
      {"universal lower bound at zero entropy", check_universal_floor},
      {"single-system reduction", check_singleton_reduction},
      {"cover sums vs exhaustive enumeration", check_cover_sums},
      {"cover-rate sign witnesses", check_cover_rate_signs},
      {"sampled local dimension", check_sampled_local_dimension},
      {"scheduled huge-digit lower bound", check_scheduled_digits},
      {"woven frequency realization", check_spectrum_weave},
      {"finite approximant suite", check_approximants},
      {"expansion roundtrip", check_roundtrip},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %2zu  %-42s %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, outcome.detail.c_str());
  }
  return failures;
}
