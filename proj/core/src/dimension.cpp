#include "ngls/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ngls/errors.hpp"
#include "ngls/logspace.hpp"

namespace ngls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double neville_at_zero(const std::vector<double>& xs, std::vector<double> ys) {
  const size_t k = ys.size();
  for (size_t level = 1; level < k; ++level)
    for (size_t i = 0; i + level < k; ++i)
      ys[i] = (xs[i] * ys[i + 1] - xs[i + level] * ys[i]) / (xs[i] - xs[i + level]);
  return ys[0];
}

}  // namespace

EtaResult eta(const GlsSystem& system, int64_t horizon, bool extrapolate) {
  EtaResult out;
  out.analytic = system.eta_analytic();
  if (system.is_finite()) return out;
  if (horizon < 4) throw std::invalid_argument("eta horizon must be at least 4");

  for (int64_t n = 4; n > 0 && n <= horizon; n *= 2)
    out.grid.push_back({n, std::log(static_cast<double>(n)) / system.log_N(n)});
  out.raw = out.grid.back().ratio;

  double estimate = out.raw;
  if (extrapolate && out.grid.size() >= 3) {
    // three widely spaced nodes in x = 1/log n keep the extrapolation
    // well-conditioned while killing the 1/log n bias of the raw ratio
    const size_t last = out.grid.size() - 1;
    const size_t step = std::min<size_t>(5, last / 2);
    std::vector<double> xs, ys;
    for (size_t i : {last - 2 * step, last - step, last}) {
      xs.push_back(1.0 / std::log(static_cast<double>(out.grid[i].n)));
      ys.push_back(out.grid[i].ratio);
    }
    estimate = neville_at_zero(xs, std::move(ys));
  }
  out.value = std::clamp(estimate, 0.0, 1.0);
  return out;
}

namespace {

/// Accumulates the m-window entropy and Lyapunov sums one cut at a time.
/// Shared between beta() and flmw_trace() so the two produce identical
/// floating-point rows on one-symbol families.
std::vector<BetaRow> beta_rows(const Family& family, const FrequencyVector& alpha,
                               int64_t M, double symbol_term) {
  if (M < 1) throw std::invalid_argument("beta cut must be at least 1");
  std::vector<BetaRow> rows;
  rows.reserve(static_cast<size_t>(M));
  double acc_num = 0.0;
  double acc_den = 0.0;
  for (int64_t m = 1; m <= M; ++m) {
    for (int s = 0; s < family.size(); ++s) {
      if (!family[s].digit_valid(m)) continue;
      const double ad = alpha.alpha(s, m);
      acc_num += xlogx(ad);
      acc_den += ad * family[s].log_N(m);
    }
    BetaRow row;
    row.m = m;
    row.numerator = symbol_term - acc_num;
    row.denominator = acc_den;
    row.value = acc_den > 0.0 ? row.numerator / acc_den : kInf;
    rows.push_back(row);
  }
  return rows;
}

struct WindowStats {
  double min = kInf;
  double max = -kInf;
};

WindowStats window_stats(const std::vector<BetaRow>& rows) {
  WindowStats w;
  const int64_t M = static_cast<int64_t>(rows.size());
  const int64_t lo = std::max<int64_t>(1, M / 2);
  for (const BetaRow& row : rows) {
    if (row.m < lo || !std::isfinite(row.value)) continue;
    w.min = std::min(w.min, row.value);
    w.max = std::max(w.max, row.value);
  }
  if (!std::isfinite(w.min))
    throw GuardError("no digit mass inside the ratio window; increase the cut M");
  return w;
}

bool lyapunov_diverges(const Family& family, const FrequencyVector& alpha) {
  for (int s = 0; s < family.size(); ++s) {
    const TailRule& tail = alpha.law(s).tail;
    if (tail.mass == 0) continue;
    const Rule rule = family[s].rule();
    switch (tail.kind) {
      case TailKind::zero:
      case TailKind::geometric:
        break;
      case TailKind::power:
        // log N_b grows linearly for the geometric rule, so the series
        // compares with sum b^(1-p)
        if (rule == Rule::geometric && tail.p <= 2.0) return true;
        break;
      case TailKind::logpower:
        // against log N_b ~ c log b the series compares with
        // sum 1/(b log^(q-1) b)
        if (rule == Rule::geometric) return true;
        if (tail.q <= 2.0) return true;
        break;
    }
  }
  return false;
}

double symbol_entropy(const FrequencyVector& alpha) {
  double acc = 0.0;
  for (int s = 0; s < alpha.size(); ++s) acc += xlogx(alpha.symbol_mass(s));
  return acc;
}

}  // namespace

BetaResult beta(const Family& family, const FrequencyVector& alpha, int64_t M) {
  if (!check_dagger(family, alpha))
    throw std::invalid_argument("every symbol needs a digit of positive mass");
  BetaResult out;
  out.trace = beta_rows(family, alpha, M, symbol_entropy(alpha));
  const WindowStats w = window_stats(out.trace);
  out.value = w.min;
  out.oscillation = w.max - w.min;
  out.lyapunov_divergent = lyapunov_diverges(family, alpha);
  return out;
}

DimensionReport dim_formula(const Family& family, const FrequencyVector& alpha,
                            int64_t M) {
  DimensionReport out;
  for (int s = 0; s < family.size(); ++s)
    out.eta_per_symbol.push_back(family[s].eta_analytic());
  out.eta_T = *std::max_element(out.eta_per_symbol.begin(), out.eta_per_symbol.end());
  out.beta = beta(family, alpha, M);
  out.dim = out.beta.lyapunov_divergent ? out.eta_T
                                        : std::max(out.eta_T, out.beta.value);
  return out;
}

std::vector<BetaRow> flmw_trace(const Family& family, const FrequencyVector& alpha,
                                int64_t M) {
  if (family.size() != 1)
    throw std::invalid_argument("the classical form applies to one-symbol families");
  return beta_rows(family, alpha, M, 0.0);
}

double flmw_dim(const Family& family, const FrequencyVector& alpha, int64_t M) {
  const std::vector<BetaRow> rows = flmw_trace(family, alpha, M);
  const WindowStats w = window_stats(rows);
  double value = w.min;
  if (lyapunov_diverges(family, alpha)) value = 0.0;
  return std::max(family[0].eta_analytic(), value);
}

namespace {

// least integer strictly greater / greatest strictly less than v, with a
// snap tolerance so n*(alpha - eps) landing on an integer is read exactly
int64_t strict_above(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9) return static_cast<int64_t>(r) + 1;
  return static_cast<int64_t>(std::ceil(v));
}

int64_t strict_below(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9) return static_cast<int64_t>(r) - 1;
  return static_cast<int64_t>(std::floor(v));
}

}  // namespace

CountVectors enumerate_count_vectors(const Family& family, OmegaSequence& omega,
                                     int64_t n, const FrequencyVector& alpha,
                                     int64_t m, double eps, int64_t budget) {
  if (n < 1) throw std::invalid_argument("prefix length must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("window width must be positive");
  CountVectors out;
  out.window = family.digit_window(m);
  out.tau.assign(static_cast<size_t>(family.size()), 0);
  for (int64_t pos = 1; pos <= n; ++pos) ++out.tau[static_cast<size_t>(omega.at(pos))];

  const double nd = static_cast<double>(n);
  std::vector<int64_t> lo, hi;
  int64_t candidates = 1;
  for (const Digit& d : out.window) {
    const double ad = alpha.alpha(d.sym, d.b);
    const int64_t l = std::max<int64_t>(0, strict_above(nd * (ad - eps)));
    const int64_t h = std::min(out.tau[static_cast<size_t>(d.sym)],
                               strict_below(nd * (ad + eps)));
    if (l > h) return out;  // window empty: no admissible vectors
    lo.push_back(l);
    hi.push_back(h);
    if (candidates > budget / std::max<int64_t>(1, h - l + 1))
      throw GuardError("count-vector enumeration exceeds the budget of " +
                       std::to_string(budget) + " candidates");
    candidates *= h - l + 1;
  }

  std::vector<int64_t> current(out.window.size(), 0);
  std::vector<int64_t> used(static_cast<size_t>(family.size()), 0);
  const auto dfs = [&](const auto& self, size_t i) -> void {
    if (i == out.window.size()) {
      out.vectors.push_back(current);
      return;
    }
    const size_t sym = static_cast<size_t>(out.window[i].sym);
    for (int64_t v = lo[i]; v <= hi[i]; ++v) {
      if (used[sym] + v > out.tau[sym]) break;
      current[i] = v;
      used[sym] += v;
      self(self, i + 1);
      used[sym] -= v;
    }
    current[i] = 0;
  };
  dfs(dfs, 0);
  return out;
}

double exact_cover_sum(const Family& family, OmegaSequence& omega, int64_t n,
                       const FrequencyVector& alpha, double t, int64_t m,
                       double eps, int64_t budget) {
  const CountVectors cv = enumerate_count_vectors(family, omega, n, alpha, m, eps, budget);

  std::vector<double> log_tail(static_cast<size_t>(family.size()));
  for (int s = 0; s < family.size(); ++s)
    log_tail[static_cast<size_t>(s)] = family[s].log_tail_weight(t, m);

  std::vector<double> log_N;
  log_N.reserve(cv.window.size());
  for (const Digit& d : cv.window) log_N.push_back(family[d.sym].log_N(d.b));

  LogSum total;
  std::vector<int64_t> n_s(static_cast<size_t>(family.size()));
  for (const auto& vec : cv.vectors) {
    std::fill(n_s.begin(), n_s.end(), 0);
    double term = 0.0;
    for (size_t i = 0; i < vec.size(); ++i) {
      term -= t * static_cast<double>(vec[i]) * log_N[i];
      term -= log_factorial(vec[i]);
      n_s[static_cast<size_t>(cv.window[i].sym)] += vec[i];
    }
    for (size_t s = 0; s < n_s.size(); ++s) {
      const int64_t free = cv.tau[s] - n_s[s];
      term += log_factorial(cv.tau[s]) - log_factorial(free);
      if (free > 0) term += static_cast<double>(free) * log_tail[s];
    }
    total.add(term);
  }
  return total.value();
}

double cover_rate(const Family& family, const FrequencyVector& alpha, double t,
                  int64_t m) {
  double g = 0.0;
  for (const Digit& d : family.digit_window(m)) {
    const double ad = alpha.alpha(d.sym, d.b);
    g -= t * ad * family[d.sym].log_N(d.b);
    g -= xlogx(ad);
  }
  for (int s = 0; s < family.size(); ++s) {
    g += xlogx(alpha.symbol_mass(s));
    const double tail_mass = alpha.tail_mass_from(s, m);
    if (tail_mass > 0.0) {
      g += tail_mass * family[s].log_tail_weight(t, m);
      g -= xlogx(tail_mass);
    }
  }
  return g;
}

}  // namespace ngls
