#pragma once

#include <cstdint>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/frequency.hpp"
#include "ngls/rational.hpp"

namespace ngls {

struct EtaGridRow {
  int64_t n = 0;
  double ratio = 0.0;  // log n / log N_n
};

struct EtaResult {
  double value = 0.0;     // extrapolated estimate, clamped to [0,1]
  double raw = 0.0;       // last grid ratio
  double analytic = 0.0;  // closed-form value of the named rule
  std::vector<EtaGridRow> grid;
};

/// Exponent of convergence of {1/N_b}: grid evaluation of log n / log N_n on
/// n = 2^j up to the horizon, extrapolated in 1/log n. Finite systems are 0
/// with an empty grid.
EtaResult eta(const GlsSystem& system, int64_t horizon = int64_t{1} << 20,
              bool extrapolate = true);

struct BetaRow {
  int64_t m = 0;
  double numerator = 0.0;    // entropy over the m-window
  double denominator = 0.0;  // Lyapunov sum over the m-window
  double value = 0.0;        // R_m; +inf while the window carries no mass
};

struct BetaResult {
  double value = 0.0;        // min of R_m over the stabilized window [M/2, M]
  double oscillation = 0.0;  // spread of R_m over that window
  bool lyapunov_divergent = false;
  std::vector<BetaRow> trace;
};

/// Entropy-over-Lyapunov ratio trace R_m for m = 1..M and its window-min
/// liminf estimate. The divergence flag comes from an analytic comparison
/// test on the law's tail against the system's branch-length rule, never
/// from partial-sum thresholds.
BetaResult beta(const Family& family, const FrequencyVector& alpha,
                int64_t M = 200);

struct DimensionReport {
  std::vector<double> eta_per_symbol;
  double eta_T = 0.0;
  BetaResult beta;
  double dim = 0.0;
};

/// dim = max(eta_T, beta), collapsing to eta_T when the Lyapunov series
/// diverges.
DimensionReport dim_formula(const Family& family, const FrequencyVector& alpha,
                            int64_t M = 200);

/// Single-system dimension in its classical form
///   max(eta, liminf_m (-sum_{k<=m} a_k log a_k)/(sum_{k<=m} a_k log N_k)).
/// Agrees with dim_formula on one-symbol families row for row.
double flmw_dim(const Family& family, const FrequencyVector& alpha,
                int64_t M = 200);
std::vector<BetaRow> flmw_trace(const Family& family,
                                const FrequencyVector& alpha, int64_t M = 200);

struct CountVectors {
  std::vector<Digit> window;                  // digit_window(m) order
  std::vector<int64_t> tau;                   // per-symbol counts of the prefix
  std::vector<std::vector<int64_t>> vectors;  // aligned with window
};

/// All window-digit count vectors (n_d) with |n_d/n - alpha_d| < eps and
/// per-symbol totals within the prefix's symbol counts. Throws GuardError
/// when the candidate grid exceeds the budget.
CountVectors enumerate_count_vectors(const Family& family, OmegaSequence& omega,
                                     int64_t n, const FrequencyVector& alpha,
                                     int64_t m, double eps,
                                     int64_t budget = 1'000'000);

/// Log of the multinomial cover sum over the enumerated count vectors:
///   sum over (n_d) of  prod_d N_d^{-t n_d} * prod_s T_s(t,m)^{tau_s - n_s}
///                      * prod_s tau_s! / (prod_d n_d! prod_s (tau_s - n_s)!)
/// with T_s(t,m) = sum_{b>m} N_{s,b}^{-t}. Throws GuardError when some
/// needed tail diverges at exponent t.
double exact_cover_sum(const Family& family, OmegaSequence& omega, int64_t n,
                       const FrequencyVector& alpha, double t, int64_t m,
                       double eps, int64_t budget = 1'000'000);

/// Leading-order per-level rate of the cover sum at exponent t and cut m;
/// a negative value certifies cover decay (upper-bound witness), a positive
/// one certifies growth.
double cover_rate(const Family& family, const FrequencyVector& alpha, double t,
                  int64_t m);

}  // namespace ngls
