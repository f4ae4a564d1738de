#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/frequency.hpp"
#include "ngls/rational.hpp"

namespace ngls {

/// Product measure on digit words: position n draws from the conditional law
/// b -> alpha_(omega_n, b) / alpha_omega_n. FFI masses are the products of
/// the per-step probabilities.
class FibreBernoulli {
 public:
  FibreBernoulli(const Family& family, FrequencyVector alpha,
                 OmegaSequence& omega);

  const Family& family() const { return *family_; }
  const FrequencyVector& alpha() const { return alpha_; }
  OmegaSequence& omega() { return *omega_; }

  /// log-mass of the word's fundamental interval; -inf on a zero-mass digit.
  double log_mass(std::span<const int64_t> word);

  /// One word drawn digit by digit via inverse-CDF sampling. Geometric tails
  /// invert in closed form, power and logpower tails by bisection on their
  /// survival series; a draw beyond the 62-bit digit range throws GuardError
  /// (for logpower tails this is expected behaviour on long words, their
  /// digits genuinely overflow any fixed-width integer with small but
  /// non-negligible probability).
  std::vector<int64_t> sample(int64_t depth, uint64_t seed);

 private:
  int64_t sample_digit(int s, double u) const;

  const Family* family_;
  FrequencyVector alpha_;
  OmegaSequence* omega_;
};

struct TraceRow {
  int64_t n = 0;
  double log_mass = 0.0;
  double log_length = 0.0;
  double ratio = 0.0;       // log_mass / log_length
  double comparator = 0.0;  // reference level the ratio is measured against
};

/// Per-prefix ratio of measure decay to length decay along a word; the
/// comparator column is filled with the caller's reference value.
std::vector<TraceRow> local_dimension_trace(FibreBernoulli& mu,
                                            std::span<const int64_t> word,
                                            double comparator = 0.0,
                                            int64_t stride = 1);

/// Sparse sub-sequence of the positions of one symbol: j lists every
/// position carrying the symbol, theta(k) = j_(ceil(k^gamma)).
struct ThetaSchedule {
  int sigma = 0;
  double gamma = 1.5;
  int64_t horizon = 0;
  std::vector<int64_t> j;      // 1-based positions of sigma in omega
  std::vector<int64_t> theta;  // theta[k-1] = j[ceil(k^gamma) - 1]

  int64_t max_k() const { return static_cast<int64_t>(theta.size()); }
  int64_t theta_of(int64_t k) const;

  /// min{k >= kappa : theta(k) > n}, by bisection over the table.
  int64_t kappa_of_depth(int64_t n, int64_t kappa) const;
};

ThetaSchedule theta_schedule(const Family& family, OmegaSequence& omega,
                             int sigma, double gamma, int64_t horizon);

struct KappaThresholds {
  int64_t kappa1 = 1;  // first k from which 2^k - 2^(dk) > 2^((1-e)k) stays true
  int64_t kappa2 = 1;  // first n from which N_n^eta <= n^(1+e) stays true
  int64_t kappa = 1;   // max of the two
};

KappaThresholds kappa_thresholds(double eps, double delta,
                                 const GlsSystem& system,
                                 int64_t horizon = 4096);

struct BaseSequence {
  std::vector<int64_t> a;          // a[i] is the digit at position i+1
  std::vector<int64_t> perturbed;  // positions where the square rule replaced a digit
  double realized_bound = 0.0;     // max_n N_(omega_n, a_n) / n^exponent
  double bound_exponent = 1.0;     // (1+eps)/min infinite eta, or 1 if none
};

/// Weaves per-symbol greedy digit sequences along omega (so digits at step n
/// never exceed n) and replaces the digit at every perfect-square position
/// by the smallest alternative, keeping the expansion away from interval
/// endpoints without disturbing frequencies.
BaseSequence build_base_sequence(const Family& family,
                                 const FrequencyVector& alpha,
                                 OmegaSequence& omega, int64_t n, double eps);

/// Uniform draws over the admissible digit windows (2^k - 2^(dk), 2^k] at
/// the scheduled positions, the base sequence everywhere else. Prefix masses
/// are the products of the inverse window sizes crossed so far.
class EaSampler {
 public:
  EaSampler(const Family& family, ThetaSchedule schedule, BaseSequence base,
            double eps, double delta);

  int64_t kappa() const { return kappa_; }
  int64_t kappa1() const { return kappa1_; }
  int64_t kappa2() const { return kappa2_; }
  double eps() const { return eps_; }
  double delta() const { return delta_; }
  const ThetaSchedule& schedule() const { return schedule_; }
  const BaseSequence& base() const { return base_; }

  /// First depth at which the measure starts splitting: theta(kappa).
  int64_t first_scheduled_depth() const;

  /// Admissible digit window at schedule level k (inclusive bounds).
  std::pair<int64_t, int64_t> window(int64_t k) const;

  std::vector<int64_t> sample(int64_t depth, uint64_t seed) const;

  /// log-mass of any consistent depth-n prefix.
  double log_mass(int64_t depth) const;

  /// log-mass of the word's interval: log_mass(n) if the word lies in the
  /// support, -inf otherwise.
  double log_mass_word(std::span<const int64_t> word) const;

 private:
  const Family* family_;
  ThetaSchedule schedule_;
  BaseSequence base_;
  double eps_;
  double delta_;
  int64_t kappa1_ = 1;
  int64_t kappa2_ = 1;
  int64_t kappa_ = 1;
  std::unordered_map<int64_t, int64_t> level_of_position_;  // theta(k) -> k, k >= kappa
};

/// Mass-to-length ratio trace of a sampled window word, with the schedule's
/// target level delta * eta_T / (1 + eps) in the comparator column. Rows
/// start at the first scheduled depth.
std::vector<TraceRow> eta_lower_trace(const EaSampler& sampler,
                                      const Family& family,
                                      OmegaSequence& omega, int64_t depth,
                                      uint64_t seed);

}  // namespace ngls
