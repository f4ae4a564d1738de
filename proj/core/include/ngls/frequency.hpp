#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/rational.hpp"

namespace ngls {

/// Closed-form digit-mass rule for all digits past the explicit head.
enum class TailKind { zero, geometric, power, logpower };

struct TailRule {
  TailKind kind = TailKind::zero;
  Rat mass = Rat(0);  // total mass of the tail, exact
  Rat r = Rat(0);     // geometric: entry b gets mass * (1-r) r^(b-m0-1)
  double p = 0.0;     // power: entries proportional to b^-p, p > 1
  double q = 0.0;     // logpower: entries proportional to 1/(b log^q(b+2)), q > 1

  static TailRule zero_tail();
  static TailRule geometric_tail(Rat mass, Rat r);
  static TailRule power_tail(Rat mass, double p);
  static TailRule logpower_tail_rule(Rat mass, double q);
};

/// Digit masses for one symbol: explicit head entries for b = 1..head.size(),
/// then the tail rule for every larger digit.
struct SymbolLaw {
  std::vector<Rat> head;
  TailRule tail;
};

SymbolLaw dirac_law(int64_t digit, Rat mass = Rat(1));
SymbolLaw uniform_law(int64_t digits, Rat mass = Rat(1));
SymbolLaw head_law(std::vector<Rat> weights, Rat mass = Rat(1));
SymbolLaw geometric_law(Rat r, Rat mass = Rat(1));
SymbolLaw power_law(double p, Rat mass = Rat(1));
SymbolLaw logpower_law(double q, Rat mass = Rat(1));

/// A probability vector over the digit universe {(s,b)}: per-symbol laws
/// whose total mass is exactly 1. Head entries and geometric tails are
/// rational; power and logpower tail entries carry irrational normalizers
/// and are served as doubles only.
class FrequencyVector {
 public:
  FrequencyVector(const Family& family, std::vector<SymbolLaw> laws);

  const Family& family() const { return *family_; }
  int size() const { return static_cast<int>(laws_.size()); }
  const SymbolLaw& law(int s) const { return laws_.at(static_cast<size_t>(s)); }
  int64_t head_size(int s) const;

  double alpha(int s, int64_t b) const;
  std::optional<Rat> alpha_exact(int s, int64_t b) const;
  double log_alpha(int s, int64_t b) const;

  double symbol_mass(int s) const;
  Rat symbol_mass_exact(int s) const;

  double conditional(int s, int64_t b) const;
  double log_conditional(int s, int64_t b) const;

  /// Mass of digits strictly above m for symbol s.
  double tail_mass_from(int s, int64_t m) const;
  std::optional<Rat> tail_mass_from_exact(int s, int64_t m) const;

  /// Largest digit carrying positive mass, when the support is finite.
  std::optional<int64_t> support_upper(int s) const;

  /// The law of symbol s rescaled to total mass 1. Requires alpha_s > 0.
  SymbolLaw conditional_law(int s) const;

 private:
  const Family* family_;
  std::vector<SymbolLaw> laws_;
  std::vector<Rat> symbol_mass_;
};

/// Non-degeneracy: every symbol carries some digit of positive mass.
bool check_dagger(const Family& family, const FrequencyVector& alpha);

/// Running digit-pair and symbol counters over a growing word.
class TauCounter {
 public:
  explicit TauCounter(int num_symbols);

  void record(int sym, int64_t digit);
  int64_t n() const { return n_; }
  int64_t symbol_count(int sym) const;
  int64_t digit_count(int sym, int64_t digit) const;
  const std::map<int64_t, int64_t>& digit_counts(int sym) const;

 private:
  int64_t n_ = 0;
  std::vector<int64_t> sym_counts_;
  std::vector<std::map<int64_t, int64_t>> digit_counts_;
};

struct DeviationRow {
  int64_t n = 0;
  double max_deviation = 0.0;
};

struct SpectrumCheck {
  bool consistent = false;
  double final_deviation = 0.0;
  std::vector<DeviationRow> trace;  // checkpoints at powers of two + horizon
};

/// Finite-horizon witness that the symbol frequencies of omega match the
/// per-symbol masses of alpha. Numerical evidence, not a proof of the limit.
SpectrumCheck omega_in_spectrum(const Family& family,
                                const FrequencyVector& alpha,
                                OmegaSequence& omega, int64_t horizon,
                                double tol);

/// Deterministic digit sequence realizing the law's digit frequencies.
/// Greedy deficit rule: at step k emit the digit maximizing k*w_d - count_d
/// among digits with w_d >= 1/k^2 (the smallest positive-mass digit is always
/// eligible), ties to the smallest digit. Emitted digits never exceed
/// max(k, smallest positive digit). Per-step cost grows with the number of
/// distinct digits emitted so far.
std::vector<int64_t> frequency_sequence(const SymbolLaw& law, int64_t n);

/// b_n = the tau_{omega_n}(omega, n)-th entry of stream omega_n.
std::vector<int64_t> weave(OmegaSequence& omega,
                           const std::vector<std::vector<int64_t>>& streams,
                           int64_t n);

/// Max over d in the m-window of |tau_d/n - alpha_d| at checkpoint lengths
/// n = 1, 2, 4, ... plus the full word.
std::vector<DeviationRow> level_set_membership_trace(
    const Family& family, const FrequencyVector& alpha, OmegaSequence& omega,
    std::span<const int64_t> word, int64_t m);

}  // namespace ngls
