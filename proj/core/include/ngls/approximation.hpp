#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/frequency.hpp"
#include "ngls/rational.hpp"

namespace ngls {

/// One branch of a finite approximant: either a retained base map or an
/// increasing affine map filling a gap left by the discarded digits.
struct ApproxBranch {
  int64_t digit = 0;
  bool merged = false;
  double lo = 0.0;
  double hi = 1.0;
  std::optional<Rat> lo_exact;
  std::optional<Rat> hi_exact;
  Orientation orient = Orientation::increasing;
  double log_N = 0.0;  // -log(interval length)
  std::optional<Rat> ratio_exact;
  std::vector<int64_t> absorbed;  // base digits merged into this branch
  bool absorbs_tail = false;      // merged branch covering every digit > m
};

/// The cut-at-m approximant of one system: digits 1..m keep their maps, the
/// uncovered remainder of [0,1] becomes finitely many gap branches labelled
/// by the smallest digit each gap swallows.
struct ApproxSystem {
  std::string id;
  int64_t m = 1;
  bool exact = true;
  std::vector<ApproxBranch> branches;  // retained digits first, then gaps

  const ApproxBranch& find(int64_t digit) const;
  double log_N(int64_t digit) const { return find(digit).log_N; }

  /// The approximant digit a base digit lands on: itself when retained, the
  /// label of the absorbing gap otherwise.
  int64_t image_digit(int64_t base_digit) const;
};

ApproxSystem approximate_system(const GlsSystem& system, int64_t m);

struct ApproxFamily {
  int64_t m = 1;
  std::vector<ApproxSystem> systems;
};

ApproxFamily approximate_family(const Family& family, int64_t m);

struct ApproxDigitMass {
  int64_t digit = 0;
  bool merged = false;
  double mass = 0.0;
  std::optional<Rat> mass_exact;
};

/// Digit masses regrouped onto the approximant alphabet: retained digits
/// keep their mass, each gap digit collects the mass of everything it
/// absorbed. Per-symbol totals are untouched.
struct ApproxFrequency {
  int64_t m = 1;
  std::vector<std::vector<ApproxDigitMass>> per_symbol;

  const ApproxDigitMass& find(int s, int64_t digit) const;
};

ApproxFrequency project_frequency(const Family& family,
                                  const FrequencyVector& alpha, int64_t m);

struct ConvergenceRow {
  int64_t m = 0;
  double log_mass_m = 0.0;      // approximant mass of the containing cylinder
  int64_t merged_positions = 0; // word positions that fell into a gap branch
  bool equal = false;           // masses agree exactly with the base measure
};

struct ConvergenceTable {
  double log_mass = 0.0;    // base measure of the word
  int64_t stabilized_at = 0; // first m of the range from which rows are exact
  std::vector<ConvergenceRow> rows;
};

/// Approximant measure of a base word across a range of cuts. Once m passes
/// the largest digit of the word every position is retained and the row
/// equals the base mass exactly; below that the word's interval sits inside
/// a coarser gap cylinder whose mass is reported.
ConvergenceTable measure_convergence_check(const Family& family,
                                           const FrequencyVector& alpha,
                                           OmegaSequence& omega,
                                           std::span<const int64_t> word,
                                           int64_t m_lo, int64_t m_hi);

struct ApproxDimensionRow {
  int64_t m = 0;
  double value = 0.0;      // entropy/log-size ratio of the approximant
  double e_m = 0.0;        // window share of the approximant denominator
  double corrected = 0.0;  // e_m * base window ratio; never above value
};

/// Finite-approximant dimension values with the denominator correction
/// factor, for inspecting the climb of the corrected bound toward the
/// liminf ratio as the cut grows.
std::vector<ApproxDimensionRow> approx_dimension_trend(
    const Family& family, const FrequencyVector& alpha, int64_t m_lo,
    int64_t m_hi);

}  // namespace ngls
