#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/ffi.hpp"
#include "ngls/rational.hpp"

namespace ngls {

/// How many expansions a point has, as far as the scan could certify.
enum class PointClass { unique, boundary, no_expansion };

struct ProjectResult {
  double value = 0.5;        // midpoint of the realized fundamental interval
  double error_bound = 0.5;  // half its length
  double log_length = 0.0;
  int64_t depth = 0;
  bool exact = false;
  Rat value_exact;           // midpoint, when the interval is exact
};

/// Digit source for tolerance-mode projection; 1-based position, nullopt
/// when the stream is exhausted.
using DigitStream = std::function<std::optional<int64_t>(int64_t)>;

/// Point named by a digit word: midpoint of its fundamental interval.
ProjectResult project(const Family& family, OmegaSequence& omega,
                      std::span<const int64_t> word,
                      int exact_depth = kDefaultExactDepth);

/// Pull digits until the fundamental interval is no longer than `tolerance`.
ProjectResult project_to_tolerance(const Family& family, OmegaSequence& omega,
                                   const DigitStream& stream, double tolerance,
                                   int64_t max_depth = int64_t{1} << 20,
                                   int exact_depth = kDefaultExactDepth);

/// Signed series form of the expansion,
///   sum_n (-1)^{eps_1 + ... + eps_{n-1}} a_n / (N_1 ... N_n),
/// which telescopes to the left limit point of the word's interval nest.
double series_expansion(const Family& family, OmegaSequence& omega,
                        std::span<const int64_t> word);

struct Expansion {
  PointClass cls = PointClass::unique;
  /// The expansion of x: at a shared endpoint with two full-depth words this
  /// is the spatially left one; otherwise the unique surviving word.
  std::vector<int64_t> word;
  /// The other word branching off the shared endpoint. May be shorter than
  /// requested when its continuation runs into an uncovered point.
  std::vector<int64_t> alt_word;
  bool exact = true;            // digit decisions stayed on the rational track
  int64_t certified_depth = 0;  // depth the classification is certified to
};

Expansion digits_of(const Family& family, OmegaSequence& omega, const Rat& x,
                    int64_t n);
Expansion digits_of(const Family& family, OmegaSequence& omega, double x,
                    int64_t n);

struct RoundtripResult {
  double residual = 0.0;
  double ffi_length = 1.0;  // length of the realized fundamental interval
  int64_t depth = 0;
};

/// Expand x to n digits, rebuild the word's interval, and report the
/// distance from its midpoint. A double input is expanded at its exact
/// binary value, so on exact rules the residual is certified to stay
/// within half the interval length no matter how small the interval gets.
RoundtripResult roundtrip_check(const Family& family, OmegaSequence& omega,
                                const Rat& x, int64_t n);
RoundtripResult roundtrip_check(const Family& family, OmegaSequence& omega,
                                double x, int64_t n);

}  // namespace ngls
