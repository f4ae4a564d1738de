#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ngls/rational.hpp"
#include "ngls/rng.hpp"
#include "ngls/system.hpp"

namespace ngls {

/// A digit of the non-autonomous alphabet: system index plus branch digit.
struct Digit {
  int sym = 0;
  int64_t b = 0;
  friend bool operator==(const Digit&, const Digit&) = default;
};

/// The finite family {T_s} of GLS systems a driving sequence chooses from.
class Family {
 public:
  explicit Family(std::vector<GlsSystem> systems);

  int size() const { return static_cast<int>(systems_.size()); }
  const GlsSystem& operator[](int s) const { return systems_.at(static_cast<size_t>(s)); }
  int index_of(std::string_view id) const;  // throws if unknown

  /// max over the family of each system's exponent of convergence.
  double eta_max() const;

  /// All digits (s, b) with b <= m, capped at each finite system's branch
  /// count; the window D_m every dimension sum ranges over.
  std::vector<Digit> digit_window(int64_t m) const;

 private:
  std::vector<GlsSystem> systems_;
};

/// How the driving sequence omega is produced.
struct OmegaRule {
  enum class Kind { periodic, weave, bernoulli };
  Kind kind = Kind::periodic;
  std::vector<int> prefix;       // periodic only, may be empty
  std::vector<int> period;       // periodic only, never empty
  std::vector<Rat> weights;      // weave / bernoulli: target symbol frequencies
  uint64_t seed = 0;             // bernoulli only

  static OmegaRule periodic(std::vector<int> period, std::vector<int> prefix = {});
  static OmegaRule weave(std::vector<Rat> weights);
  static OmegaRule bernoulli(std::vector<Rat> weights, uint64_t seed);
};

/// Materialised view of omega. Positions are 1-based to match the usual
/// word indexing; the cache grows on demand, so sharing a sequence across
/// threads requires calling ensure() up front.
class OmegaSequence {
 public:
  OmegaSequence(const Family& family, OmegaRule rule);

  int at(int64_t n);                        // symbol index at position n >= 1
  std::span<const int> prefix(int64_t n);   // positions 1..n
  void ensure(int64_t n);
  const OmegaRule& rule() const { return rule_; }

 private:
  void extend();

  int num_symbols_;
  OmegaRule rule_;
  std::vector<int> cache_;
  // weave state
  std::vector<double> deficit_;
  std::vector<double> weight_d_;
  // bernoulli state
  std::vector<double> cdf_;
  Rng rng_{0};
};

}  // namespace ngls
