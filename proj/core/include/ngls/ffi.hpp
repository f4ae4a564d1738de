#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ngls/family.hpp"
#include "ngls/rational.hpp"

namespace ngls {

inline constexpr int kDefaultExactDepth = 64;

/// A fundamental interval: the image of [0,1] under the composition of the
/// branch maps picked out by (symbols, word). Exact endpoints are kept while
/// every branch on the way down has rational data and the depth stays within
/// the requested exact depth; the double endpoints and the log-length are
/// always available.
struct Ffi {
  std::vector<int> symbols;
  std::vector<int64_t> word;
  bool exact = false;
  Rat lo;
  Rat hi;
  double lo_d = 0.0;
  double hi_d = 1.0;
  double log_length = 0.0;
  int sign = 1;  // +1 if the composed map is increasing
};

/// Incremental composition F = f_1 o f_2 o ... o f_n, stored as
/// F(x) = shift + slope * x. push() appends one branch map on the right,
/// so after n pushes F([0,1]) is the depth-n fundamental interval.
class AffineComposer {
 public:
  explicit AffineComposer(const Family& family,
                          int exact_depth = kDefaultExactDepth);

  void push(int symbol, int64_t digit);

  size_t depth() const { return symbols_.size(); }
  bool exact() const { return exact_; }
  int sign() const { return sign_; }
  double log_length() const { return log_length_; }

  double apply(double x) const { return shift_d_ + slope_d_ * x; }
  Rat apply_exact(const Rat& x) const;  // throws if exactness was lost

  Ffi interval() const;

 private:
  const Family* family_;
  int exact_depth_;
  std::vector<int> symbols_;
  std::vector<int64_t> word_;
  bool exact_ = true;
  Rat shift_ = Rat(0);
  Rat slope_ = Rat(1);
  double shift_d_ = 0.0;
  double slope_d_ = 1.0;
  double log_length_ = 0.0;
  int sign_ = 1;
};

/// Fundamental interval of `word` along the driving sequence, symbols taken
/// from positions 1..word.size().
Ffi fundamental_interval(const Family& family, OmegaSequence& omega,
                         std::span<const int64_t> word,
                         int exact_depth = kDefaultExactDepth);

/// Same with an explicit symbol choice per position.
Ffi fundamental_interval(const Family& family, std::span<const int> symbols,
                         std::span<const int64_t> word,
                         int exact_depth = kDefaultExactDepth);

}  // namespace ngls
