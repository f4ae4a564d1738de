#include "ngls/ffi.hpp"

#include <stdexcept>
#include <utility>

namespace ngls {

AffineComposer::AffineComposer(const Family& family, int exact_depth)
    : family_(&family), exact_depth_(exact_depth) {
  if (exact_depth < 0) throw std::invalid_argument("exact depth must be non-negative");
}

void AffineComposer::push(int symbol, int64_t digit) {
  if (symbol < 0 || symbol >= family_->size())
    throw std::invalid_argument("symbol index out of range: " + std::to_string(symbol));
  const GlsSystem& sys = (*family_)[symbol];
  if (!sys.digit_valid(digit))
    throw std::invalid_argument("digit out of range: " + std::to_string(digit));

  symbols_.push_back(symbol);
  word_.push_back(digit);
  log_length_ += sys.log_ratio(digit);

  const bool increasing = sys.orientation(digit) == Orientation::increasing;
  const auto [lo, hi] = sys.interval(digit);
  const double c = increasing ? lo : hi;
  const double d = increasing ? hi - lo : lo - hi;
  shift_d_ += slope_d_ * c;
  slope_d_ *= d;
  if (!increasing) sign_ = -sign_;

  if (!exact_) return;
  if (static_cast<int>(depth()) > exact_depth_) {
    exact_ = false;
    return;
  }
  const auto iv = sys.interval_exact(digit);
  if (!iv) {
    exact_ = false;
    return;
  }
  const Rat len = iv->second - iv->first;
  const Rat ce = increasing ? iv->first : iv->second;
  const Rat de = increasing ? len : -len;
  shift_ += slope_ * ce;
  slope_ *= de;
}

Rat AffineComposer::apply_exact(const Rat& x) const {
  if (!exact_) throw std::domain_error("composition is not exactly representable");
  return shift_ + slope_ * x;
}

Ffi AffineComposer::interval() const {
  Ffi out;
  out.symbols = symbols_;
  out.word = word_;
  out.exact = exact_;
  out.log_length = log_length_;
  out.sign = sign_;
  if (exact_) {
    const Rat a = shift_, b = shift_ + slope_;
    out.lo = a <= b ? a : b;
    out.hi = a <= b ? b : a;
    out.lo_d = to_double(out.lo);
    out.hi_d = to_double(out.hi);
  } else {
    const double a = shift_d_, b = shift_d_ + slope_d_;
    out.lo_d = a <= b ? a : b;
    out.hi_d = a <= b ? b : a;
  }
  return out;
}

Ffi fundamental_interval(const Family& family, OmegaSequence& omega,
                         std::span<const int64_t> word, int exact_depth) {
  const auto symbols = omega.prefix(static_cast<int64_t>(word.size()));
  return fundamental_interval(family, symbols, word, exact_depth);
}

Ffi fundamental_interval(const Family& family, std::span<const int> symbols,
                         std::span<const int64_t> word, int exact_depth) {
  if (symbols.size() != word.size())
    throw std::invalid_argument("symbol and digit counts differ");
  AffineComposer comp(family, exact_depth);
  for (size_t i = 0; i < word.size(); ++i) comp.push(symbols[i], word[i]);
  return comp.interval();
}

}  // namespace ngls
