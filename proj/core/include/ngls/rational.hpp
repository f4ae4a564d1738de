#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ngls {

/// Arbitrary-precision rational. Interval endpoints, branch ratios and
/// frequency weights are kept exact in this type whenever the defining
/// data is rational; doubles are derived views, never the source of truth.
using Rat = mpq_class;

inline Rat rat(int64_t num, int64_t den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

/// Parses "p/q" or a plain integer "p". Whitespace is not accepted.
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  Rat q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

/// Every finite double is a dyadic rational; the conversion is exact.
inline Rat rat_from_double(double x) { return Rat(x); }

inline double to_double(const Rat& q) { return q.get_d(); }

/// Floor of a non-negative rational as a 64-bit integer.
inline int64_t floor_int64(const Rat& q) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!z.fits_slong_p()) throw std::overflow_error("rational floor exceeds int64");
  return z.get_si();
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// q^e for non-negative integer exponents.
inline Rat rat_pow(const Rat& q, uint64_t e) {
  Rat out;
  mpz_pow_ui(out.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
  out.canonicalize();
  return out;
}

/// log of a positive rational, computed without overflowing doubles.
inline double log_rat(const Rat& q) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  signed long exp_num = 0, exp_den = 0;
  double m_num = mpz_get_d_2exp(&exp_num, q.get_num().get_mpz_t());
  double m_den = mpz_get_d_2exp(&exp_den, q.get_den().get_mpz_t());
  constexpr double ln2 = 0.6931471805599453094;
  return std::log(m_num) - std::log(m_den) +
         ln2 * (static_cast<double>(exp_num) - static_cast<double>(exp_den));
}

}  // namespace ngls
