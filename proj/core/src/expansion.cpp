#include "ngls/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ngls {

namespace {

ProjectResult result_from(const Ffi& ffi) {
  ProjectResult out;
  out.depth = static_cast<int64_t>(ffi.word.size());
  out.log_length = ffi.log_length;
  out.exact = ffi.exact;
  if (ffi.exact) {
    out.value_exact = (ffi.lo + ffi.hi) / 2;
    out.value = to_double(out.value_exact);
    out.error_bound = to_double((ffi.hi - ffi.lo) / 2);
  } else {
    out.value = 0.5 * (ffi.lo_d + ffi.hi_d);
    out.error_bound = 0.5 * std::exp(ffi.log_length);
  }
  return out;
}

/// One branch of the point-to-digits scan. The iterate y satisfies
/// x = F_k(y) after k accepted digits, so y in [0,1] certifies that the
/// word's interval still contains x.
struct Track {
  bool alive = true;
  bool exact = true;
  Rat y;
  double yd = 0.0;
  std::vector<int64_t> word;
  int64_t died_at = 0;
};

void to_double_track(Track& t) {
  if (!t.exact) return;
  t.yd = to_double(t.y);
  t.exact = false;
}

double invert_double(const GlsSystem& sys, int64_t b, double y) {
  const auto [lo, hi] = sys.interval(b);
  const double len = hi - lo;
  double out = sys.orientation(b) == Orientation::increasing ? (y - lo) / len
                                                             : (hi - y) / len;
  return std::clamp(out, 0.0, 1.0);
}

/// Accept digit b on track t and pull the iterate back through the branch.
void advance(const GlsSystem& sys, int64_t b, Track& t) {
  t.word.push_back(b);
  if (t.exact) {
    if (const auto iv = sys.interval_exact(b)) {
      const Rat len = iv->second - iv->first;
      t.y = sys.orientation(b) == Orientation::increasing
                ? (t.y - iv->first) / len
                : (iv->second - t.y) / len;
      return;
    }
    to_double_track(t);
  }
  t.yd = invert_double(sys, b, t.yd);
}

LocateResult locate_track(const GlsSystem& sys, Track& t) {
  if (t.exact && sys.exact()) return sys.locate(t.y);
  to_double_track(t);
  return sys.locate(t.yd);
}

template <typename X>
Expansion digits_of_impl(const Family& family, OmegaSequence& omega, const X& x,
                         int64_t n) {
  if (n < 0) throw std::invalid_argument("expansion depth must be non-negative");
  Expansion out;
  Track first;
  if constexpr (std::is_same_v<X, Rat>) {
    if (x < 0 || x > 1) throw std::invalid_argument("point outside [0,1]");
    first.y = x;
    first.yd = to_double(x);
  } else {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("point outside [0,1]");
    first.exact = false;
    first.yd = x;
  }

  std::vector<Track> tracks{std::move(first)};
  bool split = false;
  for (int64_t k = 1; k <= n; ++k) {
    const GlsSystem& sys = family[omega.at(k)];
    const size_t rounds = tracks.size();
    for (size_t i = 0; i < rounds; ++i) {
      Track& t = tracks[i];
      if (!t.alive) continue;
      const LocateResult loc = locate_track(sys, t);
      switch (loc.kind) {
        case LocateResult::Kind::gap:
          t.alive = false;
          t.died_at = k;
          break;
        case LocateResult::Kind::interior:
        case LocateResult::Kind::endpoint:
          advance(sys, loc.digit, t);
          break;
        case LocateResult::Kind::shared:
          if (!split) {
            split = true;
            Track right = t;
            advance(sys, loc.right_digit, right);
            tracks.push_back(std::move(right));
          }
          advance(sys, loc.digit, tracks[i]);
          break;
      }
    }
  }

  std::vector<const Track*> full;
  for (const Track& t : tracks)
    if (t.alive) full.push_back(&t);

  if (full.empty()) {
    out.cls = PointClass::no_expansion;
    int64_t certified = 0;
    for (const Track& t : tracks) {
      certified = std::max(certified, t.died_at);
      if (t.word.size() > out.word.size()) out.word = t.word;
    }
    if (tracks.size() == 2) out.alt_word = tracks[1].word;
    out.certified_depth = certified;
    out.exact = tracks.front().exact;
    return out;
  }

  out.certified_depth = n;
  if (full.size() == 2) {
    out.cls = PointClass::boundary;
    out.word = full[0]->word;
    out.alt_word = full[1]->word;
    out.exact = full[0]->exact;
  } else {
    out.cls = PointClass::unique;
    out.word = full[0]->word;
    out.exact = full[0]->exact;
    if (split) {
      for (const Track& t : tracks)
        if (!t.alive) out.alt_word = t.word;
    }
  }
  return out;
}

}  // namespace

ProjectResult project(const Family& family, OmegaSequence& omega,
                      std::span<const int64_t> word, int exact_depth) {
  return result_from(fundamental_interval(family, omega, word, exact_depth));
}

ProjectResult project_to_tolerance(const Family& family, OmegaSequence& omega,
                                   const DigitStream& stream, double tolerance,
                                   int64_t max_depth, int exact_depth) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  AffineComposer comp(family, exact_depth);
  const double log_tol = std::log(tolerance);
  int64_t pos = 0;
  while (comp.log_length() > log_tol) {
    if (pos >= max_depth)
      throw std::invalid_argument("depth budget exhausted before reaching tolerance");
    ++pos;
    const std::optional<int64_t> b = stream(pos);
    if (!b)
      throw std::invalid_argument("digit stream ended before reaching tolerance");
    comp.push(omega.at(pos), *b);
  }
  return result_from(comp.interval());
}

double series_expansion(const Family& family, OmegaSequence& omega,
                        std::span<const int64_t> word) {
  double sum = 0.0;
  double prod = 1.0;
  double sign = 1.0;
  for (size_t i = 0; i < word.size(); ++i) {
    const GlsSystem& sys = family[omega.at(static_cast<int64_t>(i) + 1)];
    const int64_t b = word[i];
    if (!sys.digit_valid(b))
      throw std::invalid_argument("digit out of range: " + std::to_string(b));
    const double ratio = std::exp(sys.log_ratio(b));
    const auto [lo, hi] = sys.interval(b);
    const bool increasing = sys.orientation(b) == Orientation::increasing;
    const double a = (increasing ? lo : hi) / ratio;
    prod *= ratio;
    sum += sign * a * prod;
    if (!increasing) sign = -sign;
  }
  return sum;
}

Expansion digits_of(const Family& family, OmegaSequence& omega, const Rat& x,
                    int64_t n) {
  return digits_of_impl(family, omega, x, n);
}

Expansion digits_of(const Family& family, OmegaSequence& omega, double x,
                    int64_t n) {
  return digits_of_impl(family, omega, x, n);
}

namespace {

RoundtripResult roundtrip_impl(const Family& family, OmegaSequence& omega,
                               const Rat& x, int64_t n) {
  const Expansion e = digits_of(family, omega, x, n);
  RoundtripResult out;
  out.depth = static_cast<int64_t>(e.word.size());
  const Ffi ffi = fundamental_interval(family, omega, e.word);
  out.ffi_length = ffi.exact ? to_double(ffi.hi - ffi.lo) : std::exp(ffi.log_length);
  if (ffi.exact) {
    const Rat mid = (ffi.lo + ffi.hi) / 2;
    out.residual = to_double(abs(mid - x));
  } else {
    const ProjectResult p = result_from(ffi);
    out.residual = std::abs(p.value - to_double(x));
  }
  return out;
}

}  // namespace

RoundtripResult roundtrip_check(const Family& family, OmegaSequence& omega,
                                const Rat& x, int64_t n) {
  return roundtrip_impl(family, omega, x, n);
}

RoundtripResult roundtrip_check(const Family& family, OmegaSequence& omega,
                                double x, int64_t n) {
  return roundtrip_impl(family, omega, rat_from_double(x), n);
}

}  // namespace ngls
