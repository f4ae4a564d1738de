#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ngls/series.hpp"

using namespace ngls;

TEST_CASE("zeta matches closed forms") {
  const double pi = std::acos(-1.0);
  CHECK(zeta(2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-13));
  CHECK(zeta(4.0) == doctest::Approx(pi * pi * pi * pi / 90.0).epsilon(1e-13));
  CHECK(zeta(5.0) == doctest::Approx(1.0369277551433715).epsilon(1e-14));
}

TEST_CASE("zeta_tail is zeta minus the head") {
  const double s = 3.0;
  double head = 0.0;
  for (int b = 1; b <= 10; ++b) head += std::pow(b, -s);
  CHECK(zeta_tail(s, 10) == doctest::Approx(zeta(s) - head).epsilon(1e-12));
  CHECK(zeta_tail(s, 0) == doctest::Approx(zeta(s)).epsilon(1e-14));
}

TEST_CASE("luroth tail telescopes at t = 1") {
  // sum over b > m of 1/(b(b+1)) = 1/(m+1)
  CHECK(luroth_weight_tail(0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(luroth_weight_tail(4, 1.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(luroth_weight_tail(99, 1.0) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("luroth tail at non-integer exponents matches direct summation") {
  const double t = 0.8;
  const int64_t cut = 4'000'000;
  double brute = 0.0;
  for (int64_t b = 1; b <= cut; ++b) {
    brute += std::pow(static_cast<double>(b) * (b + 1.0), -t);
  }
  // the partial sum equals the difference of two tails; compare there so the
  // slowly decaying remainder past the cut never enters the check
  const double head = luroth_weight_tail(0, t) - luroth_weight_tail(cut, t);
  CHECK(head == doctest::Approx(brute).epsilon(1e-9));
  // remainder past the cut is squeezed by the integral bounds of x^(-2t)
  const double remainder = luroth_weight_tail(cut, t);
  const double upper =
      std::pow(static_cast<double>(cut), 1.0 - 2 * t) / (2 * t - 1.0);
  CHECK(remainder > 0.0);
  CHECK(remainder < upper);
  CHECK(remainder > 0.99 * upper);
}

TEST_CASE("luroth tail at non-integer exponents obeys the recurrence") {
  for (double t : {0.6, 0.8, 1.3, 2.5}) {
    for (int64_t m : {0, 1, 7, 100}) {
      const double term =
          std::pow(static_cast<double>(m + 1) * (m + 2.0), -t);
      CHECK(luroth_weight_tail(m, t) - luroth_weight_tail(m + 1, t) ==
            doctest::Approx(term).epsilon(1e-10));
    }
  }
}

TEST_CASE("logpower tail satisfies the one-term recurrence") {
  const double q = 2.0;
  for (int64_t m : {0, 1, 5, 40}) {
    const double term =
        1.0 / (static_cast<double>(m + 1) *
               std::pow(std::log(static_cast<double>(m + 3)), q));
    CHECK(logpower_tail(m, q) - logpower_tail(m + 1, q) ==
          doctest::Approx(term).epsilon(1e-11));
  }
  CHECK(logpower_tail(0, 2.0) > 0.0);
}
