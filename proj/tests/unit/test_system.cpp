#include <doctest.h>

#include <cmath>

#include "ngls/errors.hpp"
#include "ngls/system.hpp"

using namespace ngls;

TEST_CASE("finite digits are labelled longest-first") {
  // spatial lengths 1/6, 1/2, 1/3: the middle interval is longest
  const GlsSystem sys = GlsSystem::finite(
      "f", {rat(1, 6), rat(1, 2), rat(1, 3)});
  CHECK(sys.digit_count() == 3);
  CHECK(sys.interval_exact(1) == std::pair{rat(1, 6), rat(2, 3)});
  CHECK(sys.interval_exact(2) == std::pair{rat(2, 3), rat(1)});
  CHECK(sys.interval_exact(3) == std::pair{rat(0), rat(1, 6)});
  CHECK(*sys.ratio_exact(1) == rat(1, 2));
  CHECK(*sys.ratio_exact(3) == rat(1, 6));
}

TEST_CASE("finite ties keep spatial order") {
  const GlsSystem sys = GlsSystem::finite("b", {rat(1, 2), rat(1, 2)});
  CHECK(sys.interval_exact(1) == std::pair{rat(0), rat(1, 2)});
  CHECK(sys.interval_exact(2) == std::pair{rat(1, 2), rat(1)});
}

TEST_CASE("finite lengths must be positive and tile the interval") {
  CHECK_THROWS_AS(GlsSystem::finite("x", {rat(1, 2), rat(1, 3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GlsSystem::finite("x", {rat(3, 2), rat(-1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GlsSystem::finite("x", {}), std::invalid_argument);
}

TEST_CASE("luroth intervals and ratios") {
  const GlsSystem sys = GlsSystem::luroth("L");
  CHECK_FALSE(sys.digit_count().has_value());
  for (int64_t b : {1, 2, 3, 17}) {
    CHECK(sys.interval_exact(b) == std::pair{rat(1, b + 1), rat(1, b)});
    CHECK(*sys.ratio_exact(b) == rat(1, b * (b + 1)));
    CHECK(sys.log_N(b) ==
          doctest::Approx(std::log(static_cast<double>(b) * (b + 1)))
              .epsilon(1e-14));
  }
  CHECK(*sys.tail_ratio_sum_exact(4) == rat(1, 5));
  CHECK(sys.tail_ratio_sum(9) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("luroth maps are increasing onto their digit interval") {
  const GlsSystem sys = GlsSystem::luroth("L");
  CHECK(sys.map_apply(3, rat(0)) == rat(1, 4));
  CHECK(sys.map_apply(3, rat(1)) == rat(1, 3));
  CHECK(sys.orientation(3) == Orientation::increasing);
  CHECK(sys.map_apply(1, rat(1, 2)) == rat(3, 4));
}

TEST_CASE("geometric layouts pack in opposite directions") {
  const GlsSystem asc = GlsSystem::geometric("ga", rat(1, 2));
  CHECK(asc.interval_exact(1) == std::pair{rat(0), rat(1, 2)});
  CHECK(asc.interval_exact(3) == std::pair{rat(3, 4), rat(7, 8)});
  CHECK(*asc.tail_ratio_sum_exact(3) == rat(1, 8));

  const GlsSystem desc =
      GlsSystem::geometric("gd", rat(1, 2), Layout::descending);
  CHECK(desc.interval_exact(1) == std::pair{rat(1, 2), rat(1)});
  CHECK(desc.interval_exact(2) == std::pair{rat(1, 4), rat(1, 2)});
}

TEST_CASE("geometric ratio bounds") {
  CHECK_THROWS_AS(GlsSystem::geometric("g", rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(GlsSystem::geometric("g", rat(0)), std::invalid_argument);
}

TEST_CASE("power systems are double-only") {
  const GlsSystem sys = GlsSystem::power("P", 2.0);
  CHECK_FALSE(sys.exact());
  CHECK_FALSE(sys.ratio_exact(1).has_value());
  CHECK_FALSE(sys.interval_exact(1).has_value());
  const double inv_zeta2 = 6.0 / (std::acos(-1.0) * std::acos(-1.0));
  CHECK(sys.interval(1).second == doctest::Approx(inv_zeta2).epsilon(1e-13));
  CHECK(sys.log_ratio(3) ==
        doctest::Approx(-2.0 * std::log(3.0) - std::log(1.0 / inv_zeta2))
            .epsilon(1e-12));
  CHECK_THROWS_AS(GlsSystem::power("P", 1.0), std::invalid_argument);
}

TEST_CASE("exponent of convergence closed forms") {
  CHECK(GlsSystem::luroth("L").eta_analytic() == 0.5);
  CHECK(GlsSystem::power("P", 4.0).eta_analytic() == 0.25);
  CHECK(GlsSystem::geometric("G", rat(1, 3)).eta_analytic() == 0.0);
  CHECK(GlsSystem::finite("F", {rat(1, 2), rat(1, 2)}).eta_analytic() == 0.0);
}

TEST_CASE("locate distinguishes interior, endpoints, shared points and gaps") {
  const GlsSystem lur = GlsSystem::luroth("L");

  const LocateResult interior = lur.locate(rat(7, 10));
  CHECK(interior.kind == LocateResult::Kind::interior);
  CHECK(interior.digit == 1);

  const LocateResult shared = lur.locate(rat(1, 2));
  CHECK(shared.kind == LocateResult::Kind::shared);
  CHECK(shared.digit == 2);
  CHECK(shared.right_digit == 1);

  const LocateResult top = lur.locate(rat(1));
  CHECK(top.kind == LocateResult::Kind::endpoint);
  CHECK(top.digit == 1);

  CHECK(lur.locate(rat(0)).kind == LocateResult::Kind::gap);

  const GlsSystem asc = GlsSystem::geometric("g", rat(1, 2));
  CHECK(asc.locate(rat(1)).kind == LocateResult::Kind::gap);
  CHECK(asc.locate(rat(1, 3)).digit == 1);
}

TEST_CASE("locate agrees between rational and double queries") {
  const GlsSystem lur = GlsSystem::luroth("L");
  for (double x : {0.03, 0.11, 0.26, 0.4, 0.71, 0.99}) {
    const LocateResult a = lur.locate(x);
    const LocateResult b = lur.locate(rat_from_double(x));
    CHECK(a.kind == b.kind);
    CHECK(a.digit == b.digit);
  }
}

TEST_CASE("tail weight at exponent one is the partition of unity") {
  CHECK(GlsSystem::luroth("L").log_tail_weight(1.0, 0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(GlsSystem::power("P", 3.0).log_tail_weight(1.0, 0) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(GlsSystem::geometric("G", rat(2, 5)).log_tail_weight(1.0, 0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tail weight guards divergent exponents") {
  CHECK_THROWS_AS(GlsSystem::luroth("L").log_tail_weight(0.5, 0), GuardError);
  CHECK_THROWS_AS(GlsSystem::power("P", 2.0).log_tail_weight(0.4, 0),
                  GuardError);
  CHECK(GlsSystem::luroth("L").log_tail_weight(0.6, 0) >
        GlsSystem::luroth("L").log_tail_weight(0.6, 10));
}

TEST_CASE("partition validation passes every rule") {
  CHECK(validate_partition(GlsSystem::luroth("L"), 500).ok);
  CHECK(validate_partition(GlsSystem::power("P", 2.5), 500).ok);
  CHECK(validate_partition(GlsSystem::geometric("G", rat(1, 3)), 500).ok);
  CHECK(validate_partition(
            GlsSystem::finite("F", {rat(1, 2), rat(1, 3), rat(1, 6)}), 3)
            .ok);
}

TEST_CASE("digit validity") {
  const GlsSystem fin = GlsSystem::finite("F", {rat(1, 2), rat(1, 2)});
  CHECK(fin.digit_valid(2));
  CHECK_FALSE(fin.digit_valid(3));
  CHECK_FALSE(fin.digit_valid(0));
  CHECK(GlsSystem::luroth("L").digit_valid(1'000'000'000));
}
