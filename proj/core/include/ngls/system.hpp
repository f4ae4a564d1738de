#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngls/rational.hpp"

namespace ngls {

enum class Orientation : int { increasing = 0, decreasing = 1 };

/// Spatial arrangement of the digit intervals inside [0,1]. Ascending packs
/// digit 1 against 0 and walks right; descending packs digit 1 against 1 and
/// walks left (the classical Luroth arrangement, digit b on [1/(b+1), 1/b]).
enum class Layout { ascending, descending };

enum class Rule { finite, luroth, power, geometric };

/// Where a point sits relative to the digit intervals of one system.
struct LocateResult {
  enum class Kind {
    interior,   // strictly inside one digit interval
    endpoint,   // an endpoint touched by exactly one interval
    shared,     // an endpoint two adjacent intervals have in common
    gap         // not covered: accumulation point of the layout
  };
  Kind kind = Kind::gap;
  int64_t digit = 0;        // containing digit; for shared, the spatially left one
  int64_t right_digit = 0;  // for shared, the spatially right one
};

/// One interval map f_b(x) = (a_b + (-1)^eps x) / N_b of a GLS partition.
/// Branches are stored in digit order, which by construction is
/// non-increasing in interval length.
struct Branch {
  Rat ratio;  // 1/N_b, the interval length
  Rat lo, hi;
  Orientation orient = Orientation::increasing;
};

/// A single Generalised Luroth Series system: an interval partition of [0,1]
/// together with the affine surjections onto [0,1], one per digit. Finite
/// systems carry explicit branch tables; the parametric families (luroth,
/// power, geometric) have countably many digits defined by their rule.
class GlsSystem {
 public:
  /// Finite system from interval lengths listed left to right. Digits are
  /// relabelled so that digit 1 gets the longest interval (ties keep the
  /// spatial order). Lengths must be positive and sum to 1 exactly.
  static GlsSystem finite(std::string id, std::vector<Rat> lengths,
                          std::vector<Orientation> orientations = {});

  /// The classical Luroth system: digit b on [1/(b+1), 1/b], N_b = b(b+1).
  static GlsSystem luroth(std::string id);

  /// 1/N_b = b^{-p} / zeta(p), p > 1. Endpoints are irrational, so this
  /// rule only supports the double-precision query paths.
  static GlsSystem power(std::string id, double p, Layout layout = Layout::ascending);

  /// 1/N_b = (1-r) r^{b-1} for rational r in (0,1).
  static GlsSystem geometric(std::string id, Rat r, Layout layout = Layout::ascending);

  const std::string& id() const { return id_; }
  Rule rule() const { return rule_; }
  Layout layout() const { return layout_; }
  bool is_finite() const { return rule_ == Rule::finite; }
  bool exact() const { return rule_ != Rule::power; }
  std::optional<int64_t> digit_count() const;
  bool digit_valid(int64_t b) const;

  double power_exponent() const { return p_; }
  const Rat& geometric_ratio() const { return r_; }

  double log_ratio(int64_t b) const;  // log(1/N_b)
  double log_N(int64_t b) const { return -log_ratio(b); }
  std::optional<Rat> ratio_exact(int64_t b) const;
  Orientation orientation(int64_t b) const;

  /// f_b(0) * N_b, the additive coefficient of the branch map.
  std::optional<Rat> offset_exact(int64_t b) const;

  std::optional<std::pair<Rat, Rat>> interval_exact(int64_t b) const;
  std::pair<double, double> interval(int64_t b) const;

  Rat map_apply(int64_t b, const Rat& x) const;
  double map_apply(int64_t b, double x) const;

  LocateResult locate(const Rat& x) const;
  LocateResult locate(double x) const;

  /// sum_{b > m} 1/N_b.
  double tail_ratio_sum(int64_t m) const;
  std::optional<Rat> tail_ratio_sum_exact(int64_t m) const;

  /// log of sum_{b > m} N_b^{-t}. Throws GuardError when the series
  /// diverges (t at or below the exponent of convergence).
  double log_tail_weight(double t, int64_t m) const;

  /// Exponent of convergence of {1/N_b}: 0 for finite and geometric
  /// systems, 1/2 for luroth, 1/p for the power rule.
  double eta_analytic() const;

 private:
  GlsSystem() = default;

  // cumulative length of digits 1..b in digit order
  Rat cum_exact(int64_t b) const;
  double cum(int64_t b) const;
  int64_t find_digit_exact(const Rat& u) const;  // least b with cum(b) >= u
  int64_t find_digit(double u) const;

  std::string id_;
  Rule rule_ = Rule::finite;
  Layout layout_ = Layout::ascending;

  // finite systems
  std::vector<Branch> branches_;      // digit order
  std::vector<Rat> breakpoints_;      // spatial, size B+1, 0 .. 1
  std::vector<int64_t> spatial_;      // digit label per spatial slot

  // parametric systems
  double p_ = 0.0;       // power exponent
  double log_zeta_p_ = 0.0;
  Rat r_;                // geometric ratio
  double log_r_ = 0.0;
  double log_1mr_ = 0.0;
};

/// Partition health report: lengths tile [0,1], digit order matches the
/// ratio ordering, interiors are pairwise disjoint among the first m digits.
struct PartitionReport {
  bool ok = true;
  std::string message;
  int64_t digits_checked = 0;
};

PartitionReport validate_partition(const GlsSystem& system, int64_t m);

}  // namespace ngls
