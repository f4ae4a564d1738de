#include "ngls/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ngls/errors.hpp"
#include "ngls/logspace.hpp"
#include "ngls/series.hpp"

namespace ngls {

namespace {
// Largest digit for which geometric ratios are still materialised as exact
// rationals; beyond this the bit size of r^b makes exactness pointless.
constexpr int64_t kGeometricExactCap = 1 << 16;
}  // namespace

GlsSystem GlsSystem::finite(std::string id, std::vector<Rat> lengths,
                            std::vector<Orientation> orientations) {
  if (lengths.empty()) throw std::invalid_argument("finite system needs at least one branch");
  if (orientations.empty()) orientations.assign(lengths.size(), Orientation::increasing);
  if (orientations.size() != lengths.size())
    throw std::invalid_argument("orientation list does not match lengths");
  Rat total = 0;
  for (const Rat& len : lengths) {
    if (len <= 0) throw std::invalid_argument("branch lengths must be positive");
    total += len;
  }
  if (total != 1) throw std::invalid_argument("branch lengths must sum to 1 exactly");

  GlsSystem sys;
  sys.id_ = std::move(id);
  sys.rule_ = Rule::finite;
  sys.layout_ = Layout::ascending;

  const size_t B = lengths.size();
  sys.breakpoints_.resize(B + 1);
  sys.breakpoints_[0] = 0;
  for (size_t i = 0; i < B; ++i) sys.breakpoints_[i + 1] = sys.breakpoints_[i] + lengths[i];
  sys.breakpoints_[B] = 1;

  // digit relabelling: longest interval first, spatial order breaking ties
  std::vector<size_t> order(B);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return lengths[a] > lengths[b]; });

  sys.branches_.resize(B);
  sys.spatial_.resize(B);
  for (size_t digit0 = 0; digit0 < B; ++digit0) {
    const size_t slot = order[digit0];
    Branch br;
    br.ratio = lengths[slot];
    br.lo = sys.breakpoints_[slot];
    br.hi = sys.breakpoints_[slot + 1];
    br.orient = orientations[slot];
    sys.branches_[digit0] = std::move(br);
    sys.spatial_[slot] = static_cast<int64_t>(digit0) + 1;
  }
  return sys;
}

GlsSystem GlsSystem::luroth(std::string id) {
  GlsSystem sys;
  sys.id_ = std::move(id);
  sys.rule_ = Rule::luroth;
  sys.layout_ = Layout::descending;
  return sys;
}

GlsSystem GlsSystem::power(std::string id, double p, Layout layout) {
  if (!(p > 1.0)) throw std::invalid_argument("power rule requires p > 1");
  GlsSystem sys;
  sys.id_ = std::move(id);
  sys.rule_ = Rule::power;
  sys.layout_ = layout;
  sys.p_ = p;
  sys.log_zeta_p_ = std::log(zeta(p));
  return sys;
}

GlsSystem GlsSystem::geometric(std::string id, Rat r, Layout layout) {
  if (!(r > 0 && r < 1)) throw std::invalid_argument("geometric rule requires r in (0,1)");
  GlsSystem sys;
  sys.id_ = std::move(id);
  sys.rule_ = Rule::geometric;
  sys.layout_ = layout;
  sys.r_ = std::move(r);
  sys.log_r_ = log_rat(sys.r_);
  sys.log_1mr_ = log_rat(Rat(1) - sys.r_);
  return sys;
}

std::optional<int64_t> GlsSystem::digit_count() const {
  if (rule_ == Rule::finite) return static_cast<int64_t>(branches_.size());
  return std::nullopt;
}

bool GlsSystem::digit_valid(int64_t b) const {
  if (b < 1) return false;
  if (rule_ == Rule::finite) return b <= static_cast<int64_t>(branches_.size());
  return true;
}

double GlsSystem::log_ratio(int64_t b) const {
  if (!digit_valid(b)) throw std::invalid_argument("digit out of range: " + std::to_string(b));
  const double bd = static_cast<double>(b);
  switch (rule_) {
    case Rule::finite:
      return log_rat(branches_[b - 1].ratio);
    case Rule::luroth:
      return -(std::log(bd) + std::log(bd + 1.0));
    case Rule::power:
      return -(p_ * std::log(bd) + log_zeta_p_);
    case Rule::geometric:
      return log_1mr_ + static_cast<double>(b - 1) * log_r_;
  }
  return 0.0;
}

std::optional<Rat> GlsSystem::ratio_exact(int64_t b) const {
  if (!digit_valid(b)) throw std::invalid_argument("digit out of range: " + std::to_string(b));
  switch (rule_) {
    case Rule::finite:
      return branches_[b - 1].ratio;
    case Rule::luroth: {
      const mpz_class bb = static_cast<long>(b);
      Rat q(mpz_class(1), bb * (bb + 1));
      q.canonicalize();
      return q;
    }
    case Rule::power:
      return std::nullopt;
    case Rule::geometric:
      if (b > kGeometricExactCap) return std::nullopt;
      return (Rat(1) - r_) * rat_pow(r_, static_cast<uint64_t>(b - 1));
  }
  return std::nullopt;
}

Orientation GlsSystem::orientation(int64_t b) const {
  if (!digit_valid(b)) throw std::invalid_argument("digit out of range: " + std::to_string(b));
  if (rule_ == Rule::finite) return branches_[b - 1].orient;
  return Orientation::increasing;
}

Rat GlsSystem::cum_exact(int64_t b) const {
  if (b <= 0) return Rat(0);
  switch (rule_) {
    case Rule::luroth:
      return Rat(static_cast<long>(b), static_cast<long>(b + 1));
    case Rule::geometric:
      return Rat(1) - rat_pow(r_, static_cast<uint64_t>(b));
    default:
      throw std::domain_error("cumulative lengths are rule-defined only for parametric systems");
  }
}

double GlsSystem::cum(int64_t b) const {
  if (b <= 0) return 0.0;
  switch (rule_) {
    case Rule::luroth:
      return static_cast<double>(b) / (static_cast<double>(b) + 1.0);
    case Rule::geometric:
      return 1.0 - std::exp(static_cast<double>(b) * log_r_);
    case Rule::power:
      return 1.0 - zeta_tail(p_, b) * std::exp(-log_zeta_p_);
    default:
      throw std::domain_error("cumulative lengths are rule-defined only for parametric systems");
  }
}

std::optional<std::pair<Rat, Rat>> GlsSystem::interval_exact(int64_t b) const {
  if (!digit_valid(b)) throw std::invalid_argument("digit out of range: " + std::to_string(b));
  if (rule_ == Rule::power) return std::nullopt;
  if (rule_ == Rule::finite) return std::make_pair(branches_[b - 1].lo, branches_[b - 1].hi);
  if (rule_ == Rule::geometric && b > kGeometricExactCap) return std::nullopt;
  const Rat lo_cum = cum_exact(b - 1), hi_cum = cum_exact(b);
  if (layout_ == Layout::ascending) return std::make_pair(lo_cum, hi_cum);
  return std::make_pair(Rat(1) - hi_cum, Rat(1) - lo_cum);
}

std::pair<double, double> GlsSystem::interval(int64_t b) const {
  if (rule_ != Rule::power) {
    if (auto iv = interval_exact(b)) return {to_double(iv->first), to_double(iv->second)};
  }
  const double lo_cum = cum(b - 1), hi_cum = cum(b);
  if (layout_ == Layout::ascending) return {lo_cum, hi_cum};
  return {1.0 - hi_cum, 1.0 - lo_cum};
}

std::optional<Rat> GlsSystem::offset_exact(int64_t b) const {
  const auto iv = interval_exact(b);
  if (!iv) return std::nullopt;
  const auto ratio = *ratio_exact(b);
  if (orientation(b) == Orientation::increasing) return iv->first / ratio;
  return iv->second / ratio;
}

Rat GlsSystem::map_apply(int64_t b, const Rat& x) const {
  if (x < 0 || x > 1) throw std::invalid_argument("map argument outside [0,1]");
  const auto iv = interval_exact(b);
  if (!iv) throw std::domain_error("system has no exact branch maps");
  const Rat len = iv->second - iv->first;
  if (orientation(b) == Orientation::increasing) return iv->first + len * x;
  return iv->second - len * x;
}

double GlsSystem::map_apply(int64_t b, double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("map argument outside [0,1]");
  const auto [lo, hi] = interval(b);
  if (orientation(b) == Orientation::increasing) return lo + (hi - lo) * x;
  return hi - (hi - lo) * x;
}

int64_t GlsSystem::find_digit_exact(const Rat& u) const {
  // least b with cum(b) >= u, for u in (0, 1); parametric rules only
  if (rule_ == Rule::luroth) {
    // cum(b) = b/(b+1) >= u  <=>  b >= u/(1-u)
    const Rat bound = u / (Rat(1) - u);
    int64_t b = floor_int64(bound);
    if (Rat(static_cast<long>(b)) < bound) ++b;
    return std::max<int64_t>(b, 1);
  }
  // geometric: exponential search then bisection on r^b <= 1-u
  const Rat target = Rat(1) - u;
  int64_t hi = 1;
  while (rat_pow(r_, static_cast<uint64_t>(hi)) > target) hi *= 2;
  int64_t lo = std::max<int64_t>(hi / 2 + 1, 1);
  if (hi == 1) lo = 1;
  while (lo < hi) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (rat_pow(r_, static_cast<uint64_t>(mid)) <= target) hi = mid; else lo = mid + 1;
  }
  return lo;
}

int64_t GlsSystem::find_digit(double u) const {
  int64_t hi = 1;
  while (cum(hi) < u) {
    hi *= 2;
    if (hi > (int64_t{1} << 60)) throw GuardError("digit search exceeded 2^60");
  }
  int64_t lo = std::max<int64_t>(hi / 2 + 1, 1);
  if (hi == 1) lo = 1;
  while (lo < hi) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (cum(mid) >= u) hi = mid; else lo = mid + 1;
  }
  return lo;
}

LocateResult GlsSystem::locate(const Rat& x) const {
  if (x < 0 || x > 1) throw std::invalid_argument("locate argument outside [0,1]");
  LocateResult out;
  if (rule_ == Rule::power) return locate(to_double(x));

  if (rule_ == Rule::finite) {
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const size_t j = static_cast<size_t>(it - breakpoints_.begin());
    const size_t B = spatial_.size();
    if (*it == x) {
      if (j == 0) {
        out.kind = LocateResult::Kind::endpoint;
        out.digit = spatial_.front();
      } else if (j == B) {
        out.kind = LocateResult::Kind::endpoint;
        out.digit = spatial_.back();
      } else {
        out.kind = LocateResult::Kind::shared;
        out.digit = spatial_[j - 1];
        out.right_digit = spatial_[j];
      }
    } else {
      out.kind = LocateResult::Kind::interior;
      out.digit = spatial_[j - 1];
    }
    return out;
  }

  const Rat u = layout_ == Layout::ascending ? x : Rat(1) - x;
  if (u == 0) {
    out.kind = LocateResult::Kind::endpoint;
    out.digit = 1;
    return out;
  }
  if (u == 1) {
    out.kind = LocateResult::Kind::gap;  // accumulation point of the layout
    return out;
  }
  const int64_t b = find_digit_exact(u);
  if (cum_exact(b) == u) {
    out.kind = LocateResult::Kind::shared;
    if (layout_ == Layout::ascending) {
      out.digit = b;
      out.right_digit = b + 1;
    } else {
      out.digit = b + 1;  // descending flips the spatial order
      out.right_digit = b;
    }
  } else {
    out.kind = LocateResult::Kind::interior;
    out.digit = b;
  }
  return out;
}

LocateResult GlsSystem::locate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("locate argument outside [0,1]");
  if (exact()) return locate(rat_from_double(x));
  LocateResult out;
  const double u = layout_ == Layout::ascending ? x : 1.0 - x;
  if (u == 0.0) {
    out.kind = LocateResult::Kind::endpoint;
    out.digit = 1;
    return out;
  }
  if (u >= 1.0) {
    out.kind = LocateResult::Kind::gap;
    return out;
  }
  const int64_t b = find_digit(u);
  if (cum(b) == u) {
    out.kind = LocateResult::Kind::shared;
    if (layout_ == Layout::ascending) {
      out.digit = b;
      out.right_digit = b + 1;
    } else {
      out.digit = b + 1;
      out.right_digit = b;
    }
  } else {
    out.kind = LocateResult::Kind::interior;
    out.digit = b;
  }
  return out;
}

double GlsSystem::tail_ratio_sum(int64_t m) const {
  if (m < 0) m = 0;
  switch (rule_) {
    case Rule::finite:
      return to_double(*tail_ratio_sum_exact(m));
    case Rule::luroth:
      return 1.0 / static_cast<double>(m + 1);
    case Rule::geometric:
      return std::exp(static_cast<double>(m) * log_r_);
    case Rule::power:
      return zeta_tail(p_, m) * std::exp(-log_zeta_p_);
  }
  return 0.0;
}

std::optional<Rat> GlsSystem::tail_ratio_sum_exact(int64_t m) const {
  if (m < 0) m = 0;
  switch (rule_) {
    case Rule::finite: {
      Rat s = 0;
      for (int64_t b = m + 1; b <= static_cast<int64_t>(branches_.size()); ++b)
        s += branches_[b - 1].ratio;
      return s;
    }
    case Rule::luroth:
      return rat(1, m + 1);
    case Rule::geometric:
      if (m > kGeometricExactCap) return std::nullopt;
      return rat_pow(r_, static_cast<uint64_t>(m));
    case Rule::power:
      return std::nullopt;
  }
  return std::nullopt;
}

double GlsSystem::log_tail_weight(double t, int64_t m) const {
  if (m < 0) m = 0;
  if (!(t > 0.0)) throw GuardError("tail weight sum diverges: t must be positive");
  switch (rule_) {
    case Rule::finite: {
      LogSum s;
      for (int64_t b = m + 1; b <= static_cast<int64_t>(branches_.size()); ++b)
        s.add(t * log_ratio(b));
      return s.value();
    }
    case Rule::luroth:
      if (t <= 0.5) throw GuardError("tail weight sum diverges for luroth at t <= 1/2");
      return std::log(luroth_weight_tail(m, t));
    case Rule::power:
      if (p_ * t <= 1.0)
        throw GuardError("tail weight sum diverges for power rule at t <= 1/p");
      return std::log(zeta_tail(p_ * t, m)) - t * log_zeta_p_;
    case Rule::geometric: {
      // sum_{b>m} ((1-r) r^{b-1})^t = (1-r)^t r^{mt} / (1 - r^t)
      const double rt = std::exp(t * log_r_);
      return t * log_1mr_ + static_cast<double>(m) * t * log_r_ - std::log1p(-rt);
    }
  }
  return kNegInf;
}

double GlsSystem::eta_analytic() const {
  switch (rule_) {
    case Rule::finite:
    case Rule::geometric:
      return 0.0;
    case Rule::luroth:
      return 0.5;
    case Rule::power:
      return 1.0 / p_;
  }
  return 0.0;
}

PartitionReport validate_partition(const GlsSystem& system, int64_t m) {
  PartitionReport report;
  const auto count = system.digit_count();
  const int64_t top = count ? std::min<int64_t>(m, *count) : m;
  report.digits_checked = top;

  // ratio ordering: digit order must list lengths non-increasingly
  for (int64_t b = 1; b < top; ++b) {
    if (system.log_ratio(b) < system.log_ratio(b + 1) - 1e-12) {
      report.ok = false;
      report.message = "digit " + std::to_string(b + 1) +
                       " has a longer interval than digit " + std::to_string(b);
      return report;
    }
  }

  // tiling: head lengths plus the analytic tail account for all of [0,1]
  if (system.exact()) {
    Rat head = 0;
    for (int64_t b = 1; b <= top; ++b) head += *system.ratio_exact(b);
    const auto tail = system.tail_ratio_sum_exact(top);
    if (tail && head + *tail != 1) {
      report.ok = false;
      report.message = "interval lengths do not sum to 1";
      return report;
    }
  } else {
    double head = 0.0;
    for (int64_t b = 1; b <= top; ++b) head += std::exp(system.log_ratio(b));
    if (std::abs(head + system.tail_ratio_sum(top) - 1.0) > 1e-12) {
      report.ok = false;
      report.message = "interval lengths do not sum to 1 within 1e-12";
      return report;
    }
  }

  // disjoint interiors: sort by left endpoint, check for overlap
  std::vector<std::pair<double, double>> ivs;
  ivs.reserve(static_cast<size_t>(top));
  for (int64_t b = 1; b <= top; ++b) ivs.push_back(system.interval(b));
  std::sort(ivs.begin(), ivs.end());
  for (int64_t i = 0; i + 1 < top; ++i) {
    if (ivs[i].second > ivs[i + 1].first + 1e-15) {
      report.ok = false;
      report.message = "digit intervals overlap";
      return report;
    }
  }
  return report;
}

}  // namespace ngls
