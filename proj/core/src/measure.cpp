#include "ngls/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ngls/errors.hpp"
#include "ngls/logspace.hpp"
#include "ngls/rng.hpp"
#include "ngls/series.hpp"

namespace ngls {

namespace {

constexpr int64_t kDigitCap = int64_t{1} << 62;

int64_t ceil_snap(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<int64_t>(r);
  }
  return static_cast<int64_t>(std::ceil(x));
}

double safe_ratio(double log_mass, double log_length) {
  if (log_length >= 0.0) return 0.0;
  if (log_mass == kNegInf) return std::numeric_limits<double>::infinity();
  return log_mass / log_length;
}

}  // namespace

FibreBernoulli::FibreBernoulli(const Family& family, FrequencyVector alpha,
                               OmegaSequence& omega)
    : family_(&family), alpha_(std::move(alpha)), omega_(&omega) {
  if (&alpha_.family() != family_) {
    throw std::invalid_argument(
        "frequency vector was built against a different family");
  }
  if (!check_dagger(family, alpha_)) {
    throw std::invalid_argument(
        "every symbol needs positive mass to drive a digit measure");
  }
}

double FibreBernoulli::log_mass(std::span<const int64_t> word) {
  double acc = 0.0;
  for (size_t i = 0; i < word.size(); ++i) {
    const int s = omega_->at(static_cast<int64_t>(i) + 1);
    const int64_t b = word[i];
    if (!(*family_)[s].digit_valid(b)) {
      throw std::invalid_argument("digit " + std::to_string(b) +
                                  " is not a branch of system " +
                                  (*family_)[s].id());
    }
    acc += alpha_.log_conditional(s, b);
  }
  return acc;
}

int64_t FibreBernoulli::sample_digit(int s, double u) const {
  const SymbolLaw& law = alpha_.law(s);
  const int64_t head = static_cast<int64_t>(law.head.size());
  double acc = 0.0;
  for (int64_t b = 1; b <= head; ++b) {
    acc += alpha_.conditional(s, b);
    if (u < acc) return b;
  }
  const double tail_cond = to_double(law.tail.mass) / alpha_.symbol_mass(s);
  if (law.tail.kind == TailKind::zero || tail_cond <= 0.0) {
    for (int64_t b = head; b >= 1; --b) {
      if (law.head[static_cast<size_t>(b - 1)] > Rat(0)) return b;
    }
    throw std::logic_error("symbol law has no positive digit");
  }
  double w = (u - acc) / tail_cond;
  if (w < 0.0) w = 0.0;
  if (w >= 1.0) w = std::nextafter(1.0, 0.0);

  if (law.tail.kind == TailKind::geometric) {
    const double log_r = std::log(to_double(law.tail.r));
    const int64_t i = static_cast<int64_t>(std::floor(std::log1p(-w) / log_r));
    if (i < 0) return head + 1;
    if (i > kDigitCap - head - 1) {
      throw GuardError("sampled digit exceeds the representable range");
    }
    return head + 1 + i;
  }

  // Power and logpower tails: invert the survival series by bisection.
  const auto survival = [&](int64_t b) {
    return law.tail.kind == TailKind::power ? zeta_tail(law.tail.p, b)
                                            : logpower_tail(b, law.tail.q);
  };
  const double target = (1.0 - w) * survival(head);
  int64_t lo = head;  // survival(lo) >= target
  int64_t hi = head + 1;
  while (survival(hi) >= target) {
    lo = hi;
    if (hi > kDigitCap / 2) {
      throw GuardError(
          "sampled digit exceeds the representable range; heavy digit tails "
          "put visible mass beyond 2^62");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (survival(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::vector<int64_t> FibreBernoulli::sample(int64_t depth, uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("sample depth must be positive");
  Rng rng(seed);
  std::vector<int64_t> word;
  word.reserve(static_cast<size_t>(depth));
  omega_->ensure(depth);
  for (int64_t n = 1; n <= depth; ++n) {
    word.push_back(sample_digit(omega_->at(n), rng.uniform01()));
  }
  return word;
}

std::vector<TraceRow> local_dimension_trace(FibreBernoulli& mu,
                                            std::span<const int64_t> word,
                                            double comparator,
                                            int64_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  const Family& family = mu.family();
  OmegaSequence& omega = mu.omega();
  const int64_t n = static_cast<int64_t>(word.size());
  std::vector<TraceRow> rows;
  double acc_mass = 0.0;
  double acc_len = 0.0;
  for (int64_t l = 1; l <= n; ++l) {
    const int s = omega.at(l);
    const int64_t b = word[static_cast<size_t>(l - 1)];
    if (!family[s].digit_valid(b)) {
      throw std::invalid_argument("digit " + std::to_string(b) +
                                  " is not a branch of system " +
                                  family[s].id());
    }
    acc_mass += mu.alpha().log_conditional(s, b);
    acc_len += family[s].log_ratio(b);
    if (l % stride == 0 || l == n) {
      rows.push_back({l, acc_mass, acc_len, safe_ratio(acc_mass, acc_len),
                      comparator});
    }
  }
  return rows;
}

int64_t ThetaSchedule::theta_of(int64_t k) const {
  if (k < 1) throw std::invalid_argument("schedule levels start at 1");
  if (k > max_k()) {
    throw GuardError("theta schedule materialised only up to level " +
                     std::to_string(max_k()) +
                     "; increase the schedule horizon");
  }
  return theta[static_cast<size_t>(k - 1)];
}

int64_t ThetaSchedule::kappa_of_depth(int64_t n, int64_t kappa) const {
  if (kappa < 1) throw std::invalid_argument("kappa must be positive");
  if (kappa > max_k()) {
    throw GuardError("theta schedule shorter than the activation level");
  }
  const auto begin = theta.begin() + static_cast<ptrdiff_t>(kappa - 1);
  const auto it = std::upper_bound(begin, theta.end(), n);
  if (it != theta.end()) {
    return (it - theta.begin()) + 1;
  }
  if (theta.back() == n) return max_k() + 1;
  throw GuardError("theta schedule does not reach past depth " +
                   std::to_string(n) + "; increase the schedule horizon");
}

ThetaSchedule theta_schedule(const Family& family, OmegaSequence& omega,
                             int sigma, double gamma, int64_t horizon) {
  if (sigma < 0 || sigma >= family.size()) {
    throw std::invalid_argument("sigma is not a symbol of the family");
  }
  if (!(gamma > 1.0)) {
    throw std::invalid_argument("the schedule exponent gamma must exceed 1");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");

  ThetaSchedule out;
  out.sigma = sigma;
  out.gamma = gamma;
  out.horizon = horizon;
  omega.ensure(horizon);
  const std::span<const int> pref = omega.prefix(horizon);
  for (int64_t pos = 1; pos <= horizon; ++pos) {
    if (pref[static_cast<size_t>(pos - 1)] == sigma) out.j.push_back(pos);
  }
  const int64_t occurrences = static_cast<int64_t>(out.j.size());
  for (int64_t k = 1;; ++k) {
    const int64_t idx = ceil_snap(std::pow(static_cast<double>(k), gamma));
    if (idx > occurrences) break;
    out.theta.push_back(out.j[static_cast<size_t>(idx - 1)]);
  }
  if (out.theta.empty()) {
    throw GuardError("symbol " + family[sigma].id() +
                     " appears too rarely before the horizon to schedule");
  }
  return out;
}

namespace {

int64_t kappa1_scan(double eps, double delta, int64_t horizon) {
  for (int64_t k = 1; k <= horizon; ++k) {
    const double dk = static_cast<double>(k);
    if (std::exp2((delta - 1.0) * dk) + std::exp2(-eps * dk) < 1.0) return k;
  }
  throw GuardError("window separation threshold not reached below horizon");
}

int64_t kappa2_scan(double eps, const GlsSystem& system, int64_t horizon) {
  const double eta = system.eta_analytic();
  if (eta == 0.0) return 1;
  int64_t last_false = 0;
  for (int64_t n = 1; n <= horizon; ++n) {
    if (eta * system.log_N(n) > (1.0 + eps) * std::log(static_cast<double>(n))) {
      last_false = n;
    }
  }
  if (last_false == horizon) {
    throw GuardError("digit growth threshold not reached below horizon");
  }
  return last_false + 1;
}

}  // namespace

KappaThresholds kappa_thresholds(double eps, double delta,
                                 const GlsSystem& system, int64_t horizon) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  KappaThresholds out;
  out.kappa1 = kappa1_scan(eps, delta, horizon);
  out.kappa2 = kappa2_scan(eps, system, horizon);
  out.kappa = std::max(out.kappa1, out.kappa2);
  return out;
}

BaseSequence build_base_sequence(const Family& family,
                                 const FrequencyVector& alpha,
                                 OmegaSequence& omega, int64_t n, double eps) {
  if (n < 1) throw std::invalid_argument("length must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  omega.ensure(n);
  const std::span<const int> pref = omega.prefix(n);

  std::vector<int64_t> counts(static_cast<size_t>(family.size()), 0);
  for (int64_t pos = 1; pos <= n; ++pos) {
    ++counts[static_cast<size_t>(pref[static_cast<size_t>(pos - 1)])];
  }
  std::vector<std::vector<int64_t>> streams(static_cast<size_t>(family.size()));
  for (int s = 0; s < family.size(); ++s) {
    if (counts[static_cast<size_t>(s)] > 0) {
      streams[static_cast<size_t>(s)] =
          frequency_sequence(alpha.conditional_law(s),
                             counts[static_cast<size_t>(s)]);
    }
  }

  BaseSequence out;
  out.a = weave(omega, streams, n);
  for (int64_t i = 1; i * i <= n; ++i) {
    const int64_t pos = i * i;
    const int s = pref[static_cast<size_t>(pos - 1)];
    const auto branches = family[s].digit_count();
    if (branches.has_value() && *branches < 2) continue;
    const int64_t current = out.a[static_cast<size_t>(pos - 1)];
    out.a[static_cast<size_t>(pos - 1)] = current == 1 ? 2 : 1;
    out.perturbed.push_back(pos);
  }

  double eta_min = 0.0;
  for (int s = 0; s < family.size(); ++s) {
    if (family[s].digit_count().has_value()) continue;
    const double eta = family[s].eta_analytic();
    if (eta > 0.0 && (eta_min == 0.0 || eta < eta_min)) eta_min = eta;
  }
  out.bound_exponent = eta_min > 0.0 ? (1.0 + eps) / eta_min : 1.0;
  out.realized_bound = 0.0;
  for (int64_t pos = 1; pos <= n; ++pos) {
    const int s = pref[static_cast<size_t>(pos - 1)];
    const double value =
        std::exp(family[s].log_N(out.a[static_cast<size_t>(pos - 1)]) -
                 out.bound_exponent * std::log(static_cast<double>(pos)));
    out.realized_bound = std::max(out.realized_bound, value);
  }
  return out;
}

EaSampler::EaSampler(const Family& family, ThetaSchedule schedule,
                     BaseSequence base, double eps, double delta)
    : family_(&family),
      schedule_(std::move(schedule)),
      base_(std::move(base)),
      eps_(eps),
      delta_(delta) {
  if (!(eps_ > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta_ > 0.0 && delta_ < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  if (family[schedule_.sigma].digit_count().has_value()) {
    throw std::invalid_argument(
        "the scheduled symbol must carry infinitely many digits");
  }
  constexpr int64_t kScanHorizon = 4096;
  kappa1_ = kappa1_scan(eps_, delta_, kScanHorizon);
  kappa2_ = 1;
  for (int s = 0; s < family.size(); ++s) {
    if (family[s].digit_count().has_value()) continue;
    kappa2_ = std::max(kappa2_, kappa2_scan(eps_, family[s], kScanHorizon));
  }
  kappa_ = std::max(kappa1_, kappa2_);
  if (kappa_ > schedule_.max_k()) {
    throw GuardError(
        "theta schedule ends before the activation level kappa = " +
        std::to_string(kappa_));
  }
  for (int64_t k = kappa_; k <= schedule_.max_k(); ++k) {
    level_of_position_[schedule_.theta_of(k)] = k;
  }
}

int64_t EaSampler::first_scheduled_depth() const {
  return schedule_.theta_of(kappa_);
}

std::pair<int64_t, int64_t> EaSampler::window(int64_t k) const {
  if (k < 1) throw std::invalid_argument("schedule levels start at 1");
  if (k > 62) {
    throw GuardError("digit window exceeds the 64-bit range at level " +
                     std::to_string(k));
  }
  const int64_t hi = int64_t{1} << k;
  const int64_t size = ceil_snap(std::exp2(delta_ * static_cast<double>(k)));
  return {hi - size + 1, hi};
}

std::vector<int64_t> EaSampler::sample(int64_t depth, uint64_t seed) const {
  if (depth < 1) throw std::invalid_argument("sample depth must be positive");
  if (depth > static_cast<int64_t>(base_.a.size())) {
    throw std::invalid_argument("base sequence is shorter than the depth");
  }
  if (schedule_.theta.back() < depth) {
    throw GuardError("theta schedule does not cover depth " +
                     std::to_string(depth));
  }
  std::vector<int64_t> word(base_.a.begin(),
                            base_.a.begin() + static_cast<ptrdiff_t>(depth));
  Rng rng(seed);
  for (int64_t k = kappa_; k <= schedule_.max_k(); ++k) {
    const int64_t pos = schedule_.theta_of(k);
    if (pos > depth) break;
    const auto [lo, hi] = window(k);
    word[static_cast<size_t>(pos - 1)] = rng.range(lo, hi);
  }
  return word;
}

double EaSampler::log_mass(int64_t depth) const {
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  const int64_t kn = schedule_.kappa_of_depth(depth, kappa_);
  double acc = 0.0;
  for (int64_t k = kappa_; k < kn; ++k) {
    const auto [lo, hi] = window(k);
    acc -= std::log(static_cast<double>(hi - lo + 1));
  }
  return acc;
}

double EaSampler::log_mass_word(std::span<const int64_t> word) const {
  const int64_t n = static_cast<int64_t>(word.size());
  if (n < 1) throw std::invalid_argument("word must be non-empty");
  if (n > static_cast<int64_t>(base_.a.size())) {
    throw std::invalid_argument("base sequence is shorter than the word");
  }
  for (int64_t pos = 1; pos <= n; ++pos) {
    const int64_t b = word[static_cast<size_t>(pos - 1)];
    const auto it = level_of_position_.find(pos);
    if (it != level_of_position_.end()) {
      const auto [lo, hi] = window(it->second);
      if (b < lo || b > hi) return kNegInf;
    } else if (b != base_.a[static_cast<size_t>(pos - 1)]) {
      return kNegInf;
    }
  }
  return log_mass(n);
}

std::vector<TraceRow> eta_lower_trace(const EaSampler& sampler,
                                      const Family& family,
                                      OmegaSequence& omega, int64_t depth,
                                      uint64_t seed) {
  const std::vector<int64_t> word = sampler.sample(depth, seed);
  const int64_t first = sampler.first_scheduled_depth();
  const double comparator =
      sampler.delta() * family.eta_max() / (1.0 + sampler.eps());
  omega.ensure(depth);
  std::vector<TraceRow> rows;
  double acc_len = 0.0;
  for (int64_t n = 1; n <= depth; ++n) {
    acc_len +=
        family[omega.at(n)].log_ratio(word[static_cast<size_t>(n - 1)]);
    if (n < first) continue;
    const double mass = sampler.log_mass(n);
    rows.push_back({n, mass, acc_len, safe_ratio(mass, acc_len), comparator});
  }
  return rows;
}

}  // namespace ngls
