#include "ngls/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ngls/logspace.hpp"
#include "ngls/series.hpp"

namespace ngls {

namespace {

constexpr int64_t kExactPowCap = int64_t{1} << 16;

void validate_tail(const TailRule& t) {
  if (t.mass < 0) throw std::invalid_argument("tail mass must be non-negative");
  switch (t.kind) {
    case TailKind::zero:
      if (t.mass > 0) throw std::invalid_argument("zero tail cannot carry mass");
      break;
    case TailKind::geometric:
      if (t.mass > 0 && !(t.r > 0 && t.r < 1))
        throw std::invalid_argument("geometric tail ratio must lie in (0,1)");
      break;
    case TailKind::power:
      if (t.mass > 0 && !(t.p > 1.0))
        throw std::invalid_argument("power tail exponent must exceed 1");
      break;
    case TailKind::logpower:
      if (t.mass > 0 && !(t.q > 1.0))
        throw std::invalid_argument("logpower tail exponent must exceed 1");
      break;
  }
}

Rat law_total(const SymbolLaw& law) {
  Rat total = law.tail.mass;
  for (const Rat& w : law.head) total += w;
  return total;
}

double logpower_weight(int64_t b, double q) {
  const double bd = static_cast<double>(b);
  return 1.0 / (bd * std::pow(std::log(bd + 2.0), q));
}

}  // namespace

TailRule TailRule::zero_tail() { return {}; }

TailRule TailRule::geometric_tail(Rat mass, Rat r) {
  TailRule t;
  t.kind = TailKind::geometric;
  t.mass = std::move(mass);
  t.r = std::move(r);
  return t;
}

TailRule TailRule::power_tail(Rat mass, double p) {
  TailRule t;
  t.kind = TailKind::power;
  t.mass = std::move(mass);
  t.p = p;
  return t;
}

TailRule TailRule::logpower_tail_rule(Rat mass, double q) {
  TailRule t;
  t.kind = TailKind::logpower;
  t.mass = std::move(mass);
  t.q = q;
  return t;
}

SymbolLaw dirac_law(int64_t digit, Rat mass) {
  if (digit < 1) throw std::invalid_argument("digit must be positive");
  SymbolLaw law;
  law.head.assign(static_cast<size_t>(digit), Rat(0));
  law.head.back() = std::move(mass);
  return law;
}

SymbolLaw uniform_law(int64_t digits, Rat mass) {
  if (digits < 1) throw std::invalid_argument("digit count must be positive");
  SymbolLaw law;
  law.head.assign(static_cast<size_t>(digits), mass / Rat(static_cast<long>(digits)));
  return law;
}

SymbolLaw head_law(std::vector<Rat> weights, Rat mass) {
  Rat total(0);
  for (const Rat& w : weights) {
    if (w < 0) throw std::invalid_argument("head weights must be non-negative");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("head weights must sum to 1");
  SymbolLaw law;
  law.head = std::move(weights);
  for (Rat& w : law.head) w *= mass;
  return law;
}

SymbolLaw geometric_law(Rat r, Rat mass) {
  SymbolLaw law;
  law.tail = TailRule::geometric_tail(std::move(mass), std::move(r));
  validate_tail(law.tail);
  return law;
}

SymbolLaw power_law(double p, Rat mass) {
  SymbolLaw law;
  law.tail = TailRule::power_tail(std::move(mass), p);
  validate_tail(law.tail);
  return law;
}

SymbolLaw logpower_law(double q, Rat mass) {
  SymbolLaw law;
  law.tail = TailRule::logpower_tail_rule(std::move(mass), q);
  validate_tail(law.tail);
  return law;
}

FrequencyVector::FrequencyVector(const Family& family, std::vector<SymbolLaw> laws)
    : family_(&family), laws_(std::move(laws)) {
  if (static_cast<int>(laws_.size()) != family.size())
    throw std::invalid_argument("one digit law required per symbol");
  Rat total(0);
  for (int s = 0; s < size(); ++s) {
    const SymbolLaw& law = laws_[static_cast<size_t>(s)];
    validate_tail(law.tail);
    for (const Rat& w : law.head)
      if (w < 0) throw std::invalid_argument("digit masses must be non-negative");
    const auto count = family[s].digit_count();
    if (count) {
      if (static_cast<int64_t>(law.head.size()) > *count)
        throw std::invalid_argument("law head exceeds the digit count of system " +
                                    family[s].id());
      if (law.tail.mass > 0)
        throw std::invalid_argument("finite system " + family[s].id() +
                                    " cannot carry tail mass");
    }
    symbol_mass_.push_back(law_total(law));
    total += symbol_mass_.back();
  }
  if (total != 1)
    throw std::invalid_argument("digit masses must sum to 1 exactly, got " +
                                to_string(total));
}

int64_t FrequencyVector::head_size(int s) const {
  return static_cast<int64_t>(law(s).head.size());
}

double FrequencyVector::alpha(int s, int64_t b) const {
  if (const auto exact = alpha_exact(s, b)) return to_double(*exact);
  return std::exp(log_alpha(s, b));
}

std::optional<Rat> FrequencyVector::alpha_exact(int s, int64_t b) const {
  const SymbolLaw& l = law(s);
  if (b < 1) throw std::invalid_argument("digit must be positive");
  const int64_t h = head_size(s);
  if (b <= h) return l.head[static_cast<size_t>(b - 1)];
  switch (l.tail.kind) {
    case TailKind::zero:
      return Rat(0);
    case TailKind::geometric: {
      if (l.tail.mass == 0) return Rat(0);
      const int64_t e = b - h - 1;
      if (e > kExactPowCap) return std::nullopt;
      return l.tail.mass * (Rat(1) - l.tail.r) * rat_pow(l.tail.r, static_cast<uint64_t>(e));
    }
    case TailKind::power:
    case TailKind::logpower:
      if (l.tail.mass == 0) return Rat(0);
      return std::nullopt;
  }
  return std::nullopt;
}

double FrequencyVector::log_alpha(int s, int64_t b) const {
  const SymbolLaw& l = law(s);
  if (b < 1) throw std::invalid_argument("digit must be positive");
  const int64_t h = head_size(s);
  if (b <= h) return log_rat(l.head[static_cast<size_t>(b - 1)]);
  if (l.tail.mass == 0) return kNegInf;
  const double log_mass = log_rat(l.tail.mass);
  switch (l.tail.kind) {
    case TailKind::zero:
      return kNegInf;
    case TailKind::geometric:
      return log_mass + log_rat(Rat(1) - l.tail.r) +
             static_cast<double>(b - h - 1) * log_rat(l.tail.r);
    case TailKind::power:
      return log_mass - l.tail.p * std::log(static_cast<double>(b)) -
             std::log(zeta_tail(l.tail.p, h));
    case TailKind::logpower:
      return log_mass + std::log(logpower_weight(b, l.tail.q)) -
             std::log(logpower_tail(h, l.tail.q));
  }
  return kNegInf;
}

double FrequencyVector::symbol_mass(int s) const {
  return to_double(symbol_mass_exact(s));
}

Rat FrequencyVector::symbol_mass_exact(int s) const {
  return symbol_mass_.at(static_cast<size_t>(s));
}

double FrequencyVector::conditional(int s, int64_t b) const {
  const double as = symbol_mass(s);
  if (as == 0.0) throw std::invalid_argument("symbol carries no mass");
  return alpha(s, b) / as;
}

double FrequencyVector::log_conditional(int s, int64_t b) const {
  const Rat as = symbol_mass_exact(s);
  if (as == 0) throw std::invalid_argument("symbol carries no mass");
  return log_alpha(s, b) - log_rat(as);
}

double FrequencyVector::tail_mass_from(int s, int64_t m) const {
  if (const auto exact = tail_mass_from_exact(s, m)) return to_double(*exact);
  const SymbolLaw& l = law(s);
  const int64_t h = head_size(s);
  const double cm = to_double(l.tail.mass);
  switch (l.tail.kind) {
    case TailKind::power:
      return cm * zeta_tail(l.tail.p, m) / zeta_tail(l.tail.p, h);
    case TailKind::logpower:
      return cm * logpower_tail(m, l.tail.q) / logpower_tail(h, l.tail.q);
    default:
      return 0.0;
  }
}

std::optional<Rat> FrequencyVector::tail_mass_from_exact(int s, int64_t m) const {
  if (m < 0) throw std::invalid_argument("cut must be non-negative");
  const SymbolLaw& l = law(s);
  const int64_t h = head_size(s);
  if (m < h) {
    Rat sum = l.tail.mass;
    for (int64_t b = m + 1; b <= h; ++b) sum += l.head[static_cast<size_t>(b - 1)];
    return sum;
  }
  switch (l.tail.kind) {
    case TailKind::zero:
      return Rat(0);
    case TailKind::geometric: {
      if (l.tail.mass == 0) return Rat(0);
      const int64_t e = m - h;
      if (e > kExactPowCap) return std::nullopt;
      return l.tail.mass * rat_pow(l.tail.r, static_cast<uint64_t>(e));
    }
    case TailKind::power:
    case TailKind::logpower:
      if (l.tail.mass == 0) return Rat(0);
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<int64_t> FrequencyVector::support_upper(int s) const {
  const SymbolLaw& l = law(s);
  if (l.tail.kind != TailKind::zero && l.tail.mass > 0) return std::nullopt;
  for (int64_t b = head_size(s); b >= 1; --b)
    if (l.head[static_cast<size_t>(b - 1)] > 0) return b;
  return 0;
}

SymbolLaw FrequencyVector::conditional_law(int s) const {
  const Rat as = symbol_mass_exact(s);
  if (as == 0) throw std::invalid_argument("symbol carries no mass");
  SymbolLaw scaled = law(s);
  for (Rat& w : scaled.head) w /= as;
  scaled.tail.mass /= as;
  return scaled;
}

bool check_dagger(const Family& family, const FrequencyVector& alpha) {
  for (int s = 0; s < family.size(); ++s)
    if (alpha.symbol_mass_exact(s) == 0) return false;
  return true;
}

TauCounter::TauCounter(int num_symbols)
    : sym_counts_(static_cast<size_t>(num_symbols), 0),
      digit_counts_(static_cast<size_t>(num_symbols)) {
  if (num_symbols < 1) throw std::invalid_argument("need at least one symbol");
}

void TauCounter::record(int sym, int64_t digit) {
  ++n_;
  ++sym_counts_.at(static_cast<size_t>(sym));
  ++digit_counts_[static_cast<size_t>(sym)][digit];
}

int64_t TauCounter::symbol_count(int sym) const {
  return sym_counts_.at(static_cast<size_t>(sym));
}

int64_t TauCounter::digit_count(int sym, int64_t digit) const {
  const auto& m = digit_counts_.at(static_cast<size_t>(sym));
  const auto it = m.find(digit);
  return it == m.end() ? 0 : it->second;
}

const std::map<int64_t, int64_t>& TauCounter::digit_counts(int sym) const {
  return digit_counts_.at(static_cast<size_t>(sym));
}

namespace {

std::vector<int64_t> checkpoints_up_to(int64_t n) {
  std::vector<int64_t> points;
  for (int64_t c = 1; c < n; c *= 2) points.push_back(c);
  if (n >= 1) points.push_back(n);
  return points;
}

}  // namespace

SpectrumCheck omega_in_spectrum(const Family& family,
                                const FrequencyVector& alpha,
                                OmegaSequence& omega, int64_t horizon,
                                double tol) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  SpectrumCheck out;
  const auto points = checkpoints_up_to(horizon);
  std::vector<int64_t> counts(static_cast<size_t>(family.size()), 0);
  size_t next = 0;
  omega.ensure(horizon);
  for (int64_t n = 1; n <= horizon; ++n) {
    ++counts[static_cast<size_t>(omega.at(n))];
    if (next < points.size() && points[next] == n) {
      ++next;
      double dev = 0.0;
      for (int s = 0; s < family.size(); ++s) {
        const double freq =
            static_cast<double>(counts[static_cast<size_t>(s)]) / static_cast<double>(n);
        dev = std::max(dev, std::abs(freq - alpha.symbol_mass(s)));
      }
      out.trace.push_back({n, dev});
    }
  }
  out.final_deviation = out.trace.back().max_deviation;
  out.consistent = out.final_deviation < tol;
  return out;
}

std::vector<int64_t> frequency_sequence(const SymbolLaw& law, int64_t n) {
  if (n < 0) throw std::invalid_argument("length must be non-negative");
  validate_tail(law.tail);
  if (law_total(law) != 1)
    throw std::invalid_argument("digit weights must sum to 1 exactly");

  const int64_t h = static_cast<int64_t>(law.head.size());
  std::vector<double> head_w;
  head_w.reserve(law.head.size());
  for (const Rat& w : law.head) head_w.push_back(to_double(w));

  const bool has_tail = law.tail.mass > 0;
  const double cm = to_double(law.tail.mass);
  double tail_norm = 1.0;
  if (has_tail) {
    if (law.tail.kind == TailKind::power) tail_norm = zeta_tail(law.tail.p, h);
    if (law.tail.kind == TailKind::logpower) tail_norm = logpower_tail(h, law.tail.q);
  }
  const double rd = to_double(law.tail.r);
  const auto tail_weight = [&](int64_t b) -> double {
    switch (law.tail.kind) {
      case TailKind::geometric:
        return cm * (1.0 - rd) * std::pow(rd, static_cast<double>(b - h - 1));
      case TailKind::power:
        return cm * std::pow(static_cast<double>(b), -law.tail.p) / tail_norm;
      case TailKind::logpower:
        return cm * logpower_weight(b, law.tail.q) / tail_norm;
      case TailKind::zero:
        return 0.0;
    }
    return 0.0;
  };

  int64_t d_min = 0;
  for (int64_t b = 1; b <= h; ++b)
    if (head_w[static_cast<size_t>(b - 1)] > 0.0) {
      d_min = b;
      break;
    }
  if (d_min == 0) {
    if (!has_tail) throw std::invalid_argument("digit weights carry no mass");
    d_min = h + 1;
  }

  std::vector<int64_t> head_counts(law.head.size(), 0);
  std::vector<int64_t> tail_counts;  // digits h+1, h+2, ..., contiguous
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(n));

  for (int64_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double thr = 1.0 / (kd * kd);
    const int64_t cap = std::max(k, d_min);
    int64_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    const auto consider = [&](int64_t d, double w, int64_t count) {
      if (w <= 0.0 || d > cap) return;
      if (w < thr && d != d_min) return;
      const double score = kd * w - static_cast<double>(count);
      if (score > best_score) {
        best_score = score;
        best = d;
      }
    };
    for (int64_t b = 1; b <= h; ++b)
      consider(b, head_w[static_cast<size_t>(b - 1)], head_counts[static_cast<size_t>(b - 1)]);
    if (has_tail) {
      for (size_t j = 0; j < tail_counts.size(); ++j) {
        const int64_t b = h + 1 + static_cast<int64_t>(j);
        consider(b, tail_weight(b), tail_counts[j]);
      }
      const int64_t frontier = h + 1 + static_cast<int64_t>(tail_counts.size());
      consider(frontier, tail_weight(frontier), 0);
    }
    out.push_back(best);
    if (best <= h) {
      ++head_counts[static_cast<size_t>(best - 1)];
    } else {
      const size_t idx = static_cast<size_t>(best - h - 1);
      if (idx == tail_counts.size()) tail_counts.push_back(1);
      else ++tail_counts[idx];
    }
  }
  return out;
}

std::vector<int64_t> weave(OmegaSequence& omega,
                           const std::vector<std::vector<int64_t>>& streams,
                           int64_t n) {
  if (n < 0) throw std::invalid_argument("length must be non-negative");
  std::vector<size_t> used(streams.size(), 0);
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(n));
  for (int64_t pos = 1; pos <= n; ++pos) {
    const int s = omega.at(pos);
    if (s >= static_cast<int>(streams.size()))
      throw std::invalid_argument("no digit stream for symbol index " + std::to_string(s));
    auto& idx = used[static_cast<size_t>(s)];
    if (idx >= streams[static_cast<size_t>(s)].size())
      throw std::invalid_argument("digit stream for symbol " + std::to_string(s) +
                                  " exhausted at position " + std::to_string(pos));
    out.push_back(streams[static_cast<size_t>(s)][idx]);
    ++idx;
  }
  return out;
}

std::vector<DeviationRow> level_set_membership_trace(
    const Family& family, const FrequencyVector& alpha, OmegaSequence& omega,
    std::span<const int64_t> word, int64_t m) {
  const auto window = family.digit_window(m);
  std::vector<double> target;
  target.reserve(window.size());
  for (const Digit& d : window) target.push_back(alpha.alpha(d.sym, d.b));

  std::vector<DeviationRow> out;
  const int64_t len = static_cast<int64_t>(word.size());
  const auto points = checkpoints_up_to(len);
  TauCounter tau(family.size());
  size_t next = 0;
  for (int64_t pos = 1; pos <= len; ++pos) {
    tau.record(omega.at(pos), word[static_cast<size_t>(pos - 1)]);
    if (next < points.size() && points[next] == pos) {
      ++next;
      double dev = 0.0;
      for (size_t i = 0; i < window.size(); ++i) {
        const double freq = static_cast<double>(tau.digit_count(window[i].sym, window[i].b)) /
                            static_cast<double>(pos);
        dev = std::max(dev, std::abs(freq - target[i]));
      }
      out.push_back({pos, dev});
    }
  }
  return out;
}

}  // namespace ngls
