#include "ngls/family.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ngls/rng.hpp"

namespace ngls {

Family::Family(std::vector<GlsSystem> systems) : systems_(std::move(systems)) {
  if (systems_.empty()) throw std::invalid_argument("family needs at least one system");
  std::set<std::string_view> ids;
  for (const auto& sys : systems_) {
    if (sys.id().empty()) throw std::invalid_argument("system id must be non-empty");
    if (!ids.insert(sys.id()).second)
      throw std::invalid_argument("duplicate system id: " + sys.id());
  }
}

int Family::index_of(std::string_view id) const {
  for (int s = 0; s < size(); ++s)
    if (systems_[static_cast<size_t>(s)].id() == id) return s;
  throw std::invalid_argument("unknown system id: " + std::string(id));
}

double Family::eta_max() const {
  double m = 0.0;
  for (const auto& sys : systems_) m = std::max(m, sys.eta_analytic());
  return m;
}

std::vector<Digit> Family::digit_window(int64_t m) const {
  std::vector<Digit> window;
  for (int s = 0; s < size(); ++s) {
    const auto count = systems_[static_cast<size_t>(s)].digit_count();
    const int64_t top = count ? std::min<int64_t>(m, *count) : m;
    for (int64_t b = 1; b <= top; ++b) window.push_back({s, b});
  }
  return window;
}

OmegaRule OmegaRule::periodic(std::vector<int> period, std::vector<int> prefix) {
  if (period.empty()) throw std::invalid_argument("periodic rule needs a non-empty period");
  OmegaRule rule;
  rule.kind = Kind::periodic;
  rule.period = std::move(period);
  rule.prefix = std::move(prefix);
  return rule;
}

OmegaRule OmegaRule::weave(std::vector<Rat> weights) {
  OmegaRule rule;
  rule.kind = Kind::weave;
  rule.weights = std::move(weights);
  return rule;
}

OmegaRule OmegaRule::bernoulli(std::vector<Rat> weights, uint64_t seed) {
  OmegaRule rule;
  rule.kind = Kind::bernoulli;
  rule.weights = std::move(weights);
  rule.seed = seed;
  return rule;
}

namespace {

void check_weights(const std::vector<Rat>& weights, int num_symbols) {
  if (static_cast<int>(weights.size()) != num_symbols)
    throw std::invalid_argument("weight count does not match family size");
  Rat total = 0;
  for (const Rat& w : weights) {
    if (w < 0) throw std::invalid_argument("negative symbol weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("symbol weights must sum to 1 exactly");
}

}  // namespace

OmegaSequence::OmegaSequence(const Family& family, OmegaRule rule)
    : num_symbols_(family.size()), rule_(std::move(rule)) {
  switch (rule_.kind) {
    case OmegaRule::Kind::periodic:
      for (int s : rule_.prefix)
        if (s < 0 || s >= num_symbols_) throw std::invalid_argument("symbol index out of range");
      for (int s : rule_.period)
        if (s < 0 || s >= num_symbols_) throw std::invalid_argument("symbol index out of range");
      break;
    case OmegaRule::Kind::weave:
      check_weights(rule_.weights, num_symbols_);
      deficit_.assign(static_cast<size_t>(num_symbols_), 0.0);
      weight_d_.reserve(rule_.weights.size());
      for (const Rat& w : rule_.weights) weight_d_.push_back(to_double(w));
      break;
    case OmegaRule::Kind::bernoulli: {
      check_weights(rule_.weights, num_symbols_);
      double acc = 0.0;
      for (const Rat& w : rule_.weights) {
        acc += to_double(w);
        cdf_.push_back(acc);
      }
      cdf_.back() = 1.0;
      rng_ = Rng(rule_.seed);
      break;
    }
  }
}

void OmegaSequence::extend() {
  const int64_t n = static_cast<int64_t>(cache_.size()) + 1;
  switch (rule_.kind) {
    case OmegaRule::Kind::periodic: {
      const int64_t p = static_cast<int64_t>(rule_.prefix.size());
      if (n <= p) {
        cache_.push_back(rule_.prefix[static_cast<size_t>(n - 1)]);
      } else {
        const int64_t i = (n - 1 - p) % static_cast<int64_t>(rule_.period.size());
        cache_.push_back(rule_.period[static_cast<size_t>(i)]);
      }
      break;
    }
    case OmegaRule::Kind::weave: {
      // greedy quota rule: emit the symbol whose realised count lags its
      // target share the most; ties go to the smallest index
      int best = -1;
      for (int s = 0; s < num_symbols_; ++s) {
        deficit_[static_cast<size_t>(s)] += weight_d_[static_cast<size_t>(s)];
        if (weight_d_[static_cast<size_t>(s)] <= 0.0) continue;
        if (best < 0 || deficit_[static_cast<size_t>(s)] > deficit_[static_cast<size_t>(best)])
          best = s;
      }
      deficit_[static_cast<size_t>(best)] -= 1.0;
      cache_.push_back(best);
      break;
    }
    case OmegaRule::Kind::bernoulli: {
      const double u = rng_.uniform01();
      int s = 0;
      while (u >= cdf_[static_cast<size_t>(s)] && s + 1 < num_symbols_) ++s;
      cache_.push_back(s);
      break;
    }
  }
}

void OmegaSequence::ensure(int64_t n) {
  while (static_cast<int64_t>(cache_.size()) < n) extend();
}

int OmegaSequence::at(int64_t n) {
  if (n < 1) throw std::invalid_argument("omega positions are 1-based");
  ensure(n);
  return cache_[static_cast<size_t>(n - 1)];
}

std::span<const int> OmegaSequence::prefix(int64_t n) {
  ensure(n);
  return {cache_.data(), static_cast<size_t>(n)};
}

}  // namespace ngls
