#include "ngls/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ngls/errors.hpp"
#include "ngls/logspace.hpp"

namespace ngls {

const ApproxBranch& ApproxSystem::find(int64_t digit) const {
  for (const ApproxBranch& br : branches) {
    if (br.digit == digit) return br;
  }
  throw std::invalid_argument("digit " + std::to_string(digit) +
                              " is not a branch of the approximant of " + id);
}

int64_t ApproxSystem::image_digit(int64_t base_digit) const {
  if (base_digit < 1) {
    throw std::invalid_argument("digits start at 1");
  }
  if (base_digit <= m) return find(base_digit).digit;
  for (const ApproxBranch& br : branches) {
    if (!br.merged) continue;
    if (br.absorbs_tail) return br.digit;
    if (std::find(br.absorbed.begin(), br.absorbed.end(), base_digit) !=
        br.absorbed.end()) {
      return br.digit;
    }
  }
  throw std::invalid_argument("digit " + std::to_string(base_digit) +
                              " is absorbed by no branch of the approximant");
}

namespace {

ApproxBranch retained_branch(const GlsSystem& system, int64_t b) {
  ApproxBranch br;
  br.digit = b;
  br.merged = false;
  br.orient = system.orientation(b);
  const auto iv = system.interval(b);
  br.lo = iv.first;
  br.hi = iv.second;
  if (const auto exact = system.interval_exact(b)) {
    br.lo_exact = exact->first;
    br.hi_exact = exact->second;
  }
  br.log_N = system.log_N(b);
  br.ratio_exact = system.ratio_exact(b);
  return br;
}

ApproxSystem approximate_finite(const GlsSystem& system, int64_t m) {
  ApproxSystem out;
  out.id = system.id();
  out.m = m;
  out.exact = true;
  const int64_t total = *system.digit_count();
  const int64_t keep = std::min(m, total);
  for (int64_t b = 1; b <= keep; ++b) {
    out.branches.push_back(retained_branch(system, b));
  }
  if (m >= total) return out;

  std::vector<std::pair<Rat, Rat>> covered;
  for (int64_t b = 1; b <= keep; ++b) {
    covered.push_back(*system.interval_exact(b));
  }
  std::sort(covered.begin(), covered.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<Rat, Rat>> gaps;
  Rat edge(0);
  for (const auto& [lo, hi] : covered) {
    if (lo > edge) gaps.emplace_back(edge, lo);
    if (hi > edge) edge = hi;
  }
  if (edge < Rat(1)) gaps.emplace_back(edge, Rat(1));

  for (const auto& [glo, ghi] : gaps) {
    ApproxBranch br;
    br.merged = true;
    br.lo_exact = glo;
    br.hi_exact = ghi;
    br.lo = to_double(glo);
    br.hi = to_double(ghi);
    br.ratio_exact = Rat(ghi - glo);
    br.log_N = -std::log(to_double(*br.ratio_exact));
    for (int64_t b = m + 1; b <= total; ++b) {
      const auto iv = *system.interval_exact(b);
      if (iv.first >= glo && iv.second <= ghi) br.absorbed.push_back(b);
    }
    if (br.absorbed.empty()) {
      throw std::logic_error("gap without any absorbed digit");
    }
    br.digit = *std::min_element(br.absorbed.begin(), br.absorbed.end());
    out.branches.push_back(br);
  }
  return out;
}

ApproxSystem approximate_infinite(const GlsSystem& system, int64_t m) {
  ApproxSystem out;
  out.id = system.id();
  out.m = m;
  out.exact = system.exact();
  for (int64_t b = 1; b <= m; ++b) {
    out.branches.push_back(retained_branch(system, b));
  }
  ApproxBranch br;
  br.merged = true;
  br.digit = m + 1;
  br.absorbs_tail = true;
  const double len = system.tail_ratio_sum(m);
  if (const auto exact_len = system.tail_ratio_sum_exact(m)) {
    br.ratio_exact = *exact_len;
    if (system.layout() == Layout::ascending) {
      br.lo_exact = Rat(1) - *exact_len;
      br.hi_exact = Rat(1);
    } else {
      br.lo_exact = Rat(0);
      br.hi_exact = *exact_len;
    }
  }
  if (system.layout() == Layout::ascending) {
    br.lo = 1.0 - len;
    br.hi = 1.0;
  } else {
    br.lo = 0.0;
    br.hi = len;
  }
  br.log_N = -std::log(len);
  out.branches.push_back(br);
  return out;
}

}  // namespace

ApproxSystem approximate_system(const GlsSystem& system, int64_t m) {
  if (m < 1) throw std::invalid_argument("the cut m must be positive");
  if (system.is_finite()) return approximate_finite(system, m);
  return approximate_infinite(system, m);
}

ApproxFamily approximate_family(const Family& family, int64_t m) {
  ApproxFamily out;
  out.m = m;
  for (int s = 0; s < family.size(); ++s) {
    out.systems.push_back(approximate_system(family[s], m));
  }
  return out;
}

const ApproxDigitMass& ApproxFrequency::find(int s, int64_t digit) const {
  for (const ApproxDigitMass& dm : per_symbol.at(static_cast<size_t>(s))) {
    if (dm.digit == digit) return dm;
  }
  throw std::invalid_argument("digit " + std::to_string(digit) +
                              " carries no regrouped mass");
}

ApproxFrequency project_frequency(const Family& family,
                                  const FrequencyVector& alpha, int64_t m) {
  const ApproxFamily af = approximate_family(family, m);
  ApproxFrequency out;
  out.m = m;
  out.per_symbol.resize(static_cast<size_t>(family.size()));
  for (int s = 0; s < family.size(); ++s) {
    for (const ApproxBranch& br : af.systems[static_cast<size_t>(s)].branches) {
      ApproxDigitMass dm;
      dm.digit = br.digit;
      dm.merged = br.merged;
      if (!br.merged) {
        dm.mass = alpha.alpha(s, br.digit);
        dm.mass_exact = alpha.alpha_exact(s, br.digit);
      } else if (br.absorbs_tail) {
        dm.mass = alpha.tail_mass_from(s, m);
        dm.mass_exact = alpha.tail_mass_from_exact(s, m);
      } else {
        Rat total(0);
        bool exact = true;
        double total_d = 0.0;
        for (int64_t c : br.absorbed) {
          total_d += alpha.alpha(s, c);
          if (const auto e = alpha.alpha_exact(s, c); e && exact) {
            total += *e;
          } else {
            exact = false;
          }
        }
        dm.mass = total_d;
        if (exact) dm.mass_exact = total;
      }
      out.per_symbol[static_cast<size_t>(s)].push_back(dm);
    }
  }
  return out;
}

ConvergenceTable measure_convergence_check(const Family& family,
                                           const FrequencyVector& alpha,
                                           OmegaSequence& omega,
                                           std::span<const int64_t> word,
                                           int64_t m_lo, int64_t m_hi) {
  if (word.empty()) throw std::invalid_argument("word must be non-empty");
  if (m_lo < 1 || m_hi < m_lo) {
    throw std::invalid_argument("need 1 <= m_lo <= m_hi");
  }
  const int64_t n = static_cast<int64_t>(word.size());
  omega.ensure(n);

  ConvergenceTable out;
  double base = 0.0;
  bool base_exact = true;
  Rat base_prod(1);
  for (int64_t l = 1; l <= n; ++l) {
    const int s = omega.at(l);
    const int64_t b = word[static_cast<size_t>(l - 1)];
    if (!family[s].digit_valid(b)) {
      throw std::invalid_argument("digit " + std::to_string(b) +
                                  " is not a branch of system " +
                                  family[s].id());
    }
    base += alpha.log_conditional(s, b);
    if (const auto e = alpha.alpha_exact(s, b); e && base_exact) {
      base_prod *= Rat(*e / alpha.symbol_mass_exact(s));
    } else {
      base_exact = false;
    }
  }
  out.log_mass = base;

  for (int64_t m = m_lo; m <= m_hi; ++m) {
    const ApproxFamily af = approximate_family(family, m);
    const ApproxFrequency fr = project_frequency(family, alpha, m);
    ConvergenceRow row;
    row.m = m;
    bool exact = base_exact;
    Rat prod(1);
    for (int64_t l = 1; l <= n; ++l) {
      const int s = omega.at(l);
      const int64_t b = word[static_cast<size_t>(l - 1)];
      const int64_t image =
          af.systems[static_cast<size_t>(s)].image_digit(b);
      const ApproxDigitMass& dm = fr.find(s, image);
      if (dm.merged) ++row.merged_positions;
      row.log_mass_m +=
          std::log(dm.mass) - std::log(alpha.symbol_mass(s));
      if (dm.mass_exact && exact) {
        prod *= Rat(*dm.mass_exact / alpha.symbol_mass_exact(s));
      } else {
        exact = false;
      }
    }
    row.equal = exact ? (prod == base_prod) : (row.merged_positions == 0);
    out.rows.push_back(row);
  }

  int64_t last_unequal = m_lo - 1;
  for (const ConvergenceRow& row : out.rows) {
    if (!row.equal) last_unequal = row.m;
  }
  out.stabilized_at = last_unequal + 1;
  return out;
}

std::vector<ApproxDimensionRow> approx_dimension_trend(
    const Family& family, const FrequencyVector& alpha, int64_t m_lo,
    int64_t m_hi) {
  if (m_lo < 1 || m_hi < m_lo) {
    throw std::invalid_argument("need 1 <= m_lo <= m_hi");
  }
  double symbol_entropy = 0.0;
  for (int s = 0; s < family.size(); ++s) {
    symbol_entropy += xlogx(alpha.symbol_mass(s));
  }

  std::vector<ApproxDimensionRow> rows;
  for (int64_t m = m_lo; m <= m_hi; ++m) {
    const ApproxFamily af = approximate_family(family, m);
    const ApproxFrequency fr = project_frequency(family, alpha, m);

    double num_full = symbol_entropy;
    double den_retained = 0.0;
    double den_merged = 0.0;
    double num_window = symbol_entropy;
    for (int s = 0; s < family.size(); ++s) {
      for (size_t i = 0; i < fr.per_symbol[static_cast<size_t>(s)].size();
           ++i) {
        const ApproxDigitMass& dm = fr.per_symbol[static_cast<size_t>(s)][i];
        const ApproxBranch& br =
            af.systems[static_cast<size_t>(s)].branches[i];
        num_full -= xlogx(dm.mass);
        if (dm.mass <= 0.0) continue;
        if (br.merged) {
          den_merged += dm.mass * br.log_N;
        } else {
          den_retained += dm.mass * br.log_N;
          num_window -= xlogx(dm.mass);
        }
      }
    }
    const double den_full = den_retained + den_merged;
    if (!(den_full > 0.0)) {
      throw GuardError("approximant carries no contracting mass at m = " +
                       std::to_string(m));
    }
    ApproxDimensionRow row;
    row.m = m;
    row.value = num_full / den_full;
    row.e_m = den_retained / den_full;
    row.corrected = num_window / den_full;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ngls
