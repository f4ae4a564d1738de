#include "ngls/series.hpp"

#include <cmath>
#include <stdexcept>

namespace ngls {
namespace {

// Tail of sum f(k) for k >= K via Euler-Maclaurin once the integral
// over [K, inf) is known: integral + f(K)/2 - f'(K)/12.
double em_tail(double integral, double fK, double dfK) {
  return integral + 0.5 * fK - dfK / 12.0;
}

}  // namespace

double zeta_tail(double s, int64_t m) {
  if (s <= 1.0) throw std::domain_error("zeta_tail requires s > 1");
  if (m < 0) m = 0;
  const int64_t K = std::max<int64_t>(m + 1, 64);
  double out = 0.0;
  for (int64_t b = m + 1; b < K; ++b) out += std::pow(static_cast<double>(b), -s);
  const double Kd = static_cast<double>(K);
  const double fK = std::pow(Kd, -s);
  const double integral = std::pow(Kd, 1.0 - s) / (s - 1.0);
  const double dfK = -s * std::pow(Kd, -s - 1.0);
  const double f3K = -s * (s + 1.0) * (s + 2.0) * std::pow(Kd, -s - 3.0);
  return out + em_tail(integral, fK, dfK) + f3K / 720.0;
}

double zeta(double s) { return zeta_tail(s, 0); }

double luroth_weight_tail(int64_t m, double t) {
  if (m < 0) m = 0;
  if (t == 1.0) return 1.0 / static_cast<double>(m + 1);
  if (t <= 0.5) throw std::domain_error("luroth weight tail diverges for t <= 1/2");
  const int64_t K = std::max<int64_t>(m + 1, 512);
  double out = 0.0;
  for (int64_t b = m + 1; b < K; ++b) {
    const double x = static_cast<double>(b);
    out += std::pow(x * (x + 1.0), -t);
  }
  const double Kd = static_cast<double>(K);
  // integral_K^inf (x(x+1))^-t dx = integral_0^{1/K} u^{2t-2} (1+u)^-t du,
  // expanded in the binomial series of (1+u)^-t.
  const double u0 = 1.0 / Kd;
  double integral = 0.0;
  double coeff = 1.0;
  double upow = std::pow(u0, 2.0 * t - 1.0);
  for (int i = 0; i < 24; ++i) {
    integral += coeff * upow / (2.0 * t - 1.0 + static_cast<double>(i));
    coeff *= -(t + static_cast<double>(i)) / static_cast<double>(i + 1);
    upow *= u0;
  }
  const double fK = std::pow(Kd * (Kd + 1.0), -t);
  const double dfK = -t * (2.0 * Kd + 1.0) * std::pow(Kd * (Kd + 1.0), -t - 1.0);
  return out + em_tail(integral, fK, dfK);
}

double logpower_tail(int64_t m, double q) {
  if (q <= 1.0) throw std::domain_error("logpower tail diverges for q <= 1");
  if (m < 0) m = 0;
  const int64_t K = std::max<int64_t>(m + 1, 4096);
  double out = 0.0;
  for (int64_t b = m + 1; b < K; ++b) {
    const double x = static_cast<double>(b);
    out += 1.0 / (x * std::pow(std::log(x + 2.0), q));
  }
  // In w = log(x+2) the integrand splits as w^-q plus an exponentially
  // decaying correction, integrated by Simpson on a finite window.
  const double Kd = static_cast<double>(K);
  const double w0 = std::log(Kd + 2.0);
  double integral = std::pow(w0, 1.0 - q) / (q - 1.0);
  const auto corr = [q](double w) {
    const double ew = std::exp(w);
    return 2.0 * std::pow(w, -q) / (ew - 2.0);
  };
  const int steps = 400;
  const double h = 40.0 / steps;
  double simpson = corr(w0) + corr(w0 + 40.0);
  for (int i = 1; i < steps; ++i) simpson += corr(w0 + i * h) * (i % 2 ? 4.0 : 2.0);
  integral += simpson * h / 3.0;
  const double fK = 1.0 / (Kd * std::pow(w0, q));
  const double dfK = -(std::pow(w0, q) + q * std::pow(w0, q - 1.0) * Kd / (Kd + 2.0)) /
                     (Kd * Kd * std::pow(w0, 2.0 * q));
  return out + em_tail(integral, fK, dfK);
}

}  // namespace ngls
