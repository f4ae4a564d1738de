#pragma once

#include <cstdint>

namespace ngls {

/// Riemann zeta for real s > 1.
double zeta(double s);

/// sum_{b > m} b^{-s} for s > 1, m >= 0.
double zeta_tail(double s, int64_t m);

/// sum_{b > m} (b(b+1))^{-t} for t > 1/2. Telescopes exactly at t == 1.
double luroth_weight_tail(int64_t m, double t);

/// sum_{b > m} 1 / (b log^q(b+2)) for q > 1.
double logpower_tail(int64_t m, double q);

}  // namespace ngls
