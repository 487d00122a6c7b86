#pragma once

// Composite Simpson quadrature on uniformly sampled data.

#include <span>
#include <string>
#include <vector>

#include "itqsl/errors.hpp"

namespace itqsl {

// Integral over the full grid. Requires an odd number of samples >= 3
// (i.e. an even number of intervals).
inline double simpson_total(std::span<const double> samples, double step) {
  const std::size_t n = samples.size();
  if (n < 3) {
    fail(ErrorKind::grid_too_coarse,
         "Simpson rule needs at least 3 samples, got " + std::to_string(n));
  }
  if (n % 2 == 0) {
    fail(ErrorKind::grid_too_coarse,
         "Simpson rule needs an even interval count, got " + std::to_string(n - 1));
  }
  double odd = 0.0, even = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    (k % 2 ? odd : even) += samples[k];
  }
  return step / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

// Cumulative integral at every sample. Even indices accumulate full Simpson
// panels; an odd index k adds the half-panel value of the quadratic through
// samples k-1, k, k+1. Matches simpson_total at the final sample.
inline std::vector<double> simpson_cumulative(std::span<const double> samples, double step) {
  const std::size_t n = samples.size();
  if (n < 3 || n % 2 == 0) {
    fail(ErrorKind::grid_too_coarse, "cumulative Simpson needs an odd sample count >= 3");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    if (k % 2 == 1) {
      out[k] = out[k - 1] +
               step / 12.0 * (5.0 * samples[k - 1] + 8.0 * samples[k] - samples[k + 1]);
    } else {
      out[k] = out[k - 2] + step / 3.0 * (samples[k - 2] + 4.0 * samples[k - 1] + samples[k]);
    }
  }
  return out;
}

}  // namespace itqsl
