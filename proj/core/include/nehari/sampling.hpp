#pragma once

#include <cmath>
#include <vector>

namespace nehari {

/// Geometric samples from lo to hi inclusive with per_decade points per
/// factor of ten.
inline std::vector<double> log_spaced(double lo, double hi, int per_decade) {
  const double decades = std::log10(hi / lo);
  const auto count = static_cast<int>(std::lround(decades * per_decade));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  const double log_lo = std::log10(lo);
  for (int k = 0; k <= count; ++k) {
    out.push_back(std::pow(10.0, log_lo + decades * k / count));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace nehari
