#pragma once

// Small independent helpers shared by the unit tests: least-squares order
// fits and norms evaluated straight from grid values.

#include <cmath>
#include <numeric>
#include <vector>

namespace testutil {

// Slope of log(err) against log(1/n).
inline double fitted_order(const std::vector<double>& ns, const std::vector<double>& errs) {
  const std::size_t m = ns.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = std::log(1.0 / ns[k]);
    const double y = std::log(errs[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace testutil
