#pragma once

#include <cstddef>
#include <span>

namespace dzo {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Throws Fit when fewer than two points or all x coincide.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// fit_line on (log x, log y); every value must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace dzo
