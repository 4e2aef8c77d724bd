#pragma once

#include <cstdint>
#include <span>

namespace mstperc {

struct Summary {
  std::int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;
};

Summary summarize(std::span<const double> xs);

double normal_cdf(double z);
/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;
/// One-sided 95% normal quantile.
inline constexpr double kZ95OneSided = 1.6448536269514722;

/// Welch comparison of means, diff = a - b, with the normal approximation.
struct Comparison {
  double diff = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p_greater = 0.5;   // one-sided p-value for a > b
  double p_less = 0.5;      // one-sided p-value for a < b
  double p_two_sided = 1.0;
  double ci_low = 0.0;      // 95%
  double ci_high = 0.0;
};

Comparison compare_means(const Summary& a, const Summary& b);

/// Binomial proportion with its normal standard error and the Wilson 95%
/// interval.
struct Proportion {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double p = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

Proportion proportion(std::int64_t successes, std::int64_t trials);
Comparison compare_proportions(const Proportion& a, const Proportion& b);

/// Weighted least squares y = intercept + slope * x with weights 1/sigma^2.
/// Zero or missing sigmas give an unweighted fit.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> sigma = {});

}  // namespace mstperc
