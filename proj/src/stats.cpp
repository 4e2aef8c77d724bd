#include "mstperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mstperc {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return s;
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::int64_t k = 0;
  for (double x : xs) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  s.mean = mean;
  s.variance = k > 1 ? m2 / static_cast<double>(k - 1) : 0.0;
  s.std_error = std::sqrt(s.variance / static_cast<double>(k));
  return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

Comparison from_diff(double diff, double se) {
  Comparison c;
  c.diff = diff;
  c.std_error = se;
  c.ci_low = diff - kZ95 * se;
  c.ci_high = diff + kZ95 * se;
  if (se > 0.0) {
    c.z = diff / se;
    c.p_greater = 1.0 - normal_cdf(c.z);
    c.p_less = normal_cdf(c.z);
    c.p_two_sided = 2.0 * std::min(c.p_greater, c.p_less);
  } else {
    // Degenerate: both samples constant.
    c.z = diff == 0.0 ? 0.0 : (diff > 0.0 ? INFINITY : -INFINITY);
    c.p_greater = diff > 0.0 ? 0.0 : (diff == 0.0 ? 0.5 : 1.0);
    c.p_less = diff < 0.0 ? 0.0 : (diff == 0.0 ? 0.5 : 1.0);
    c.p_two_sided = diff == 0.0 ? 1.0 : 0.0;
  }
  return c;
}

}  // namespace

Comparison compare_means(const Summary& a, const Summary& b) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return from_diff(a.mean - b.mean, se);
}

Proportion proportion(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("proportion needs 0 <= successes <= trials, trials > 0");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  p.p = successes / n;
  p.std_error = std::sqrt(p.p * (1.0 - p.p) / n);
  const double z2 = kZ95 * kZ95;
  const double centre = (p.p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = kZ95 * std::sqrt(p.p * (1 - p.p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  p.ci_low = std::max(0.0, centre - half);
  p.ci_high = std::min(1.0, centre + half);
  return p;
}

Comparison compare_proportions(const Proportion& a, const Proportion& b) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return from_diff(a.p - b.p, se);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit needs >= 2 points");
  bool weighted = sigma.size() == x.size();
  if (weighted)
    for (double s : sigma) weighted = weighted && s > 0.0;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weighted ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det <= 0.0) throw std::invalid_argument("linear_fit needs distinct x values");
  LinearFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  if (weighted) {
    fit.slope_std_error = std::sqrt(sw / det);
  } else if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    const double s2 = rss / static_cast<double>(x.size() - 2);
    fit.slope_std_error = std::sqrt(s2 * sw / det);
  }
  return fit;
}

}  // namespace mstperc
