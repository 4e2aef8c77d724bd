#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mstperc/stats.hpp"

using namespace mstperc;

TEST_CASE("summary against the two-pass formulas") {
  const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const Summary s = summarize(xs);
  CHECK(s.count == 8);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.variance == doctest::Approx(32.0 / 7.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)));
  CHECK(summarize(std::vector<double>{}).count == 0);
  CHECK(summarize(std::vector<double>{3.0}).variance == 0.0);
}

TEST_CASE("normal distribution values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(kZ95) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(kZ95OneSided) == doctest::Approx(0.95).epsilon(1e-9));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
}

TEST_CASE("mean comparisons") {
  const Summary a{100, 1.0, 4.0, 0.2}, b{100, 0.5, 9.0, 0.3};
  const Comparison c = compare_means(a, b);
  CHECK(c.diff == doctest::Approx(0.5));
  CHECK(c.std_error == doctest::Approx(std::sqrt(0.04 + 0.09)));
  CHECK(c.p_greater + c.p_less == doctest::Approx(1.0));
  CHECK(c.p_two_sided == doctest::Approx(2 * c.p_greater));
  CHECK(c.ci_low < c.diff);
  CHECK(c.ci_high > c.diff);
  const Comparison flat = compare_means({5, 1.0, 0.0, 0.0}, {5, 1.0, 0.0, 0.0});
  CHECK(flat.p_two_sided == 1.0);
  const Comparison up = compare_means({5, 2.0, 0.0, 0.0}, {5, 1.0, 0.0, 0.0});
  CHECK(up.p_greater == 0.0);
}

TEST_CASE("wilson interval") {
  // 8 of 10: Wilson 95% interval (0.4902, 0.9433).
  const Proportion p = proportion(8, 10);
  CHECK(p.p == doctest::Approx(0.8));
  CHECK(p.ci_low == doctest::Approx(0.4902).epsilon(1e-3));
  CHECK(p.ci_high == doctest::Approx(0.9433).epsilon(1e-3));
  const Proportion z = proportion(0, 20);
  CHECK(z.ci_low == 0.0);
  CHECK(z.ci_high > 0.0);
  CHECK_THROWS_AS(proportion(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(proportion(0, 0), std::invalid_argument);
  const Comparison c = compare_proportions(proportion(60, 100), proportion(40, 100));
  CHECK(c.diff == doctest::Approx(0.2));
  CHECK(c.p_greater < 0.01);
}

TEST_CASE("linear fits") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_std_error == doctest::Approx(0.0));
  // Weighted: a heavily down-weighted outlier barely moves the line.
  const std::vector<double> y2{1, 3, 5, 20}, s{0.1, 0.1, 0.1, 100.0};
  const LinearFit w = linear_fit(x, y2, s);
  CHECK(w.slope == doctest::Approx(2.0).epsilon(1e-3));
  // Noisy data: slope error matches the textbook formula s / sqrt(Sxx).
  const std::vector<double> y3{0.1, 0.9, 2.2, 2.8};
  const LinearFit n = linear_fit(x, y3);
  double rss = 0;
  for (int i = 0; i < 4; ++i) rss += std::pow(y3[i] - n.intercept - n.slope * x[i], 2);
  CHECK(n.slope_std_error == doctest::Approx(std::sqrt(rss / 2 / 5.0)));
  CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 1}, std::vector<double>{0, 1}), std::invalid_argument);
}
