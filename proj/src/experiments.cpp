#include "mstperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "mstperc/parallel.hpp"
#include "mstperc/rng.hpp"

namespace mstperc {

SiteId AsymmetrySpec::x_site(const LatticeGraph& g) const {
  if (endpoints == EndpointReading::Custom) return g.site_at(x_col, x_row);
  return g.site_at(n / 2, n);
}

SiteId AsymmetrySpec::y_site(const LatticeGraph& g) const {
  if (endpoints == EndpointReading::Custom) return g.site_at(y_col, y_row);
  return g.site_at(n / 2, 0);
}

void AsymmetrySpec::validate() const {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("asymmetry n must be even and >= 4");
  if (!(eps > 0.0)) throw std::invalid_argument("asymmetry eps must be positive");
  if (eps >= 0.5)
    throw std::invalid_argument("asymmetry eps >= 1/2: the endpoint neighbourhoods cover the path");
  if (eps * n < 2.0 - 1e-9) throw std::invalid_argument("asymmetry eps*n must be at least 2 lattice steps");
  if (trials <= 0) throw std::invalid_argument("asymmetry needs a positive trial count");
  if (labels.parts.empty()) throw std::invalid_argument("asymmetry needs a label spec");
  for (const auto& p : labels.parts) p.distribution.validate();
  if (endpoints == EndpointReading::Custom) {
    for (int v : {x_col, x_row, y_col, y_row})
      if (v < 0 || v > n) throw std::invalid_argument("asymmetry endpoint outside the lattice");
  }
}

AsymmetrySpec AsymmetrySpec::baseline_of(const AsymmetrySpec& s) {
  AsymmetrySpec b = s;
  b.labels = RegionDistributionSpec::uniform();
  b.seed = mix64(s.seed ^ 0xba5e11e5ull);
  return b;
}

AsymmetryTrialRecord path_side_statistics(const LatticeGraph& g, const MinimaxPath& path,
                                          SiteId x, SiteId y, double eps_steps) {
  AsymmetryTrialRecord rec;
  const auto& s = path.sites;
  if (s.empty() || s.front() != x || s.back() != y)
    throw std::invalid_argument("path does not join x to y");
  const Coord2 cx = g.coord2(x), cy = g.coord2(y);
  const double r2 = 2.0 * eps_steps + 1e-9;
  auto near = [&](SiteId v, Coord2 c) {
    const Coord2 p = g.coord2(v);
    return std::max(std::abs(p.x - c.x), std::abs(p.y - c.y)) <= r2;
  };
  // Segment from the last exit of N(x) before the first entry into N(y).
  std::size_t j = 0;
  while (j < s.size() && !near(s[j], cy)) ++j;
  std::size_t i = j;
  while (i > 0 && !near(s[i], cx)) --i;
  if (j >= s.size() || !near(s[i], cx) || j <= i)
    throw std::runtime_error("trimming empties the path");

  // Passages N(x) -> N(y) along the whole path.
  rec.segments = 0;
  int last = 0;  // 1: in N(x), 2: in N(y)
  for (SiteId v : s) {
    if (near(v, cx)) last = 1;
    if (near(v, cy)) {
      if (last == 1) ++rec.segments;
      last = 2;
    }
  }

  const int mid2 = g.n() - 1;  // doubled midline coordinate
  rec.path.assign(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  rec.path_length = static_cast<std::int64_t>(j - i);
  for (std::size_t k = i; k < j; ++k) {
    const int sum = g.coord2(s[k]).x + g.coord2(s[k + 1]).x;
    if (sum < 2 * mid2)
      ++rec.left_edges;
    else if (sum > 2 * mid2)
      ++rec.right_edges;
    else
      ++rec.midline_edges;
  }
  rec.left_fraction = (rec.left_edges + 0.5 * rec.midline_edges) / rec.path_length;
  rec.right_fraction = 1.0 - rec.left_fraction;
  rec.contained_left = rec.contained_right = true;
  int side = 0;
  for (SiteId v : rec.path) {
    const int x2 = g.coord2(v).x;
    rec.contained_left = rec.contained_left && x2 <= mid2;
    rec.contained_right = rec.contained_right && x2 >= mid2;
    const int sgn = (x2 > mid2) - (x2 < mid2);
    if (sgn == 0) continue;
    if (side != 0 && sgn != side) ++rec.midline_crossings;
    side = sgn;
  }
  return rec;
}

AsymmetryTrialRecord asymmetry_trial(const AsymmetrySpec& spec,
                                     const std::shared_ptr<const LatticeGraph>& g,
                                     std::int64_t index) {
  const std::uint64_t seed = stream_seed(spec.seed, static_cast<std::uint64_t>(index));
  const LabelField f = sample_regional(g, spec.labels, seed);
  const SiteId x = spec.x_site(*g), y = spec.y_site(*g);
  AsymmetryTrialRecord rec;
  try {
    if (spec.invasion) {
      const SpanningForest t = invasion_tree(f, x, InvasionStop::at_target(y));
      rec = path_side_statistics(*g, t.path(x, y), x, y, spec.eps * spec.n);
      const int mid2 = g->n() - 1;
      for (SiteId v : t.component(x)) {
        const int x2 = g->coord2(v).x;
        rec.invaded_left += x2 < mid2;
        rec.invaded_right += x2 > mid2;
      }
    } else {
      rec = path_side_statistics(*g, mst(f).path(x, y), x, y, spec.eps * spec.n);
    }
  } catch (const std::runtime_error& e) {
    rec = AsymmetryTrialRecord{};
    rec.failed = true;
    rec.error = e.what();
  }
  rec.index = index;
  rec.seed = seed;
  return rec;
}

AsymmetryTrialRecord asymmetry_trial(const AsymmetrySpec& spec, std::int64_t index) {
  spec.validate();
  return asymmetry_trial(spec, make_lattice(spec.lattice()), index);
}

AsymmetryTrialRecord invasion_asymmetry_trial(const AsymmetrySpec& spec, std::int64_t index) {
  AsymmetrySpec s = spec;
  s.invasion = true;
  return asymmetry_trial(s, index);
}

ArmSummary summarize_records(const std::vector<AsymmetryTrialRecord>& records) {
  ArmSummary a;
  std::vector<double> left, right, diff, cross, len;
  std::int64_t cl = 0, cr = 0;
  for (const auto& r : records) {
    if (r.failed) {
      ++a.failures;
      continue;
    }
    ++a.completed;
    a.multiple_segments += r.segments > 1;
    left.push_back(r.left_fraction);
    right.push_back(r.right_fraction);
    diff.push_back(r.right_fraction - r.left_fraction);
    cross.push_back(static_cast<double>(r.midline_crossings));
    len.push_back(static_cast<double>(r.path_length));
    cl += r.contained_left;
    cr += r.contained_right;
  }
  a.left_fraction = summarize(left);
  a.right_fraction = summarize(right);
  a.right_minus_left = summarize(diff);
  a.midline_crossings = summarize(cross);
  a.path_length = summarize(len);
  if (a.completed > 0) {
    a.contained_left = proportion(cl, a.completed);
    a.contained_right = proportion(cr, a.completed);
  }
  return a;
}

ExperimentReport asymmetry_experiment(const AsymmetrySpec& spec, const AsymmetrySpec& baseline) {
  check_arms(spec, baseline);
  const auto g = make_lattice(spec.lattice());
  auto run = [&](const AsymmetrySpec& s) {
    std::vector<AsymmetryTrialRecord> out(s.trials);
    parallel_for(s.trials, s.threads, [&](std::int64_t i) { out[i] = asymmetry_trial(s, g, i); });
    return out;
  };
  return compare_arms(spec, baseline, run(spec), run(baseline));
}

void check_arms(const AsymmetrySpec& spec, const AsymmetrySpec& baseline) {
  spec.validate();
  baseline.validate();
  if (spec.n != baseline.n || spec.kind != baseline.kind || spec.eps != baseline.eps)
    throw std::invalid_argument("asymmetry arms must share n, lattice kind and eps");
}

ExperimentReport compare_arms(const AsymmetrySpec& spec, const AsymmetrySpec& baseline,
                              std::vector<AsymmetryTrialRecord> records,
                              std::vector<AsymmetryTrialRecord> baseline_records) {
  ExperimentReport rep;
  rep.spec = spec;
  rep.baseline = baseline;
  rep.records = std::move(records);
  rep.baseline_records = std::move(baseline_records);
  rep.arm = summarize_records(rep.records);
  rep.base = summarize_records(rep.baseline_records);
  if (rep.arm.completed == 0 || rep.base.completed == 0)
    throw std::runtime_error("asymmetry arm has no completed trials");

  rep.right_vs_left = compare_means(rep.arm.right_minus_left, Summary{1, 0.0, 0.0, 0.0});
  rep.right_fraction = compare_means(rep.arm.right_fraction, rep.base.right_fraction);
  rep.midline_crossings = compare_means(rep.arm.midline_crossings, rep.base.midline_crossings);
  rep.contained_left = compare_proportions(rep.arm.contained_left, rep.base.contained_left);
  rep.contained_right = compare_proportions(rep.arm.contained_right, rep.base.contained_right);
  rep.right_exceeds_left = rep.right_vs_left.p_greater < 0.05;
  rep.fewer_midline_crossings = rep.midline_crossings.p_less < 0.05;
  rep.any_significant_difference =
      rep.right_fraction.p_two_sided < 0.05 || rep.midline_crossings.p_two_sided < 0.05;
  return rep;
}

bool mirror_path_check(const AsymmetrySpec& spec, std::int64_t index) {
  spec.validate();
  if (spec.kind != LatticeKind::SquareBond)
    throw std::invalid_argument("mirror check needs a SquareBond lattice");
  const auto g = make_lattice(spec.lattice());
  const LabelField f = sample_regional(g, spec.labels, stream_seed(spec.seed, static_cast<std::uint64_t>(index)));
  const LabelField m = mirror_field(f);
  const SiteId x = spec.x_site(*g), y = spec.y_site(*g);
  const MinimaxPath p = mst(f).path(x, y);
  const MinimaxPath q = mst(m).path(g->mirror_site(x), g->mirror_site(y));
  if (p.sites.size() != q.sites.size()) return false;
  for (std::size_t i = 0; i < p.sites.size(); ++i)
    if (g->mirror_site(p.sites[i]) != q.sites[i]) return false;
  return true;
}

ScalingReport scaling_invariance_check(const std::function<double(int, std::uint64_t)>& statistic,
                                       const std::vector<int>& n_list, std::int64_t trials,
                                       std::uint64_t seed, int threads) {
  if (n_list.size() < 2) throw std::invalid_argument("scaling check needs at least two sizes");
  if (trials <= 1) throw std::invalid_argument("scaling check needs at least two trials");
  ScalingReport rep;
  for (int n : n_list) {
    std::vector<double> xs(trials);
    parallel_for(trials, threads, [&](std::int64_t i) {
      xs[i] = statistic(n, stream_seed(seed, static_cast<std::uint64_t>(i)));
    });
    rep.points.push_back({n, summarize(xs)});
  }
  const double alpha = 0.05 / static_cast<double>(n_list.size() - 1);
  for (std::size_t k = 1; k < rep.points.size(); ++k) {
    const Comparison c = compare_means(rep.points[k].summary, rep.points[0].summary);
    rep.vs_first.push_back(c);
    rep.max_abs_z = std::max(rep.max_abs_z, std::abs(c.z));
    rep.drift_significant = rep.drift_significant || c.p_two_sided < alpha;
  }
  return rep;
}

}  // namespace mstperc
