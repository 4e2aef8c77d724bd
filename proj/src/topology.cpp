#include "mstperc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "mstperc/parallel.hpp"
#include "mstperc/rng.hpp"

namespace mstperc {

std::map<int, std::int64_t> degree_histogram(const SpanningForest& t, bool original_only) {
  std::map<int, std::int64_t> h;
  const LatticeGraph& g = t.graph();
  for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
    if (original_only && !g.is_original(s)) continue;
    ++h[t.degree(s)];
  }
  return h;
}

std::vector<BranchPointReport> macroscopic_branch_points(const SpanningForest& t, double delta,
                                                         int k_min) {
  if (!(delta > 0.0)) throw std::invalid_argument("branch scale must be positive");
  if (k_min < 1) throw std::invalid_argument("k_min must be positive");
  if (!t.spanning()) throw std::invalid_argument("macroscopic_branch_points needs a spanning tree");
  const LatticeGraph& g = t.graph();
  const std::size_t ns = g.num_sites();
  // Below half a lattice step every branch counts.
  const double min_steps = delta * (g.n() - 1) < 0.5 ? -1.0 : delta * (g.n() - 1) - 1e-9;

  // Sites in BFS order from the root; parents precede children.
  std::vector<SiteId> order(ns);
  {
    std::vector<int> count(ns + 1, 0);
    for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) ++count[t.depth(s) + 1];
    for (std::size_t d = 0; d < ns; ++d) count[d + 1] += count[d];
    for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) order[count[t.depth(s)]++] = s;
  }
  std::vector<Box2> down(ns), up(ns);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const SiteId s = *it;
    down[s].add(g.coord2(s));
    if (t.parent(s) != kNoSite) down[t.parent(s)].merge(down[s]);
  }
  // up[c]: everything outside subtree(c), via prefix/suffix merges over siblings.
  std::vector<SiteId> kids;
  std::vector<Box2> suffix;
  for (SiteId s : order) {
    kids.clear();
    for (EdgeId e : t.incident(s)) {
      const SiteId v = g.other_end(e, s);
      if (v != t.parent(s)) kids.push_back(v);
    }
    suffix.assign(kids.size() + 1, Box2{});
    for (std::size_t i = kids.size(); i-- > 0;) {
      suffix[i] = suffix[i + 1];
      suffix[i].merge(down[kids[i]]);
    }
    Box2 prefix = up[s];
    prefix.add(g.coord2(s));
    for (std::size_t i = 0; i < kids.size(); ++i) {
      Box2 b = prefix;
      b.merge(suffix[i + 1]);
      up[kids[i]] = b;
      prefix.merge(down[kids[i]]);
    }
  }

  std::vector<BranchPointReport> out;
  for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) {
    if (t.degree(s) < k_min) continue;
    int k = 0;
    for (EdgeId e : t.incident(s)) {
      const SiteId v = g.other_end(e, s);
      const Box2& b = v == t.parent(s) ? up[s] : down[v];
      if (!b.empty() && b.diameter() >= min_steps) ++k;
    }
    if (k >= k_min) out.push_back({s, k, delta});
  }
  return out;
}

double hausdorff_distance(const LatticeGraph& g, const MinimaxPath& a, const MinimaxPath& b) {
  if (a.sites.empty() || b.sites.empty()) throw std::invalid_argument("hausdorff_distance of an empty path");
  auto directed = [&](const MinimaxPath& p, const MinimaxPath& q) {
    int worst = 0;
    for (SiteId s : p.sites) {
      const Coord2 cs = g.coord2(s);
      int best = std::numeric_limits<int>::max();
      for (SiteId t : q.sites) {
        const Coord2 ct = g.coord2(t);
        best = std::min(best, std::max(std::abs(cs.x - ct.x), std::abs(cs.y - ct.y)));
        if (best == 0) break;
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a)) * g.unit_per_half_step();
}

PathProbe path_uniqueness_probe(const LabelField& f, SiteId x, SiteId y, ProbeMode mode,
                                double rho, std::uint64_t seed) {
  const MinimaxPath base = mst(f).path(x, y);
  LabelField other = f;
  if (mode == ProbeMode::Jitter) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("jitter scale must lie in (0,1)");
    std::vector<double> v = f.values();
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    double gap = 1.0;
    for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
    Rng rng(seed);
    const double amp = 0.5 * rho * gap;
    for (double& u : v) u = std::clamp(u + amp * (2.0 * rng.uniform() - 1.0), 0.0, 1.0);
    other = make_field(f.graph_ptr(), std::move(v), seed, f.source());
  } else {
    other = sample_regional(f.graph_ptr(), f.source(), seed);
  }
  const MinimaxPath alt = mst(other).path(x, y);
  PathProbe probe;
  probe.identical = alt.sites == base.sites;
  probe.hausdorff = hausdorff_distance(f.graph(), base, alt);
  return probe;
}

std::vector<TouchPointCandidate> near_touch_points(const LabelField& f, const MinimaxPath& path,
                                                   int radius, double excursion,
                                                   ArmLevels levels) {
  const LatticeGraph& g = f.graph();
  if (radius < 0) throw std::invalid_argument("touch radius must be non-negative");
  const double min_steps = excursion * (g.n() - 1) - 1e-9;
  if (!(min_steps > radius)) throw std::invalid_argument("touch radius must be below the excursion scale");
  const int outer = static_cast<int>(std::ceil(excursion * (g.n() - 1) - 1e-9));

  // Original sites along the path, with their index in path.sites.
  std::vector<std::int32_t> idx;
  for (std::size_t i = 0; i < path.sites.size(); ++i)
    if (g.is_original(path.sites[i])) idx.push_back(static_cast<std::int32_t>(i));

  auto dist = [&](SiteId a, SiteId b) {
    return std::max(std::abs(g.col_of(a) - g.col_of(b)), std::abs(g.row_of(a) - g.row_of(b)));
  };
  const auto pattern = ArmEvent::six_arm_touch();
  std::vector<TouchPointCandidate> out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const SiteId z = path.sites[idx[i]];
    bool merged = false;
    for (const auto& c : out)
      if (dist(c.site, z) <= 2 * radius) merged = true;
    if (merged) continue;
    Box2 box;
    box.add(g.coord2(z));
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const SiteId w = path.sites[idx[j]];
      box.add(g.coord2(w));
      if (box.diameter() < min_steps || dist(z, w) > radius) continue;
      TouchPointCandidate c;
      c.site = z;
      c.first_visit = idx[i];
      c.second_visit = idx[j];
      c.separation = dist(z, w);
      c.excursion = box.diameter() / (g.n() - 1);
      const ArmCenter centre = ArmCenter::site(z);
      c.annulus_fits = radius < outer && ArmGeometry::fits(g, centre, outer);
      if (c.annulus_fits)
        c.six_arm = ArmGeometry(g, centre, radius, outer).holds(f.values(), levels, pattern);
      out.push_back(c);
      break;
    }
  }
  return out;
}

TopologyRecord topology_trial(const TopologySpec& spec, const std::shared_ptr<const LatticeGraph>& g,
                              double rate, std::int64_t index) {
  const LabelField f = sample_uniform(g, stream_seed(spec.seed, static_cast<std::uint64_t>(index)));
  const SpanningForest t = mst(f);
  TopologyRecord rec;
  rec.index = index;
  const auto hist = degree_histogram(t, true);
  std::int64_t total = 0;
  for (const auto& [d, c] : hist) {
    total += c;
    rec.max_degree = std::max(rec.max_degree, d);
  }
  rec.leaf_fraction = hist.count(1) ? static_cast<double>(hist.at(1)) / total : 0.0;
  rec.branch_points =
      static_cast<std::int64_t>(macroscopic_branch_points(t, spec.delta, spec.k_min).size());
  const int n = g->n();
  const MinimaxPath p = t.path(g->site_at(0, n / 2), g->site_at(n - 1, n / 2));
  const ArmLevels levels{std::min(1.0, 0.5 + spec.lambda * rate),
                         std::max(0.0, 0.5 - spec.lambda * rate)};
  for (const auto& c : near_touch_points(f, p, spec.touch_radius, spec.excursion, levels)) {
    ++rec.touch_candidates;
    rec.six_arm_touches += c.six_arm;
  }
  return rec;
}

std::vector<TopologyRecord> topology_experiment(const TopologySpec& spec, double rate) {
  if (spec.trials <= 0) throw std::invalid_argument("topology needs a positive trial count");
  const auto g = make_lattice(spec.lattice);
  std::vector<TopologyRecord> out(spec.trials);
  parallel_for(spec.trials, spec.threads,
               [&](std::int64_t i) { out[i] = topology_trial(spec, g, rate, i); });
  return out;
}

}  // namespace mstperc
