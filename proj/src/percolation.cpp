#include "mstperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "mstperc/arms.hpp"
#include "mstperc/disjoint_sets.hpp"
#include "mstperc/parallel.hpp"
#include "mstperc/rng.hpp"

namespace mstperc {

Configuration configuration_at(const LabelField& f, double p) {
  Configuration open(f.size());
  for (std::size_t c = 0; c < open.size(); ++c) open[c] = f.values()[c] <= p ? 1 : 0;
  return open;
}

std::vector<std::vector<SiteId>> ClusterPartition::members() const {
  std::vector<std::vector<SiteId>> out(clusters_.size());
  for (SiteId s = 0; s < static_cast<SiteId>(cluster_of_.size()); ++s)
    out[cluster_of_[s]].push_back(s);
  return out;
}

bool ClusterPartition::refines(const ClusterPartition& coarser) const {
  if (coarser.cluster_of_.size() != cluster_of_.size()) return false;
  std::vector<std::int32_t> image(clusters_.size(), -1);
  for (std::size_t s = 0; s < cluster_of_.size(); ++s) {
    std::int32_t& im = image[cluster_of_[s]];
    if (im < 0)
      im = coarser.cluster_of_[s];
    else if (im != coarser.cluster_of_[s])
      return false;
  }
  return true;
}

double ClusterPartition::max_diameter() const {
  double d = 0.0;
  for (const auto& c : clusters_) d = std::max(d, c.diameter());
  return d;
}

ClusterPartition clusters_of(const LatticeGraph& g, const Configuration& open,
                             double threshold_tag) {
  if (open.size() != g.num_carriers())
    throw std::invalid_argument("configuration size does not match carrier count");
  DisjointSets ds(g.num_sites());
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e)
    if (open[g.carrier_of_edge(e)]) ds.unite(g.edge(e).a, g.edge(e).b);

  const std::size_t ns = g.num_sites();
  std::vector<std::int32_t> cluster_of(ns, -1);
  std::vector<std::int32_t> root_to_cluster(ns, -1);
  std::vector<ClusterStats> stats;
  for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) {
    const std::size_t r = ds.find(s);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = static_cast<std::int32_t>(stats.size());
      stats.push_back({});
      stats.back().representative = s;
    }
    const std::int32_t c = root_to_cluster[r];
    cluster_of[s] = c;
    stats[c].size += 1;
    stats[c].box.add(g.coord2(s));
  }
  for (CarrierId k = 0; k < static_cast<CarrierId>(open.size()); ++k) {
    if (!open[k]) continue;
    const SiteId s = g.triangular() ? k : g.edge(k).a;
    stats[cluster_of[s]].open_carriers += 1;
  }
  return ClusterPartition(threshold_tag, std::move(cluster_of), std::move(stats));
}

ClusterPartition clusters_at(const LabelField& f, double p) {
  return clusters_of(f.graph(), configuration_at(f, p), p);
}

Quad Quad::whole() { return {0.0, 0.0, 1.0, 1.0}; }

Quad Quad::from_sites(const LatticeGraph& g, int col0, int row0, int col1, int row1) {
  const double k = 1.0 / (g.n() - 1);
  return {col0 * k, row0 * k, col1 * k, row1 * k};
}

Quad::IndexRange Quad::index_range(const LatticeGraph& g) const {
  const int m = g.n() - 1;
  auto lo = [m](double v) { return std::max(0, static_cast<int>(std::ceil(v * m - 1e-9))); };
  auto hi = [m](double v) { return std::min(m, static_cast<int>(std::floor(v * m + 1e-9))); };
  IndexRange r{lo(x0), hi(x1), lo(y0), hi(y1)};
  if (r.col0 > r.col1 || r.row0 > r.row1)
    throw std::invalid_argument("quad covers no lattice sites");
  return r;
}

namespace {

// Flood fill over original sites of the quad from one vertical side.
// TriangularSite: open sites, 6-neighbourhood. SquareBond: all grid sites,
// moving along open bonds.
std::vector<std::uint8_t> reach_from_side(const LatticeGraph& g, const Configuration& open,
                                          const Quad::IndexRange& q, int col,
                                          std::vector<SiteId>* parent = nullptr) {
  std::vector<std::uint8_t> seen(g.num_original_sites(), 0);
  std::vector<SiteId> stack;
  if (parent) parent->assign(g.num_original_sites(), kNoSite);
  for (int r = q.row0; r <= q.row1; ++r) {
    const SiteId s = g.site_at(col, r);
    if (g.triangular() && !open[s]) continue;
    seen[s] = 1;
    stack.push_back(s);
  }
  // BFS order keeps parent paths short; a deque-free variant via index scan.
  std::size_t head = 0;
  while (head < stack.size()) {
    const SiteId u = stack[head++];
    if (g.triangular()) {
      for (SiteId v : g.original_neighbors(u)) {
        if (seen[v] || !open[v] || !q.contains(g.col_of(v), g.row_of(v))) continue;
        seen[v] = 1;
        if (parent) (*parent)[v] = u;
        stack.push_back(v);
      }
    } else {
      for (EdgeId e : g.incident_edges(u)) {
        const SiteId v = g.other_end(e, u);
        if (seen[v] || !open[e] || !q.contains(g.col_of(v), g.row_of(v))) continue;
        seen[v] = 1;
        if (parent) (*parent)[v] = u;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

bool crosses(const LatticeGraph& g, const Configuration& open, const Quad::IndexRange& q) {
  const auto seen = reach_from_side(g, open, q, q.col0);
  for (int r = q.row0; r <= q.row1; ++r)
    if (seen[g.site_at(q.col1, r)]) return true;
  return false;
}

}  // namespace

bool has_crossing(const LatticeGraph& g, const Configuration& open, const Quad& quad) {
  if (open.size() != g.num_carriers())
    throw std::invalid_argument("configuration size does not match carrier count");
  return crosses(g, open, quad.index_range(g));
}

bool has_crossing(const LabelField& f, const Quad& q, double p) {
  return has_crossing(f.graph(), configuration_at(f, p), q);
}

std::vector<CarrierId> pivotal_sites(const LatticeGraph& g, const Configuration& open_in,
                                     const Quad& quad) {
  if (open_in.size() != g.num_carriers())
    throw std::invalid_argument("configuration size does not match carrier count");
  const auto q = quad.index_range(g);
  Configuration open = open_in;
  std::vector<CarrierId> out;

  std::vector<SiteId> parent;
  const auto left = reach_from_side(g, open, q, q.col0, &parent);
  SiteId target = kNoSite;
  for (int r = q.row0; r <= q.row1 && target == kNoSite; ++r)
    if (left[g.site_at(q.col1, r)]) target = g.site_at(q.col1, r);

  if (target != kNoSite) {
    // Every open pivotal carrier lies on every crossing, in particular on
    // this one; test the carriers of the path by removal.
    std::vector<CarrierId> path;
    for (SiteId v = target; v != kNoSite; v = parent[v]) {
      if (g.triangular()) {
        path.push_back(v);
      } else if (parent[v] != kNoSite) {
        path.push_back(g.find_edge(v, parent[v]));
      }
    }
    for (CarrierId k : path) {
      open[k] = 0;
      if (!crosses(g, open, q)) out.push_back(k);
      open[k] = 1;
    }
  } else {
    // A closed carrier is pivotal iff it touches both the part reachable
    // from the left side and the part reachable from the right side.
    const auto right = reach_from_side(g, open, q, q.col1);
    if (g.triangular()) {
      for (int r = q.row0; r <= q.row1; ++r) {
        for (int c = q.col0; c <= q.col1; ++c) {
          const SiteId s = g.site_at(c, r);
          if (open[s]) continue;
          bool l = c == q.col0, rr = c == q.col1;
          for (SiteId v : g.original_neighbors(s)) {
            if (!q.contains(g.col_of(v), g.row_of(v))) continue;
            l = l || left[v];
            rr = rr || right[v];
          }
          if (l && rr) out.push_back(s);
        }
      }
    } else {
      for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        if (open[e]) continue;
        const SiteId a = g.edge(e).a, b = g.edge(e).b;
        if (!q.contains(g.col_of(a), g.row_of(a)) || !q.contains(g.col_of(b), g.row_of(b)))
          continue;
        if ((left[a] && right[b]) || (left[b] && right[a])) out.push_back(e);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CarrierId> pivotal_sites(const LabelField& f, const Quad& q, double p) {
  return pivotal_sites(f.graph(), configuration_at(f, p), q);
}

double rate_r(double eta, const Alpha4Function& alpha4) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("mesh must lie in (0,1]");
  const double a = alpha4(eta);
  if (!(a > 0.0))
    throw std::runtime_error("alpha4 estimate is not positive; increase trials");
  return eta * eta / a;
}

Estimate estimate_alpha4(const LatticeSpec& spec, int r0, int R, std::int64_t trials,
                         std::uint64_t seed, int threads) {
  if (r0 < 0 || R < r0) throw std::invalid_argument("alpha4 needs 0 <= r0 <= R");
  if (trials <= 0) throw std::invalid_argument("alpha4 needs a positive trial count");
  Estimate est;
  est.trials = trials;
  est.seed = seed;
  if (R == r0) {
    est.estimate = 1.0;
    est.successes = trials;
    return est;
  }
  const auto g = make_lattice({spec.kind, 2 * R + 1});
  const ArmGeometry geom(*g, ArmCenter::site(g->site_at(R, R)), r0, R);
  const auto pattern = ArmEvent::alternating_four();
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, threads, [&](std::int64_t i) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
    std::vector<double> labels(g->num_carriers());
    for (double& x : labels) x = rng.uniform();
    hit[i] = geom.holds(labels, ArmLevels::single(0.5), pattern) ? 1 : 0;
  });
  for (auto h : hit) est.successes += h;
  const double p = static_cast<double>(est.successes) / trials;
  est.estimate = p;
  est.std_error = std::sqrt(p * (1.0 - p) / trials);
  return est;
}

double alpha4_at_mesh(LatticeKind kind, int n, std::int64_t trials, std::uint64_t seed) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, std::int64_t, std::uint64_t>, double> cache;
  const auto key = std::make_tuple(static_cast<int>(kind), n, trials, seed);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const int R = n / 2;
  const double a =
      R < 1 ? 1.0 : estimate_alpha4({kind, 2 * R + 1}, 0, R, trials, seed).estimate;
  std::lock_guard lock(mutex);
  cache[key] = a;
  return a;
}

RateModel RateModel::from_alpha4(Alpha4Function alpha4) { return RateModel(std::move(alpha4)); }

RateModel RateModel::monte_carlo(LatticeKind kind, std::int64_t trials, std::uint64_t seed) {
  return RateModel([=](double eta) {
    const int n = static_cast<int>(std::lround(1.0 / eta));
    return alpha4_at_mesh(kind, n, trials, seed);
  });
}

LambdaLevel lambda_level(double lambda, double eta, double rate) {
  LambdaLevel l{lambda, eta, rate, 0.5};
  if (lambda != 0.0) l.p = std::clamp(0.5 + lambda * rate, 0.0, 1.0);
  return l;
}

int importance_radius(const LatticeGraph& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("importance scale must be positive");
  return std::max(1, static_cast<int>(std::ceil(eps * (g.n() - 1) - 1e-9)));
}

namespace {

ArmCenter carrier_center(const LatticeGraph& g, CarrierId c) {
  return g.triangular() ? ArmCenter::site(c) : ArmCenter::edge(c);
}

}  // namespace

bool is_important(const LabelField& f, CarrierId c, double p, double eps) {
  const LatticeGraph& g = f.graph();
  const int R = importance_radius(g, eps);
  const ArmCenter center = carrier_center(g, c);
  if (!ArmGeometry::fits(g, center, R)) return false;
  const ArmGeometry geom(g, center, 0, R);
  return geom.holds(f.values(), ArmLevels::single(p), ArmEvent::alternating_four());
}

std::vector<CarrierId> important_sites(const LabelField& f, double p, double eps) {
  std::vector<CarrierId> out;
  for (CarrierId c = 0; c < static_cast<CarrierId>(f.size()); ++c)
    if (is_important(f, c, p, eps)) out.push_back(c);
  return out;
}

PivotalMeasure pivotal_measure_estimate(const LabelField& f, const Quad& q, double p,
                                        const RateModel& rates) {
  PivotalMeasure m;
  m.raw_count = static_cast<std::int64_t>(pivotal_sites(f, q, p).size());
  m.rate = rates.rate(f.graph().spec().mesh());
  m.normalized = static_cast<double>(m.raw_count) * m.rate;
  return m;
}

}  // namespace mstperc
