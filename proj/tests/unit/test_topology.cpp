#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "mstperc/percolation.hpp"
#include "mstperc/topology.hpp"

using namespace mstperc;

namespace {

// Remove s and measure every component by flood fill.
int brute_branches(const SpanningForest& t, SiteId s, double min_steps) {
  const LatticeGraph& g = t.graph();
  std::vector<char> seen(g.num_sites(), 0);
  seen[s] = 1;
  int k = 0;
  for (EdgeId e : t.incident(s)) {
    const SiteId v = g.other_end(e, s);
    Box2 b;
    std::vector<SiteId> st{v};
    seen[v] = 1;
    while (!st.empty()) {
      const SiteId u = st.back();
      st.pop_back();
      b.add(g.coord2(u));
      for (EdgeId f : t.incident(u)) {
        const SiteId w = g.other_end(f, u);
        if (!seen[w]) {
          seen[w] = 1;
          st.push_back(w);
        }
      }
    }
    k += b.diameter() >= min_steps;
  }
  return k;
}

SpanningForest bfs_tree(const std::shared_ptr<const LatticeGraph>& g, SiteId root) {
  std::vector<char> seen(g->num_sites(), 0);
  std::vector<EdgeId> edges;
  std::queue<SiteId> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    const SiteId u = q.front();
    q.pop();
    for (EdgeId e : g->incident_edges(u)) {
      const SiteId v = g->other_end(e, u);
      if (seen[v]) continue;
      seen[v] = 1;
      edges.push_back(e);
      q.push(v);
    }
  }
  return SpanningForest(g, {}, edges, root);
}

}  // namespace

TEST_CASE("degree histogram satisfies the handshake identity") {
  for (LatticeKind kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const auto g = make_lattice({kind, 20});
    const SpanningForest t = mst(sample_uniform(g, 4));
    std::int64_t sites = 0, degrees = 0;
    for (const auto& [d, c] : degree_histogram(t)) {
      sites += c;
      degrees += static_cast<std::int64_t>(d) * c;
    }
    CHECK(sites == static_cast<std::int64_t>(g->num_sites()));
    CHECK(degrees == 2 * static_cast<std::int64_t>(g->num_sites() - 1));
    if (kind == LatticeKind::TriangularSite) {
      // Midpoints have degree 1 or 2 in any spanning tree.
      const auto orig = degree_histogram(t, true);
      std::int64_t n_orig = 0;
      for (const auto& [d, c] : orig) n_orig += c;
      CHECK(n_orig == static_cast<std::int64_t>(g->num_original_sites()));
      for (SiteId s = 0; s < static_cast<SiteId>(g->num_sites()); ++s)
        if (!g->is_original(s)) CHECK(t.degree(s) <= 2);
    }
  }
}

TEST_CASE("macroscopic branch points agree with removal and flood fill") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = make_lattice({LatticeKind::TriangularSite, 17});
    const SpanningForest t = mst(sample_uniform(g, seed));
    for (double delta : {0.01, 0.125, 0.25}) {
      for (int k_min : {3, 4}) {
        const auto found = macroscopic_branch_points(t, delta, k_min);
        const double min_steps = delta * 16 < 0.5 ? -1.0 : delta * 16 - 1e-9;
        std::vector<SiteId> expect;
        for (SiteId s = 0; s < static_cast<SiteId>(g->num_sites()); ++s)
          if (t.degree(s) >= k_min && brute_branches(t, s, min_steps) >= k_min) expect.push_back(s);
        std::vector<SiteId> got;
        for (const auto& b : found) {
          got.push_back(b.site);
          CHECK(b.degree == brute_branches(t, b.site, min_steps));
        }
        CHECK(got == expect);
      }
    }
  }
}

TEST_CASE("a star has one macroscopic branch point") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 17});
  const SiteId c = g->site_at(8, 8);
  const SpanningForest t = bfs_tree(g, c);
  const auto found = macroscopic_branch_points(t, 0.25, 5);
  REQUIRE(found.size() == 1);
  CHECK(found[0].site == c);
  CHECK(found[0].degree == 6);
  CHECK(macroscopic_branch_points(t, 0.9, 5).empty());
  CHECK_THROWS_AS(macroscopic_branch_points(t, 0.0, 5), std::invalid_argument);
}

TEST_CASE("hausdorff distance") {
  const auto g = make_lattice({LatticeKind::SquareBond, 9});
  const SpanningForest t = bfs_tree(g, 0);
  const MinimaxPath a = t.path(g->site_at(0, 0), g->site_at(8, 0));
  const MinimaxPath b = t.path(g->site_at(0, 0), g->site_at(0, 4));
  CHECK(hausdorff_distance(*g, a, a) == 0.0);
  // Farthest point of a from b is (8,0), at distance 8 steps of 1/8.
  CHECK(hausdorff_distance(*g, a, b) == doctest::Approx(1.0));
}

TEST_CASE("path uniqueness probe") {
  const auto g = make_lattice({LatticeKind::SquareBond, 16});
  const SiteId x = g->site_at(0, 8), y = g->site_at(15, 8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabelField f = sample_uniform(g, seed);
    // Jitter below half the smallest gap keeps the label order, so the tree.
    const PathProbe j = path_uniqueness_probe(f, x, y, ProbeMode::Jitter, 0.9, seed + 100);
    CHECK(j.identical);
    CHECK(j.hausdorff == 0.0);
    const PathProbe r = path_uniqueness_probe(f, x, y, ProbeMode::Resample, 0.0, seed + 100);
    CHECK(r.hausdorff >= 0.0);
    CHECK(r.hausdorff <= 1.0);
  }
  CHECK_THROWS_AS(path_uniqueness_probe(sample_uniform(g, 1), x, y, ProbeMode::Jitter, 1.5, 1),
                  std::invalid_argument);
}

TEST_CASE("a U-shaped path is a near-touch candidate") {
  // Rows 4 and 6 are joined at column 12: the path leaves (2,4), runs out to
  // column 12 and comes back to (2,6), two steps from where it left.
  const auto g = make_lattice({LatticeKind::TriangularSite, 17});
  std::vector<SiteId> route;
  for (int c = 2; c <= 12; ++c) route.push_back(g->site_at(c, 4));
  route.push_back(g->site_at(12, 5));
  for (int c = 12; c >= 2; --c) route.push_back(g->site_at(c, 6));
  std::vector<EdgeId> edges;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    const Coord2 a = g->coord2(route[i]), b = g->coord2(route[i + 1]);
    const SiteId mid = g->site_at_coord2({(a.x + b.x) / 2, (a.y + b.y) / 2});
    edges.push_back(g->find_edge(route[i], mid));
    edges.push_back(g->find_edge(mid, route[i + 1]));
  }
  const SpanningForest t(g, {}, edges, route.front());
  const MinimaxPath p = t.path(route.front(), route.back());
  const LabelField f = sample_uniform(g, 3);
  const auto c = near_touch_points(f, p, 2, 0.5, ArmLevels::single(0.5));
  REQUIRE(c.size() >= 1);
  CHECK(c[0].site == route.front());
  CHECK(c[0].separation == 2);
  CHECK(c[0].excursion >= 0.5);
  // An excursion scale above the loop size finds nothing.
  CHECK(near_touch_points(f, p, 2, 0.7, ArmLevels::single(0.5)).empty());
  CHECK_THROWS_AS(near_touch_points(f, p, 5, 0.25, ArmLevels::single(0.5)), std::invalid_argument);
}

TEST_CASE("topology trials are reproducible") {
  TopologySpec spec;
  spec.lattice = {LatticeKind::TriangularSite, 24};
  spec.trials = 4;
  const auto a = topology_experiment(spec, 0.1);
  spec.threads = 2;
  const auto b = topology_experiment(spec, 0.1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].leaf_fraction == b[i].leaf_fraction);
    CHECK(a[i].branch_points == b[i].branch_points);
    CHECK(a[i].six_arm_touches == b[i].six_arm_touches);
    CHECK(a[i].six_arm_touches <= a[i].touch_candidates);
    CHECK(a[i].leaf_fraction > 0.0);
  }
}
