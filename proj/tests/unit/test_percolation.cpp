#include "doctest.h"

#include <cmath>

#include "mstperc/percolation.hpp"
#include "mstperc/rng.hpp"
#include "oracles.hpp"

using namespace mstperc;

namespace {

Configuration random_config(std::size_t n, std::uint64_t seed, double p = 0.5) {
  Rng rng(seed);
  Configuration c(n);
  for (auto& v : c) v = rng.uniform() <= p;
  return c;
}

Configuration from_bits(std::size_t n, std::uint64_t bits) {
  Configuration c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = (bits >> i) & 1;
  return c;
}

}  // namespace

TEST_CASE("clusters match a flood fill") {
  for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const auto g = make_lattice({kind, 7});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Configuration open = random_config(g->num_carriers(), seed);
      const ClusterPartition part = clusters_of(*g, open);
      std::vector<int> label(g->num_sites(), -1);
      int next = 0;
      for (SiteId s = 0; s < static_cast<SiteId>(g->num_sites()); ++s) {
        if (label[s] >= 0) continue;
        std::vector<SiteId> st{s};
        label[s] = next;
        while (!st.empty()) {
          const SiteId u = st.back();
          st.pop_back();
          for (EdgeId e : g->incident_edges(u)) {
            const SiteId v = g->other_end(e, u);
            if (label[v] < 0 && open[g->carrier_of_edge(e)]) {
              label[v] = next;
              st.push_back(v);
            }
          }
        }
        ++next;
      }
      CHECK(static_cast<int>(part.num_clusters()) == next);
      for (SiteId a = 0; a < static_cast<SiteId>(g->num_sites()); a += 3)
        for (SiteId b = 0; b < static_cast<SiteId>(g->num_sites()); b += 5)
          CHECK(part.same_cluster(a, b) == (label[a] == label[b]));
      int total = 0;
      for (const auto& c : part.clusters()) total += c.size;
      CHECK(total == static_cast<int>(g->num_sites()));
    }
  }
}

TEST_CASE("clusters are monotone in p") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 12});
  const LabelField f = sample_uniform(g, 4);
  const ClusterPartition a = clusters_at(f, 0.3), b = clusters_at(f, 0.5), c = clusters_at(f, 0.8);
  CHECK(a.refines(b));
  CHECK(b.refines(c));
  CHECK_FALSE(c.refines(a));
  CHECK(clusters_at(f, 1.0).num_clusters() == 1);
  CHECK(clusters_at(f, 0.0).num_clusters() == g->num_sites());
}

TEST_CASE("crossing matches the position-based flood oracle") {
  for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const auto g = make_lattice({kind, 6});
    const std::vector<Quad> quads{Quad::whole(), Quad::from_sites(*g, 1, 0, 4, 5),
                                  Quad::from_sites(*g, 0, 2, 5, 2), Quad::from_sites(*g, 2, 1, 2, 4)};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Configuration open = random_config(g->num_carriers(), seed, 0.55);
      for (const auto& q : quads) CHECK(has_crossing(*g, open, q) == oracle::flood_crossing(*g, open, q));
    }
  }
}

TEST_CASE("triangular self-duality: exactly one of open LR and closed TB") {
  const int n = 9;
  const auto g = make_lattice({LatticeKind::TriangularSite, n});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Configuration open = random_config(g->num_carriers(), seed);
    Configuration flipped(open.size());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) flipped[g->site_at(r, c)] = !open[g->site_at(c, r)];
    CHECK(has_crossing(*g, open, Quad::whole()) != has_crossing(*g, flipped, Quad::whole()));
  }
}

TEST_CASE("quad validation") {
  const auto g = make_lattice({LatticeKind::SquareBond, 5});
  CHECK_THROWS_AS((Quad{0.1, 0.1, 0.2, 0.2}.index_range(*g)), std::invalid_argument);
  const auto r = Quad::from_sites(*g, 1, 2, 3, 4).index_range(*g);
  CHECK(r.col0 == 1);
  CHECK(r.col1 == 3);
  CHECK(r.row0 == 2);
  CHECK(r.row1 == 4);
  CHECK_THROWS_AS(has_crossing(*g, Configuration(3), Quad::whole()), std::invalid_argument);
}

TEST_CASE("pivotal sites equal the flip oracle, every configuration of tiny lattices") {
  SUBCASE("square n=3") {
    const auto g = make_lattice({LatticeKind::SquareBond, 3});
    for (std::uint64_t bits = 0; bits < (1u << g->num_carriers()); ++bits) {
      const Configuration open = from_bits(g->num_carriers(), bits);
      CHECK(pivotal_sites(*g, open, Quad::whole()) == oracle::brute_pivotal(*g, open, Quad::whole()));
    }
  }
  SUBCASE("triangular n=4") {
    const auto g = make_lattice({LatticeKind::TriangularSite, 4});
    for (std::uint64_t bits = 0; bits < (1u << g->num_carriers()); ++bits) {
      const Configuration open = from_bits(g->num_carriers(), bits);
      CHECK(pivotal_sites(*g, open, Quad::whole()) == oracle::brute_pivotal(*g, open, Quad::whole()));
    }
  }
}

TEST_CASE("pivotal sites on random n=5 configurations and sub-quads") {
  for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const auto g = make_lattice({kind, 5});
    const std::vector<Quad> quads{Quad::whole(), Quad::from_sites(*g, 0, 1, 3, 3)};
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const Configuration open = random_config(g->num_carriers(), seed + 1000);
      for (const auto& q : quads) CHECK(pivotal_sites(*g, open, q) == oracle::brute_pivotal(*g, open, q));
    }
  }
}

TEST_CASE("importance matches the four-arm oracles") {
  SUBCASE("square bonds") {
    const auto g = make_lattice({LatticeKind::SquareBond, 11});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const LabelField f = sample_uniform(g, seed);
      for (double eps : {0.1, 0.2, 0.3}) {
        const int R = importance_radius(*g, eps);
        for (EdgeId e = 0; e < static_cast<EdgeId>(g->num_edges()); ++e) {
          const bool fits = ArmGeometry::fits(*g, ArmCenter::edge(e), R);
          const bool expect = fits && oracle::square_edge_four_arm(f, e, R, 0.5);
          CHECK(is_important(f, e, 0.5, eps) == expect);
        }
      }
    }
  }
  SUBCASE("triangular sites") {
    const auto g = make_lattice({LatticeKind::TriangularSite, 11});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const LabelField f = sample_uniform(g, seed);
      for (double eps : {0.1, 0.2, 0.3}) {
        const int R = importance_radius(*g, eps);
        for (SiteId s = 0; s < static_cast<SiteId>(g->num_carriers()); ++s) {
          const bool fits = ArmGeometry::fits(*g, ArmCenter::site(s), R);
          const bool expect = fits && oracle::triangular_site_four_arm(f, s, R, 0.5);
          CHECK(is_important(f, s, 0.5, eps) == expect);
        }
      }
    }
  }
}

TEST_CASE("important carriers are a superset of pivotals far from the boundary") {
  // A carrier pivotal for the whole-square crossing has four arms to the
  // boundary, so it has them to any radius whose box fits.
  const auto g = make_lattice({LatticeKind::TriangularSite, 15});
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const LabelField f = sample_uniform(g, seed);
    for (CarrierId c : pivotal_sites(f, Quad::whole(), 0.5)) {
      if (!ArmGeometry::fits(*g, ArmCenter::site(c), 3)) continue;
      CHECK(is_important(f, c, 0.5, 3.0 / 14.0));
    }
  }
}

TEST_CASE("rate and lambda levels") {
  const Alpha4Function a4 = [](double eta) { return std::pow(eta, 1.25); };
  CHECK(rate_r(1.0 / 16, a4) == doctest::Approx(std::pow(1.0 / 16, 0.75)));
  CHECK_THROWS_AS(rate_r(0.1, [](double) { return 0.0; }), std::runtime_error);
  CHECK_THROWS_AS(rate_r(0.0, a4), std::invalid_argument);
  CHECK(lambda_level(0.0, 0.1, 0.3).p == 0.5);
  CHECK(lambda_level(1.0, 0.1, 0.1).p == doctest::Approx(0.6));
  CHECK(lambda_level(-INFINITY, 0.1, 0.1).p == 0.0);
  CHECK(lambda_level(INFINITY, 0.1, 0.1).p == 1.0);
  const RateModel m = RateModel::from_alpha4(a4);
  CHECK(m.rate(0.25) == doctest::Approx(std::pow(0.25, 0.75)));
}

TEST_CASE("alpha4 estimator basics") {
  const LatticeSpec spec{LatticeKind::TriangularSite, 9};
  const Estimate one = estimate_alpha4(spec, 2, 2, 10, 1);
  CHECK(one.estimate == 1.0);
  const Estimate a = estimate_alpha4(spec, 1, 4, 400, 3);
  const Estimate b = estimate_alpha4(spec, 1, 4, 400, 3, 4);
  CHECK(a.successes == b.successes);
  CHECK(a.estimate > 0.0);
  CHECK(a.estimate < 1.0);
  const Estimate c = estimate_alpha4(spec, 1, 6, 400, 3);
  CHECK(c.estimate <= a.estimate + 4 * (a.std_error + c.std_error));
  CHECK_THROWS_AS(estimate_alpha4(spec, 3, 2, 10, 1), std::invalid_argument);
}

TEST_CASE("alpha4 from a site counts the four-arm oracle") {
  for (int R : {3, 6, 10}) {
    const auto g = make_lattice({LatticeKind::TriangularSite, 2 * R + 1});
    const Estimate e = estimate_alpha4({LatticeKind::TriangularSite, 0}, 0, R, 600, 17);
    std::int64_t hits = 0;
    for (std::uint64_t i = 0; i < 600; ++i)
      hits += oracle::triangular_site_four_arm(sample_uniform(g, stream_seed(17, i)), g->site_at(R, R), R, 0.5);
    CHECK(e.successes == hits);
  }
}

TEST_CASE("pivotal measure normalisation") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 16});
  const LabelField f = sample_uniform(g, 1);
  const RateModel m = RateModel::from_alpha4([](double) { return 0.5; });
  const PivotalMeasure pm = pivotal_measure_estimate(f, Quad::whole(), 0.5, m);
  CHECK(pm.rate == doctest::Approx((1.0 / 256) / 0.5));
  CHECK(pm.normalized == doctest::Approx(pm.raw_count * pm.rate));
}
