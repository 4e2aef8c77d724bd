#include "doctest.h"

#include <set>

#include "mstperc/lattice.hpp"

using namespace mstperc;

TEST_CASE("closed-form counts") {
  for (int n : {2, 3, 5, 8}) {
    for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
      const LatticeSpec spec{kind, n};
      const LatticeGraph g(spec);
      CHECK(g.num_sites() == spec.expected_sites());
      CHECK(g.num_edges() == spec.expected_edges());
      CHECK(g.num_carriers() == spec.expected_carriers());
    }
  }
  const LatticeGraph sq({LatticeKind::SquareBond, 3});
  CHECK(sq.num_sites() == 9);
  CHECK(sq.num_edges() == 12);
}

TEST_CASE("invalid sizes are rejected") {
  CHECK_THROWS_AS(LatticeGraph({LatticeKind::SquareBond, 1}), std::invalid_argument);
  CHECK_THROWS_AS(lattice_kind_from_string("hex"), std::invalid_argument);
  CHECK(lattice_kind_from_string(to_string(LatticeKind::TriangularSite)) == LatticeKind::TriangularSite);
}

TEST_CASE("degrees") {
  const LatticeGraph sq({LatticeKind::SquareBond, 5});
  for (SiteId s = 0; s < static_cast<SiteId>(sq.num_sites()); ++s) {
    const int c = sq.col_of(s), r = sq.row_of(s);
    const int expect = 4 - (c == 0) - (c == 4) - (r == 0) - (r == 4);
    CHECK(sq.degree(s) == expect);
  }
  const LatticeGraph tri({LatticeKind::TriangularSite, 5});
  for (SiteId s = 0; s < static_cast<SiteId>(tri.num_sites()); ++s) {
    if (tri.is_original(s)) {
      CHECK(tri.degree(s) <= 6);
      CHECK(tri.degree(s) == static_cast<int>(tri.original_neighbors(s).size()));
    } else {
      CHECK(tri.degree(s) == 2);
    }
  }
  // interior triangular site has six neighbours
  CHECK(tri.degree(tri.site_at(2, 2)) == 6);
}

TEST_CASE("half-edges carry the label of their original endpoint") {
  const LatticeGraph tri({LatticeKind::TriangularSite, 4});
  std::set<std::pair<SiteId, SiteId>> seen;
  for (EdgeId e = 0; e < static_cast<EdgeId>(tri.num_edges()); ++e) {
    const SiteId star = tri.edge_star(e);
    CHECK(tri.is_original(star));
    CHECK_FALSE(tri.is_original(tri.edge(e).b));
    CHECK(tri.carrier_of_edge(e) == star);
    seen.insert({star, tri.edge(e).b});
  }
  CHECK(seen.size() == tri.num_edges());
  const LatticeGraph sq({LatticeKind::SquareBond, 3});
  CHECK_THROWS_AS(sq.edge_star(0), std::invalid_argument);
}

TEST_CASE("neighbours are in ccw order") {
  const LatticeGraph tri({LatticeKind::TriangularSite, 5});
  const SiteId s = tri.site_at(2, 2);
  const auto nb = tri.original_neighbors(s);
  REQUIRE(nb.size() == 6);
  CHECK(nb[0] == tri.site_at(3, 2));
  CHECK(nb[1] == tri.site_at(3, 3));
  CHECK(nb[2] == tri.site_at(2, 3));
  CHECK(nb[3] == tri.site_at(1, 2));
  CHECK(nb[4] == tri.site_at(1, 1));
  CHECK(nb[5] == tri.site_at(2, 1));
}

TEST_CASE("positions span the unit square") {
  for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const LatticeGraph g({kind, 6});
    double xmax = 0, ymax = 0;
    for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
      const auto [x, y] = g.position(s);
      CHECK(x >= 0.0);
      CHECK(y >= 0.0);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
      CHECK(g.site_at_coord2(g.coord2(s)) == s);
    }
    CHECK(xmax == doctest::Approx(1.0));
    CHECK(ymax == doctest::Approx(1.0));
  }
}

TEST_CASE("carrier coordinates round-trip") {
  for (auto kind : {LatticeKind::SquareBond, LatticeKind::TriangularSite}) {
    const LatticeGraph g({kind, 5});
    for (CarrierId c = 0; c < static_cast<CarrierId>(g.num_carriers()); ++c)
      CHECK(g.carrier_at_coord2(g.carrier_coord2(c)) == c);
  }
}

TEST_CASE("mirror is an involutive automorphism of the square lattice") {
  const LatticeGraph g({LatticeKind::SquareBond, 6});
  for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
    CHECK(g.mirror_site(g.mirror_site(s)) == s);
    CHECK(g.position(g.mirror_site(s)).first == doctest::Approx(1.0 - g.position(s).first));
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
    const EdgeId m = g.mirror_edge(e);
    REQUIRE(m != kNoEdge);
    CHECK(g.mirror_edge(m) == e);
  }
}

TEST_CASE("boundary and distances") {
  const LatticeGraph g({LatticeKind::SquareBond, 4});
  CHECK(g.on_boundary(g.site_at(0, 2)));
  CHECK_FALSE(g.on_boundary(g.site_at(1, 2)));
  CHECK(l_infinity_distance(g, g.site_at(0, 0), g.site_at(3, 1)) == 3.0);
  const std::vector<SiteId> pts{g.site_at(0, 0), g.site_at(2, 1)};
  CHECK(l_infinity_diameter(g, pts) == 2.0);
  CHECK_THROWS_AS(l_infinity_diameter(g, std::span<const SiteId>{}), std::invalid_argument);
}
