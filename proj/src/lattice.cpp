#include "mstperc/lattice.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mstperc {

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::SquareBond:
      return "square_bond";
    case LatticeKind::TriangularSite:
      return "triangular_site";
  }
  return "unknown";
}

LatticeKind lattice_kind_from_string(std::string_view text) {
  if (text == "square_bond" || text == "square") return LatticeKind::SquareBond;
  if (text == "triangular_site" || text == "triangular")
    return LatticeKind::TriangularSite;
  throw std::invalid_argument("unknown lattice kind: " + std::string(text));
}

void LatticeSpec::validate() const {
  if (n < 2) throw std::invalid_argument("lattice needs n >= 2");
  if (n > 46000) throw std::invalid_argument("lattice too large");
}

std::size_t LatticeSpec::expected_sites() const {
  const std::size_t m = n;
  if (kind == LatticeKind::SquareBond) return m * m;
  const std::size_t original_edges = 2 * m * (m - 1) + (m - 1) * (m - 1);
  return m * m + original_edges;
}

std::size_t LatticeSpec::expected_edges() const {
  const std::size_t m = n;
  if (kind == LatticeKind::SquareBond) return 2 * m * (m - 1);
  return 2 * (2 * m * (m - 1) + (m - 1) * (m - 1));
}

std::size_t LatticeSpec::expected_carriers() const {
  const std::size_t m = n;
  return kind == LatticeKind::SquareBond ? 2 * m * (m - 1) : m * m;
}

namespace {

// ccw around a site as drawn on the grid
constexpr int kSquareDirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
constexpr int kTriDirs[6][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};

}  // namespace

LatticeGraph::LatticeGraph(const LatticeSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n = spec_.n;
  const int side2 = 2 * n - 1;
  site_by_coord_.assign(static_cast<std::size_t>(side2) * side2, kNoSite);

  coord_.reserve(spec_.expected_sites());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) coord_.push_back({2 * c, 2 * r});

  if (triangular())
    build_triangular();
  else
    build_square();

  for (SiteId s = 0; s < static_cast<SiteId>(coord_.size()); ++s)
    site_by_coord_[static_cast<std::size_t>(coord_[s].y) * side2 + coord_[s].x] = s;

  boundary_.resize(coord_.size());
  const int max2 = 2 * (n - 1);
  for (std::size_t s = 0; s < coord_.size(); ++s) {
    const auto [x, y] = coord_[s];
    boundary_[s] = (x == 0 || y == 0 || x == max2 || y == max2) ? 1 : 0;
  }

  // Original-site adjacency in ccw order.
  const int ndirs = triangular() ? 6 : 4;
  orig_offset_.assign(static_cast<std::size_t>(n) * n + 1, 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const SiteId s = site_at(c, r);
      for (int d = 0; d < ndirs; ++d) {
        const int dc = triangular() ? kTriDirs[d][0] : kSquareDirs[d][0];
        const int dr = triangular() ? kTriDirs[d][1] : kSquareDirs[d][1];
        const int cc = c + dc, rr = r + dr;
        if (cc < 0 || rr < 0 || cc >= n || rr >= n) continue;
        orig_site_.push_back(site_at(cc, rr));
      }
      orig_offset_[s + 1] = static_cast<int>(orig_site_.size());
    }
  }

  if (coord_.size() != spec_.expected_sites() ||
      edges_.size() != spec_.expected_edges())
    throw std::logic_error("lattice construction produced wrong counts");
}

void LatticeGraph::build_square() {
  const int n = spec_.n;
  const int side2 = 2 * n - 1;
  edge_by_mid_.assign(static_cast<std::size_t>(side2) * side2, kNoEdge);
  edges_.reserve(spec_.expected_edges());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const SiteId s = site_at(c, r);
      if (c + 1 < n) {
        edge_by_mid_[static_cast<std::size_t>(2 * r) * side2 + 2 * c + 1] =
            static_cast<EdgeId>(edges_.size());
        edges_.push_back({s, site_at(c + 1, r)});
      }
      if (r + 1 < n) {
        edge_by_mid_[static_cast<std::size_t>(2 * r + 1) * side2 + 2 * c] =
            static_cast<EdgeId>(edges_.size());
        edges_.push_back({s, site_at(c, r + 1)});
      }
    }
  }
  finish_adjacency();
}

void LatticeGraph::build_triangular() {
  const int n = spec_.n;
  edges_.reserve(spec_.expected_edges());
  // Forward directions only, each original edge once.
  constexpr int fwd[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const SiteId u = site_at(c, r);
      for (const auto& d : fwd) {
        const int cc = c + d[0], rr = r + d[1];
        if (cc >= n || rr >= n) continue;
        const SiteId v = site_at(cc, rr);
        const SiteId m = static_cast<SiteId>(coord_.size());
        coord_.push_back({c + cc, r + rr});
        // Half-edge `a` is always the original endpoint e*.
        edges_.push_back({u, m});
        edges_.push_back({v, m});
      }
    }
  }
  finish_adjacency();
}

void LatticeGraph::finish_adjacency() {
  const std::size_t ns = coord_.size();
  std::vector<std::vector<std::pair<SiteId, EdgeId>>> lists(ns);
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    lists[edges_[e].a].push_back({edges_[e].b, e});
    lists[edges_[e].b].push_back({edges_[e].a, e});
  }
  // Sort each list ccw by direction so neighbor order is geometric.
  auto octant = [](int dx, int dy) {
    // dx,dy in {-1,0,1} up to scale; ccw starting from +x.
    const int sx = (dx > 0) - (dx < 0), sy = (dy > 0) - (dy < 0);
    constexpr int table[3][3] = {{5, 4, 3}, {6, -1, 2}, {7, 0, 1}};
    return table[sx + 1][sy + 1];
  };
  adj_offset_.assign(ns + 1, 0);
  adj_site_.clear();
  adj_edge_.clear();
  for (std::size_t s = 0; s < ns; ++s) {
    auto& l = lists[s];
    const Coord2 c = coord_[s];
    std::sort(l.begin(), l.end(), [&](const auto& p, const auto& q) {
      const Coord2 a = coord_[p.first], b = coord_[q.first];
      return octant(a.x - c.x, a.y - c.y) < octant(b.x - c.x, b.y - c.y);
    });
    for (const auto& [t, e] : l) {
      adj_site_.push_back(t);
      adj_edge_.push_back(e);
    }
    adj_offset_[s + 1] = static_cast<int>(adj_site_.size());
  }
}

std::span<const SiteId> LatticeGraph::neighbors(SiteId s) const {
  return {adj_site_.data() + adj_offset_[s],
          static_cast<std::size_t>(adj_offset_[s + 1] - adj_offset_[s])};
}

std::span<const EdgeId> LatticeGraph::incident_edges(SiteId s) const {
  return {adj_edge_.data() + adj_offset_[s],
          static_cast<std::size_t>(adj_offset_[s + 1] - adj_offset_[s])};
}

std::span<const SiteId> LatticeGraph::original_neighbors(SiteId s) const {
  return {orig_site_.data() + orig_offset_[s],
          static_cast<std::size_t>(orig_offset_[s + 1] - orig_offset_[s])};
}

EdgeId LatticeGraph::find_edge(SiteId a, SiteId b) const {
  const auto nb = neighbors(a);
  const auto ie = incident_edges(a);
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (nb[i] == b) return ie[i];
  return kNoEdge;
}

std::pair<double, double> LatticeGraph::position(SiteId s) const {
  const double k = unit_per_half_step();
  return {coord_[s].x * k, coord_[s].y * k};
}

SiteId LatticeGraph::site_at_coord2(Coord2 c) const {
  const int side2 = 2 * spec_.n - 1;
  if (c.x < 0 || c.y < 0 || c.x >= side2 || c.y >= side2) return kNoSite;
  return site_by_coord_[static_cast<std::size_t>(c.y) * side2 + c.x];
}

Coord2 LatticeGraph::carrier_coord2(CarrierId c) const {
  if (triangular()) return coord_[c];
  const Coord2 a = coord_[edges_[c].a], b = coord_[edges_[c].b];
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

CarrierId LatticeGraph::carrier_at_coord2(Coord2 c) const {
  const int side2 = 2 * spec_.n - 1;
  if (c.x < 0 || c.y < 0 || c.x >= side2 || c.y >= side2) return -1;
  if (triangular()) {
    if ((c.x | c.y) & 1) return -1;
    return site_at(c.x / 2, c.y / 2);
  }
  return edge_by_mid_[static_cast<std::size_t>(c.y) * side2 + c.x];
}

SiteId LatticeGraph::edge_star(EdgeId e) const {
  if (!triangular())
    throw std::invalid_argument("edge_star is defined only for the subdivided triangular lattice");
  if (e < 0 || static_cast<std::size_t>(e) >= edges_.size())
    throw std::out_of_range("edge_star: edge id out of range");
  return edges_[e].a;
}

SiteId LatticeGraph::mirror_site(SiteId s) const {
  const Coord2 c = coord_[s];
  return site_at_coord2({2 * (spec_.n - 1) - c.x, c.y});
}

EdgeId LatticeGraph::mirror_edge(EdgeId e) const {
  return find_edge(mirror_site(edges_[e].a), mirror_site(edges_[e].b));
}

LatticeGraph build_lattice(const LatticeSpec& spec) { return LatticeGraph(spec); }

std::shared_ptr<const LatticeGraph> make_lattice(const LatticeSpec& spec) {
  return std::make_shared<const LatticeGraph>(spec);
}

double l_infinity_diameter(const LatticeGraph& g, std::span<const SiteId> sites) {
  if (sites.empty()) throw std::invalid_argument("diameter of an empty site set");
  Box2 box;
  for (SiteId s : sites) box.add(g.coord2(s));
  return box.diameter();
}

double l_infinity_distance(const LatticeGraph& g, SiteId a, SiteId b) {
  const Coord2 p = g.coord2(a), q = g.coord2(b);
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y)) / 2.0;
}

}  // namespace mstperc
