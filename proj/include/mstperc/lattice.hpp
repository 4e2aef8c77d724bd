#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mstperc {

enum class LatticeKind { SquareBond, TriangularSite };

std::string_view to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(std::string_view text);

using SiteId = std::int32_t;
using EdgeId = std::int32_t;
using CarrierId = std::int32_t;

inline constexpr SiteId kNoSite = -1;
inline constexpr EdgeId kNoEdge = -1;

/// Lattice geometry request. `n` counts sites per side of the square
/// domain; the mesh is 1/n.
struct LatticeSpec {
  LatticeKind kind = LatticeKind::SquareBond;
  int n = 2;

  double mesh() const { return 1.0 / n; }
  void validate() const;

  // Closed-form counts for the graph actually built (after subdivision
  // for the triangular lattice).
  std::size_t expected_sites() const;
  std::size_t expected_edges() const;
  std::size_t expected_carriers() const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Coordinates in half lattice steps. Original sites sit at even
/// coordinates; edge midpoints have at least one odd coordinate.
struct Coord2 {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord2&, const Coord2&) = default;
};

struct Edge {
  SiteId a = kNoSite;
  SiteId b = kNoSite;
};

/// Finite lattice with free boundary.
///
/// SquareBond: sites are the n*n grid points, edges are nearest-neighbour
/// bonds and carry the labels (one carrier per edge).
///
/// TriangularSite: the n*n grid with one diagonal direction (+1,+1) added,
/// which is the triangular lattice in sheared coordinates. Every original
/// edge is replaced by two half-edges in series through a new midpoint
/// site of degree 2. Labels live on the original sites; half-edge e takes
/// the label of its original endpoint `edge_star(e)`, stored as `edge(e).a`.
///
/// Site ids: original sites first (row * n + col), then midpoints.
class LatticeGraph {
 public:
  explicit LatticeGraph(const LatticeSpec& spec);

  const LatticeSpec& spec() const { return spec_; }
  LatticeKind kind() const { return spec_.kind; }
  int n() const { return spec_.n; }
  bool triangular() const { return spec_.kind == LatticeKind::TriangularSite; }

  std::size_t num_sites() const { return coord_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_original_sites() const {
    return static_cast<std::size_t>(spec_.n) * spec_.n;
  }
  std::size_t num_carriers() const {
    return triangular() ? num_original_sites() : num_edges();
  }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const SiteId> neighbors(SiteId s) const;
  std::span<const EdgeId> incident_edges(SiteId s) const;
  int degree(SiteId s) const {
    return adj_offset_[s + 1] - adj_offset_[s];
  }
  SiteId other_end(EdgeId e, SiteId s) const {
    return edges_[e].a == s ? edges_[e].b : edges_[e].a;
  }
  EdgeId find_edge(SiteId a, SiteId b) const;

  bool is_original(SiteId s) const {
    return static_cast<std::size_t>(s) < num_original_sites();
  }
  SiteId site_at(int col, int row) const { return row * spec_.n + col; }
  int col_of(SiteId s) const { return coord_[s].x / 2; }
  int row_of(SiteId s) const { return coord_[s].y / 2; }

  Coord2 coord2(SiteId s) const { return coord_[s]; }
  // Position in the unit square; the lattice spans [0,1]^2 exactly.
  std::pair<double, double> position(SiteId s) const;
  double unit_per_half_step() const { return 0.5 / (spec_.n - 1); }
  bool on_boundary(SiteId s) const { return boundary_[s] != 0; }

  /// Vertex at doubled coordinates, or kNoSite.
  SiteId site_at_coord2(Coord2 c) const;

  // Carriers are edges (SquareBond) or original sites (TriangularSite).
  CarrierId carrier_of_edge(EdgeId e) const {
    return triangular() ? edges_[e].a : e;
  }
  Coord2 carrier_coord2(CarrierId c) const;
  /// Carrier whose position is `c` (edge midpoint or original site).
  CarrierId carrier_at_coord2(Coord2 c) const;

  /// The original-vertex endpoint e* of a half-edge. Throws on SquareBond.
  SiteId edge_star(EdgeId e) const;

  /// Adjacency between original triangular sites (6-neighbourhood, ccw).
  /// For SquareBond this is the plain 4-neighbourhood of grid sites.
  std::span<const SiteId> original_neighbors(SiteId s) const;

  /// Reflection x -> 1 - x.
  SiteId mirror_site(SiteId s) const;
  EdgeId mirror_edge(EdgeId e) const;

 private:
  void build_square();
  void build_triangular();
  void finish_adjacency();

  LatticeSpec spec_;
  std::vector<Coord2> coord_;
  std::vector<Edge> edges_;
  std::vector<int> adj_offset_;
  std::vector<SiteId> adj_site_;
  std::vector<EdgeId> adj_edge_;
  std::vector<std::uint8_t> boundary_;
  std::vector<int> orig_offset_;
  std::vector<SiteId> orig_site_;
  std::vector<SiteId> site_by_coord_;
  std::vector<EdgeId> edge_by_mid_;  // SquareBond only
};

LatticeGraph build_lattice(const LatticeSpec& spec);
std::shared_ptr<const LatticeGraph> make_lattice(const LatticeSpec& spec);

/// L-infinity extent of the bounding box of `sites`, in lattice units.
double l_infinity_diameter(const LatticeGraph& g, std::span<const SiteId> sites);

/// L-infinity distance between two vertices, in lattice units.
double l_infinity_distance(const LatticeGraph& g, SiteId a, SiteId b);

/// Axis-aligned bounding box in doubled coordinates.
struct Box2 {
  int xmin = 1 << 30;
  int xmax = -(1 << 30);
  int ymin = 1 << 30;
  int ymax = -(1 << 30);

  bool empty() const { return xmin > xmax; }
  void add(Coord2 c) {
    if (c.x < xmin) xmin = c.x;
    if (c.x > xmax) xmax = c.x;
    if (c.y < ymin) ymin = c.y;
    if (c.y > ymax) ymax = c.y;
  }
  void merge(const Box2& o) {
    if (o.empty()) return;
    add({o.xmin, o.ymin});
    add({o.xmax, o.ymax});
  }
  // Extent in half steps.
  int extent2() const {
    if (empty()) return 0;
    return std::max(xmax - xmin, ymax - ymin);
  }
  double diameter() const { return extent2() / 2.0; }
};

}  // namespace mstperc
