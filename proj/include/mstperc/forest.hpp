#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mstperc/labels.hpp"
#include "mstperc/lattice.hpp"

namespace mstperc {

/// Tree path between two sites. `bottleneck` is the largest link label on
/// the path (0 for the empty path).
struct MinimaxPath {
  std::vector<SiteId> sites;
  std::vector<EdgeId> edges;
  double bottleneck = 0.0;

  bool empty() const { return edges.empty(); }
  friend bool operator==(const MinimaxPath&, const MinimaxPath&) = default;
};

/// A forest over the lattice vertices, stored both as an edge set and as
/// parent links rooted at one site per component.
class SpanningForest {
 public:
  /// Throws std::invalid_argument if `edges` contains a cycle or repeats.
  /// `labels` are indexed by carrier (a LabelField's values) or empty.
  /// Components are rooted at their smallest site, except the component of
  /// `root_hint` if given.
  SpanningForest(std::shared_ptr<const LatticeGraph> graph, std::vector<double> labels,
                 std::vector<EdgeId> edges, SiteId root_hint = kNoSite);

  const LatticeGraph& graph() const { return *graph_; }
  const std::shared_ptr<const LatticeGraph>& graph_ptr() const { return graph_; }

  /// Tree edges in increasing edge id.
  const std::vector<EdgeId>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  bool contains(EdgeId e) const { return in_tree_[e] != 0; }

  const std::vector<SiteId>& roots() const { return roots_; }
  bool spanning() const { return roots_.size() == 1; }
  SiteId parent(SiteId s) const { return parent_[s]; }
  EdgeId parent_edge(SiteId s) const { return parent_edge_[s]; }
  int depth(SiteId s) const { return depth_[s]; }
  SiteId root_of(SiteId s) const { return root_of_[s]; }

  std::span<const EdgeId> incident(SiteId s) const {
    return {adj_.data() + offset_[s], static_cast<std::size_t>(offset_[s + 1] - offset_[s])};
  }
  int degree(SiteId s) const { return offset_[s + 1] - offset_[s]; }

  double link_label(EdgeId e) const;
  /// Sites in the component of s.
  std::vector<SiteId> component(SiteId s) const;
  /// Path through the tree; throws std::invalid_argument across components.
  MinimaxPath path(SiteId x, SiteId y) const;

 private:
  std::shared_ptr<const LatticeGraph> graph_;
  std::vector<double> labels_;
  std::vector<EdgeId> edges_;
  std::vector<std::uint8_t> in_tree_;
  std::vector<SiteId> roots_;
  std::vector<SiteId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<int> depth_;
  std::vector<SiteId> root_of_;
  std::vector<int> offset_;
  std::vector<EdgeId> adj_;
};

/// Kruskal over the label order. Throws std::runtime_error if the lattice
/// graph is disconnected.
SpanningForest mst(const LabelField& f);

/// The same tree built by the cycle rule: scan edges from the highest label
/// down and delete each edge that lies on a remaining cycle. Quadratic; for
/// cross-checks on small lattices.
SpanningForest reverse_delete_tree(const LabelField& f);

MinimaxPath minimax_path(const SpanningForest& t, SiteId x, SiteId y);

/// True iff every non-tree edge has the largest label (in the strict label
/// order) on the cycle it closes in t.
bool cycle_rule_check(const LabelField& f, const SpanningForest& t);

bool same_edges(const SpanningForest& a, const SpanningForest& b);

// --- cluster trees ---------------------------------------------------------

/// MST of the graph in which every cluster at level p is contracted to a
/// vertex. Vertices are numbered by first appearance in site order.
struct ClusterTree {
  struct Link {
    std::int32_t a = 0, b = 0;  // cluster vertices
    EdgeId edge = kNoEdge;      // lattice edge realizing the link
    double label = 0.0;
    friend bool operator==(const Link&, const Link&) = default;
  };

  double p = 0.5;
  std::int32_t num_vertices = 0;
  std::vector<std::int32_t> vertex_of;  // site -> vertex
  std::vector<Link> links;              // in label order

  std::vector<double> link_labels() const;
  /// Same vertex partition and same link edges.
  bool same_structure(const ClusterTree& other) const;
};

ClusterTree cluster_tree(const LabelField& f, double p);

/// Contract the links of t1 with labels <= p2. Equals cluster_tree(f, p2).
/// Throws std::invalid_argument if p2 < t1.p.
ClusterTree refine_cluster_tree(const ClusterTree& t1, const LabelField& f, double p2);

// --- invasion --------------------------------------------------------------

struct InvasionStop {
  enum class Kind { Full, Sites, Level, Target };
  Kind kind = Kind::Full;
  std::int64_t sites = 0;  // Sites: stop once this many vertices are invaded
  double level = 1.0;      // Level: invade only carriers with label <= level
  SiteId target = kNoSite; // Target: stop once this vertex is invaded

  static InvasionStop full() { return {}; }
  static InvasionStop after_sites(std::int64_t k) { return {Kind::Sites, k, 1.0, kNoSite}; }
  static InvasionStop at_level(double p) { return {Kind::Level, 0, p, kNoSite}; }
  static InvasionStop at_target(SiteId s) { return {Kind::Target, 0, 1.0, s}; }
};

/// Invasion percolation from `source`: repeatedly add the boundary edge that
/// is smallest in the label order. Uninvaded vertices are singleton
/// components; the invaded component is rooted at the source.
SpanningForest invasion_tree(const LabelField& f, SiteId source,
                             InvasionStop stop = InvasionStop::full());

/// Edge ids in the union of the invasion trees from all sources.
std::vector<EdgeId> invasion_union(const LabelField& f, std::span<const SiteId> sources,
                                   InvasionStop stop = InvasionStop::full());

/// True iff the union of the full invasion trees equals mst(f).
bool invasion_union_check(const LabelField& f, std::span<const SiteId> sources);

// --- diameter cutoff -------------------------------------------------------

/// Path between the super-vertices of x and y in the MST of the graph where
/// only clusters at level p1 of L-infinity diameter >= eps are contracted.
struct CutoffPath {
  struct Vertex {
    SiteId min_site = kNoSite;  // identifies the super-vertex across cutoffs
    std::int32_t size = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
  };
  std::vector<Vertex> vertices;
  std::vector<EdgeId> links;
  double max_link_label = 0.0;  // the level needed to open the path
  double max_cluster_diameter = 0.0;  // diagnostic at p1, unit-square units
  std::int32_t contracted_clusters = 0;
};

CutoffPath cutoff_cluster_path(const LabelField& f, double p1, double eps, SiteId x, SiteId y);

bool paths_coincide(const CutoffPath& a, const CutoffPath& b);

}  // namespace mstperc
