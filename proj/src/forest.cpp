#include "mstperc/forest.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "mstperc/disjoint_sets.hpp"
#include "mstperc/percolation.hpp"

namespace mstperc {

SpanningForest::SpanningForest(std::shared_ptr<const LatticeGraph> graph,
                               std::vector<double> labels, std::vector<EdgeId> edges,
                               SiteId root_hint)
    : graph_(std::move(graph)), labels_(std::move(labels)), edges_(std::move(edges)) {
  if (!graph_) throw std::invalid_argument("forest needs a lattice");
  const LatticeGraph& g = *graph_;
  if (!labels_.empty() && labels_.size() != g.num_carriers())
    throw std::invalid_argument("forest labels do not match carrier count");
  const std::size_t ns = g.num_sites();
  std::sort(edges_.begin(), edges_.end());
  in_tree_.assign(g.num_edges(), 0);
  DisjointSets ds(ns);
  for (EdgeId e : edges_) {
    if (e < 0 || static_cast<std::size_t>(e) >= g.num_edges())
      throw std::invalid_argument("forest edge out of range");
    if (in_tree_[e]) throw std::invalid_argument("forest edge repeated");
    in_tree_[e] = 1;
    if (!ds.unite(g.edge(e).a, g.edge(e).b)) throw std::invalid_argument("forest edges contain a cycle");
  }

  offset_.assign(ns + 1, 0);
  for (EdgeId e : edges_) {
    ++offset_[g.edge(e).a + 1];
    ++offset_[g.edge(e).b + 1];
  }
  for (std::size_t s = 0; s < ns; ++s) offset_[s + 1] += offset_[s];
  adj_.resize(offset_.back());
  std::vector<int> fill(offset_.begin(), offset_.end() - 1);
  for (EdgeId e : edges_) {
    adj_[fill[g.edge(e).a]++] = e;
    adj_[fill[g.edge(e).b]++] = e;
  }

  parent_.assign(ns, kNoSite);
  parent_edge_.assign(ns, kNoEdge);
  depth_.assign(ns, -1);
  root_of_.assign(ns, kNoSite);
  std::vector<SiteId> queue;
  auto grow = [&](SiteId r) {
    roots_.push_back(r);
    depth_[r] = 0;
    root_of_[r] = r;
    queue.assign(1, r);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const SiteId u = queue[h];
      for (EdgeId e : incident(u)) {
        const SiteId v = g.other_end(e, u);
        if (depth_[v] >= 0) continue;
        depth_[v] = depth_[u] + 1;
        parent_[v] = u;
        parent_edge_[v] = e;
        root_of_[v] = r;
        queue.push_back(v);
      }
    }
  };
  if (root_hint != kNoSite) {
    if (root_hint < 0 || static_cast<std::size_t>(root_hint) >= ns)
      throw std::invalid_argument("root hint out of range");
    grow(root_hint);
  }
  for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s)
    if (depth_[s] < 0) grow(s);
}

double SpanningForest::link_label(EdgeId e) const {
  return labels_.empty() ? 0.0 : labels_[graph_->carrier_of_edge(e)];
}

std::vector<SiteId> SpanningForest::component(SiteId s) const {
  std::vector<SiteId> out{s};
  std::vector<std::uint8_t> seen(graph_->num_sites(), 0);
  seen[s] = 1;
  for (std::size_t h = 0; h < out.size(); ++h) {
    for (EdgeId e : incident(out[h])) {
      const SiteId v = graph_->other_end(e, out[h]);
      if (!seen[v]) {
        seen[v] = 1;
        out.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MinimaxPath SpanningForest::path(SiteId x, SiteId y) const {
  const std::size_t ns = graph_->num_sites();
  if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= ns || static_cast<std::size_t>(y) >= ns)
    throw std::invalid_argument("path endpoint out of range");
  if (root_of_[x] != root_of_[y]) throw std::invalid_argument("path endpoints are not connected");
  std::vector<SiteId> up{x}, down{y};
  std::vector<EdgeId> up_e, down_e;
  SiteId a = x, b = y;
  while (a != b) {
    if (depth_[a] >= depth_[b]) {
      up_e.push_back(parent_edge_[a]);
      a = parent_[a];
      up.push_back(a);
    } else {
      down_e.push_back(parent_edge_[b]);
      b = parent_[b];
      down.push_back(b);
    }
  }
  MinimaxPath p;
  p.sites = std::move(up);
  p.sites.insert(p.sites.end(), down.rbegin() + 1, down.rend());
  p.edges = std::move(up_e);
  p.edges.insert(p.edges.end(), down_e.rbegin(), down_e.rend());
  for (EdgeId e : p.edges) p.bottleneck = std::max(p.bottleneck, link_label(e));
  return p;
}

SpanningForest mst(const LabelField& f) {
  const LatticeGraph& g = f.graph();
  DisjointSets ds(g.num_sites());
  std::vector<EdgeId> tree;
  tree.reserve(g.num_sites() - 1);
  for (EdgeId e : f.sorted_edges()) {
    if (ds.unite(g.edge(e).a, g.edge(e).b)) tree.push_back(e);
    if (tree.size() + 1 == g.num_sites()) break;
  }
  if (tree.size() + 1 != g.num_sites()) throw std::runtime_error("mst: lattice graph is disconnected");
  return SpanningForest(f.graph_ptr(), f.values(), std::move(tree));
}

SpanningForest reverse_delete_tree(const LabelField& f) {
  const LatticeGraph& g = f.graph();
  const std::size_t ns = g.num_sites();
  std::vector<std::uint8_t> active(g.num_edges(), 1);
  std::vector<std::uint8_t> seen(ns);
  std::vector<SiteId> stack;
  auto connected = [&](SiteId a, SiteId b) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, a);
    seen[a] = 1;
    while (!stack.empty()) {
      const SiteId u = stack.back();
      stack.pop_back();
      if (u == b) return true;
      for (EdgeId e : g.incident_edges(u)) {
        if (!active[e]) continue;
        const SiteId v = g.other_end(e, u);
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return false;
  };
  const auto order = f.sorted_edges();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    active[*it] = 0;
    if (!connected(g.edge(*it).a, g.edge(*it).b)) active[*it] = 1;
  }
  std::vector<EdgeId> tree;
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e)
    if (active[e]) tree.push_back(e);
  if (tree.size() + 1 != ns) throw std::runtime_error("reverse_delete_tree: lattice graph is disconnected");
  return SpanningForest(f.graph_ptr(), f.values(), std::move(tree));
}

MinimaxPath minimax_path(const SpanningForest& t, SiteId x, SiteId y) { return t.path(x, y); }

bool cycle_rule_check(const LabelField& f, const SpanningForest& t) {
  const LatticeGraph& g = f.graph();
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
    if (t.contains(e)) continue;
    const SiteId a = g.edge(e).a, b = g.edge(e).b;
    if (t.root_of(a) != t.root_of(b)) return false;
    for (EdgeId c : t.path(a, b).edges)
      if (!f.edge_less(c, e)) return false;
  }
  return true;
}

bool same_edges(const SpanningForest& a, const SpanningForest& b) {
  return a.graph().spec() == b.graph().spec() && a.edges() == b.edges();
}

std::vector<double> ClusterTree::link_labels() const {
  std::vector<double> out;
  out.reserve(links.size());
  for (const auto& l : links) out.push_back(l.label);
  return out;
}

bool ClusterTree::same_structure(const ClusterTree& other) const {
  if (num_vertices != other.num_vertices || vertex_of != other.vertex_of) return false;
  if (links.size() != other.links.size()) return false;
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].edge != other.links[i].edge) return false;
  return true;
}

ClusterTree cluster_tree(const LabelField& f, double p) {
  const LatticeGraph& g = f.graph();
  const ClusterPartition part = clusters_at(f, p);
  ClusterTree t;
  t.p = p;
  t.num_vertices = static_cast<std::int32_t>(part.num_clusters());
  t.vertex_of = part.assignment();
  DisjointSets ds(t.num_vertices);
  for (EdgeId e : f.sorted_edges()) {
    if (ds.num_sets() == 1) break;
    const double u = f.edge_label(e);
    if (u <= p) continue;
    const std::int32_t a = t.vertex_of[g.edge(e).a], b = t.vertex_of[g.edge(e).b];
    if (ds.unite(a, b)) t.links.push_back({a, b, e, u});
  }
  return t;
}

ClusterTree refine_cluster_tree(const ClusterTree& t1, const LabelField& /*f*/, double p2) {
  if (p2 < t1.p) throw std::invalid_argument("refine_cluster_tree needs p2 >= p1");
  DisjointSets ds(t1.num_vertices);
  for (const auto& l : t1.links)
    if (l.label <= p2) ds.unite(l.a, l.b);
  std::vector<std::int32_t> renum(t1.num_vertices, -1);
  ClusterTree t;
  t.p = p2;
  t.vertex_of.resize(t1.vertex_of.size());
  for (std::size_t s = 0; s < t1.vertex_of.size(); ++s) {
    std::int32_t& id = renum[ds.find(t1.vertex_of[s])];
    if (id < 0) id = t.num_vertices++;
    t.vertex_of[s] = id;
  }
  for (const auto& l : t1.links) {
    if (l.label <= p2) continue;
    t.links.push_back({renum[ds.find(l.a)], renum[ds.find(l.b)], l.edge, l.label});
  }
  return t;
}

SpanningForest invasion_tree(const LabelField& f, SiteId source, InvasionStop stop) {
  const LatticeGraph& g = f.graph();
  const std::size_t ns = g.num_sites();
  if (source < 0 || static_cast<std::size_t>(source) >= ns)
    throw std::invalid_argument("invasion source out of range");
  if (stop.kind == InvasionStop::Kind::Target &&
      (stop.target < 0 || static_cast<std::size_t>(stop.target) >= ns))
    throw std::invalid_argument("invasion target out of range");

  // Key (label, carrier, edge) realizes the strict edge order.
  using Key = std::tuple<double, CarrierId, EdgeId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> frontier;
  std::vector<std::uint8_t> invaded(ns, 0);
  std::vector<EdgeId> tree;
  std::int64_t count = 0;
  auto invade = [&](SiteId s) {
    invaded[s] = 1;
    ++count;
    for (EdgeId e : g.incident_edges(s)) {
      if (invaded[g.other_end(e, s)]) continue;
      const CarrierId c = g.carrier_of_edge(e);
      frontier.push({f[c], c, e});
    }
  };
  auto done = [&] {
    switch (stop.kind) {
      case InvasionStop::Kind::Full:
        return false;
      case InvasionStop::Kind::Sites:
        return count >= stop.sites;
      case InvasionStop::Kind::Level:
        return false;
      case InvasionStop::Kind::Target:
        return invaded[stop.target] != 0;
    }
    return false;
  };
  invade(source);
  while (!frontier.empty() && !done()) {
    const auto [u, c, e] = frontier.top();
    if (stop.kind == InvasionStop::Kind::Level && u > stop.level) break;
    frontier.pop();
    const SiteId a = g.edge(e).a, b = g.edge(e).b;
    if (invaded[a] && invaded[b]) continue;
    tree.push_back(e);
    invade(invaded[a] ? b : a);
  }
  return SpanningForest(f.graph_ptr(), f.values(), std::move(tree), source);
}

std::vector<EdgeId> invasion_union(const LabelField& f, std::span<const SiteId> sources,
                                   InvasionStop stop) {
  std::vector<std::uint8_t> in(f.graph().num_edges(), 0);
  for (SiteId s : sources) {
    const SpanningForest t = invasion_tree(f, s, stop);
    for (EdgeId e : t.edges()) in[e] = 1;
  }
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(in.size()); ++e)
    if (in[e]) out.push_back(e);
  return out;
}

bool invasion_union_check(const LabelField& f, std::span<const SiteId> sources) {
  if (sources.empty()) throw std::invalid_argument("invasion_union_check needs a source");
  return invasion_union(f, sources) == mst(f).edges();
}

CutoffPath cutoff_cluster_path(const LabelField& f, double p1, double eps, SiteId x, SiteId y) {
  const LatticeGraph& g = f.graph();
  const std::size_t ns = g.num_sites();
  if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= ns || static_cast<std::size_t>(y) >= ns)
    throw std::invalid_argument("cutoff path endpoint out of range");
  if (!(eps > 0.0)) throw std::invalid_argument("cutoff scale must be positive");

  const ClusterPartition part = clusters_at(f, p1);
  const double min_steps = eps * (g.n() - 1) - 1e-9;
  CutoffPath out;
  out.max_cluster_diameter = part.max_diameter() / (g.n() - 1);

  // Pre-merge the large clusters, then run Kruskal on the rest.
  DisjointSets ds(ns);
  std::vector<std::uint8_t> big(part.num_clusters(), 0);
  for (std::size_t c = 0; c < part.num_clusters(); ++c) {
    big[c] = part.stats(static_cast<std::int32_t>(c)).size > 1 &&
             part.stats(static_cast<std::int32_t>(c)).diameter() >= min_steps;
    out.contracted_clusters += big[c];
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
    const SiteId a = g.edge(e).a, b = g.edge(e).b;
    const std::int32_t c = part.cluster_of(a);
    if (big[c] && c == part.cluster_of(b)) ds.unite(a, b);
  }
  std::vector<std::int32_t> super(ns);
  for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) super[s] = ds.find(s);
  // super-vertex identity: (smallest site, size)
  std::vector<SiteId> min_site(ns, std::numeric_limits<SiteId>::max());
  std::vector<std::int32_t> size(ns, 0);
  for (SiteId s = 0; s < static_cast<SiteId>(ns); ++s) {
    min_site[super[s]] = std::min(min_site[super[s]], s);
    ++size[super[s]];
  }

  std::vector<EdgeId> links;
  for (EdgeId e : f.sorted_edges()) {
    if (ds.num_sets() == 1) break;
    if (ds.unite(g.edge(e).a, g.edge(e).b)) links.push_back(e);
  }

  // Path search on the super-vertex tree.
  std::vector<std::vector<std::pair<std::int32_t, EdgeId>>> adj(ns);
  for (EdgeId e : links) {
    const std::int32_t a = super[g.edge(e).a], b = super[g.edge(e).b];
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }
  const std::int32_t sx = super[x], sy = super[y];
  std::vector<std::int32_t> prev(ns, -1);
  std::vector<EdgeId> prev_edge(ns, kNoEdge);
  std::vector<std::int32_t> queue{sx};
  prev[sx] = sx;
  for (std::size_t h = 0; h < queue.size() && prev[sy] < 0; ++h)
    for (const auto& [v, e] : adj[queue[h]])
      if (prev[v] < 0) {
        prev[v] = queue[h];
        prev_edge[v] = e;
        queue.push_back(v);
      }
  if (prev[sy] < 0) throw std::runtime_error("cutoff path: endpoints are disconnected");
  std::vector<std::int32_t> vs{sy};
  for (std::int32_t v = sy; v != sx; v = prev[v]) {
    out.links.push_back(prev_edge[v]);
    vs.push_back(prev[v]);
  }
  std::reverse(vs.begin(), vs.end());
  std::reverse(out.links.begin(), out.links.end());
  for (std::int32_t v : vs) out.vertices.push_back({min_site[v], size[v]});
  for (EdgeId e : out.links) out.max_link_label = std::max(out.max_link_label, f.edge_label(e));
  return out;
}

bool paths_coincide(const CutoffPath& a, const CutoffPath& b) {
  return a.vertices == b.vertices && a.links == b.links;
}

}  // namespace mstperc
