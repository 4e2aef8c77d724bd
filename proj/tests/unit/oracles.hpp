#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the lattice description and are only usable on tiny
// inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "mstperc/arms.hpp"
#include "mstperc/labels.hpp"
#include "mstperc/lattice.hpp"
#include "mstperc/percolation.hpp"

namespace oracle {

using namespace mstperc;

// Union-find with rollback for backtracking enumeration.
class RollbackSets {
 public:
  explicit RollbackSets(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }
  void undo() {
    const int b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<int> parent_, size_, history_;
};

/// Every spanning tree of g as a sorted edge list.
inline std::vector<std::vector<EdgeId>> all_spanning_trees(const LatticeGraph& g) {
  const int V = static_cast<int>(g.num_sites());
  const int E = static_cast<int>(g.num_edges());
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> chosen;
  RollbackSets ds(V);
  std::function<void(int)> rec = [&](int e) {
    if (static_cast<int>(chosen.size()) == V - 1) {
      out.push_back(chosen);
      return;
    }
    if (E - e < V - 1 - static_cast<int>(chosen.size())) return;
    if (ds.unite(g.edge(e).a, g.edge(e).b)) {
      chosen.push_back(e);
      rec(e + 1);
      chosen.pop_back();
      ds.undo();
    }
    rec(e + 1);
  };
  rec(0);
  return out;
}

/// Spanning tree of minimum total label.
inline std::vector<EdgeId> brute_min_tree(const LabelField& f,
                                          const std::vector<std::vector<EdgeId>>& trees) {
  long double best = std::numeric_limits<long double>::infinity();
  const std::vector<EdgeId>* arg = nullptr;
  for (const auto& t : trees) {
    long double s = 0;
    for (EdgeId e : t) s += f.edge_label(e);
    if (s < best) {
      best = s;
      arg = &t;
    }
  }
  return *arg;
}

/// For every y: the minimum over simple paths x -> y of the largest label.
inline std::vector<double> brute_minimax_from(const LabelField& f, SiteId x) {
  const LatticeGraph& g = f.graph();
  std::vector<double> best(g.num_sites(), std::numeric_limits<double>::infinity());
  std::vector<char> on(g.num_sites(), 0);
  std::function<void(SiteId, double)> dfs = [&](SiteId u, double mx) {
    best[u] = std::min(best[u], mx);
    on[u] = 1;
    for (EdgeId e : g.incident_edges(u)) {
      const SiteId v = g.other_end(e, u);
      if (!on[v]) dfs(v, std::max(mx, f.edge_label(e)));
    }
    on[u] = 0;
  };
  dfs(x, 0.0);
  return best;
}

/// Left-right crossing by flood fill over the (subdivided) graph using
/// unit-square positions. Edge e is open iff its carrier is open.
inline bool flood_crossing(const LatticeGraph& g, const Configuration& open, const Quad& q) {
  const double tol = 1e-9;
  auto inside = [&](SiteId s) {
    const auto [x, y] = g.position(s);
    return x >= q.x0 - tol && x <= q.x1 + tol && y >= q.y0 - tol && y <= q.y1 + tol;
  };
  std::vector<char> seen(g.num_sites(), 0);
  std::vector<SiteId> stack;
  for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
    // Triangular crossings run between open sites.
    if (g.triangular() && (!g.is_original(s) || !open[s])) continue;
    if (inside(s) && std::abs(g.position(s).first - q.x0) < tol) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const SiteId u = stack.back();
    stack.pop_back();
    if (std::abs(g.position(u).first - q.x1) < tol && g.is_original(u)) return true;
    for (EdgeId e : g.incident_edges(u)) {
      const SiteId v = g.other_end(e, u);
      if (!seen[v] && open[g.carrier_of_edge(e)] && inside(v)) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

inline std::vector<CarrierId> brute_pivotal(const LatticeGraph& g, Configuration open, const Quad& q) {
  const bool base = flood_crossing(g, open, q);
  std::vector<CarrierId> out;
  for (CarrierId c = 0; c < static_cast<CarrierId>(open.size()); ++c) {
    open[c] ^= 1;
    if (flood_crossing(g, open, q) != base) out.push_back(c);
    open[c] ^= 1;
  }
  return out;
}

/// Alternating 4 arms from a bond e to L-infinity distance R (square bond):
/// both endpoints reach the box boundary through open bonds inside the box
/// avoiding e, in different clusters.
inline bool square_edge_four_arm(const LabelField& f, EdgeId e, int R, double p) {
  const LatticeGraph& g = f.graph();
  const SiteId u = g.edge(e).a, v = g.edge(e).b;
  const int c0 = std::min(g.col_of(u), g.col_of(v)), c1 = std::max(g.col_of(u), g.col_of(v));
  const int r0 = std::min(g.row_of(u), g.row_of(v)), r1 = std::max(g.row_of(u), g.row_of(v));
  const int X0 = c0 - R, X1 = c1 + R, Y0 = r0 - R, Y1 = r1 + R;
  auto in_box = [&](SiteId s) {
    return g.col_of(s) >= X0 && g.col_of(s) <= X1 && g.row_of(s) >= Y0 && g.row_of(s) <= Y1;
  };
  auto on_edge = [&](SiteId s) {
    return g.col_of(s) == X0 || g.col_of(s) == X1 || g.row_of(s) == Y0 || g.row_of(s) == Y1;
  };
  auto flood = [&](SiteId s) {
    std::vector<char> seen(g.num_sites(), 0);
    std::vector<SiteId> st{s};
    seen[s] = 1;
    while (!st.empty()) {
      const SiteId a = st.back();
      st.pop_back();
      for (EdgeId b : g.incident_edges(a)) {
        if (b == e || f[b] > p) continue;
        const SiteId w = g.other_end(b, a);
        if (!seen[w] && in_box(w)) {
          seen[w] = 1;
          st.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto su = flood(u);
  if (su[v]) return false;
  const auto sv = flood(v);
  bool bu = false, bv = false;
  for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
    if (!in_box(s) || !on_edge(s)) continue;
    bu = bu || su[s];
    bv = bv || sv[s];
  }
  return bu && bv;
}

/// Alternating 4 arms from site z to distance R (triangular site): at least
/// two distinct open clusters of the annulus 0 < d <= R touch z and reach
/// d = R.
inline bool triangular_site_four_arm(const LabelField& f, SiteId z, int R, double p) {
  const LatticeGraph& g = f.graph();
  const int cz = g.col_of(z), rz = g.row_of(z);
  auto d = [&](SiteId s) { return std::max(std::abs(g.col_of(s) - cz), std::abs(g.row_of(s) - rz)); };
  std::vector<int> comp(g.num_original_sites(), -1);
  std::set<int> reaching;
  int next = 0;
  for (SiteId s : g.original_neighbors(z)) {
    if (f[s] > p || comp[s] >= 0) continue;
    const int id = next++;
    bool far = false;
    std::vector<SiteId> st{s};
    comp[s] = id;
    while (!st.empty()) {
      const SiteId a = st.back();
      st.pop_back();
      far = far || d(a) == R;
      for (SiteId w : g.original_neighbors(a)) {
        if (w == z || comp[w] >= 0 || f[w] > p || d(w) > R) continue;
        comp[w] = id;
        st.push_back(w);
      }
    }
    if (far) reaching.insert(id);
  }
  return reaching.size() >= 2;
}

/// Definition-level arm search on an ArmGeometry: disjoint simple paths,
/// each from a start node to a ring node, whose ring endpoints read the
/// pattern cyclically, with arms of one color that are separated by the
/// other color lying in different clusters. Paths are restricted to induced
/// paths touching the start and ring sets only at their ends, which loses
/// no disjoint family. Returns -1 if the path count exceeds `cap`.
inline int brute_arms(const ArmGeometry& geom, const std::vector<std::uint8_t>& pok,
                      const std::vector<std::uint8_t>& dok, const std::vector<ArmColor>& pattern,
                      std::size_t cap = 50000) {
  const int N = static_cast<int>(geom.size());
  std::vector<int> ring_pos(N, -1);
  for (std::size_t i = 0; i < geom.ring().size(); ++i) ring_pos[geom.ring()[i]] = static_cast<int>(i);
  struct Path {
    ArmColor color;
    int end;
    int cluster;
    std::vector<int> nodes;
  };
  std::vector<Path> paths;
  for (ArmColor color : {ArmColor::Primal, ArmColor::Dual}) {
    const auto& ok = color == ArmColor::Primal ? pok : dok;
    std::vector<int> comp(N, -1);
    for (int s = 0; s < N; ++s) {
      if (!ok[s] || comp[s] >= 0) continue;
      std::vector<int> st{s};
      comp[s] = s;
      while (!st.empty()) {
        const int u = st.back();
        st.pop_back();
        for (int v : geom.adjacent(color, u))
          if (ok[v] && comp[v] < 0) {
            comp[v] = s;
            st.push_back(v);
          }
      }
    }
    std::vector<int> cur;
    std::vector<int> touch(N, 0);  // path nodes equal or adjacent to v
    auto mark = [&](int u, int d) {
      touch[u] += d;
      for (int w : geom.adjacent(color, u)) touch[w] += d;
    };
    std::function<void(int)> dfs = [&](int u) {
      if (paths.size() > cap) return;
      cur.push_back(u);
      if (geom.on_ring(color, u)) {
        paths.push_back({color, ring_pos[u], comp[u], cur});
      } else {
        mark(u, 1);
        for (int v : geom.adjacent(color, u))
          if (ok[v] && touch[v] == 1 && !geom.starts(color, v)) dfs(v);
        mark(u, -1);
      }
      cur.pop_back();
    };
    for (int s = 0; s < N; ++s)
      if (ok[s] && geom.starts(color, s)) dfs(s);
  }
  if (paths.size() > cap) return -1;
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) { return a.end < b.end; });
  const int k = static_cast<int>(pattern.size());
  std::vector<char> used(N, 0);
  std::vector<const Path*> chosen;
  auto prefix_ok = [&]() {
    for (int rot = 0; rot < k; ++rot) {
      bool match = true;
      for (std::size_t t = 0; t < chosen.size() && match; ++t)
        match = chosen[t]->color == pattern[(rot + t) % k];
      if (match) return true;
    }
    return false;
  };
  auto separated = [&](int i, int j) {
    bool inside = false, outside = false;
    for (int t = 0; t < k; ++t) {
      if (chosen[t]->color == chosen[i]->color) continue;
      (t > i && t < j ? inside : outside) = true;
    }
    return inside && outside;
  };
  std::function<bool(std::size_t)> pick = [&](std::size_t from) {
    if (!prefix_ok()) return false;
    if (static_cast<int>(chosen.size()) == k) {
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (chosen[i]->color == chosen[j]->color && chosen[i]->cluster == chosen[j]->cluster &&
              separated(i, j))
            return false;
      return true;
    }
    for (std::size_t i = from; i < paths.size(); ++i) {
      const Path& p = paths[i];
      bool clash = false;
      for (int v : p.nodes) clash = clash || used[v];
      if (clash) continue;
      for (int v : p.nodes) used[v] = 1;
      chosen.push_back(&p);
      const bool ok = pick(i + 1);
      chosen.pop_back();
      for (int v : p.nodes) used[v] = 0;
      if (ok) return true;
    }
    return false;
  };
  return pick(0) ? 1 : 0;
}

}  // namespace oracle
