#include "mstperc/arms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

namespace mstperc {

std::vector<ArmColor> ArmEvent::alternating_four() {
  return {ArmColor::Primal, ArmColor::Dual, ArmColor::Primal, ArmColor::Dual};
}

std::vector<ArmColor> ArmEvent::six_arm_touch() {
  return {ArmColor::Primal, ArmColor::Primal, ArmColor::Dual,
          ArmColor::Primal, ArmColor::Primal, ArmColor::Dual};
}

namespace {

constexpr int kP = 0;
constexpr int kD = 1;

int color_index(ArmColor c) { return c == ArmColor::Primal ? kP : kD; }

// Bounding box of the centre in site index coordinates.
struct CenterBox {
  int c0, c1, r0, r1;
  int distance(int c, int r) const {
    const int dx = c < c0 ? c0 - c : (c > c1 ? c - c1 : 0);
    const int dy = r < r0 ? r0 - r : (r > r1 ? r - r1 : 0);
    return std::max(dx, dy);
  }
};

CenterBox center_box(const LatticeGraph& g, ArmCenter center) {
  if (center.kind == ArmCenter::Kind::Site) {
    if (center.id < 0 || !g.is_original(center.id))
      throw std::invalid_argument("arm centre must be an original lattice site");
    const int c = g.col_of(center.id), r = g.row_of(center.id);
    return {c, c, r, r};
  }
  if (g.triangular())
    throw std::invalid_argument("bond-centred arm events need a SquareBond lattice");
  if (center.id < 0 || static_cast<std::size_t>(center.id) >= g.num_edges())
    throw std::invalid_argument("arm centre edge out of range");
  const Edge& e = g.edge(center.id);
  const int ca = g.col_of(e.a), cb = g.col_of(e.b);
  const int ra = g.row_of(e.a), rb = g.row_of(e.b);
  return {std::min(ca, cb), std::max(ca, cb), std::min(ra, rb), std::max(ra, rb)};
}

void link_all(std::vector<std::vector<int>>& adj, const int* nodes, int count) {
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      if (i != j) adj[nodes[i]].push_back(nodes[j]);
}

}  // namespace

bool ArmGeometry::fits(const LatticeGraph& g, ArmCenter center, int R) {
  const CenterBox b = center_box(g, center);
  return b.c0 - R >= 0 && b.r0 - R >= 0 && b.c1 + R <= g.n() - 1 && b.r1 + R <= g.n() - 1;
}

ArmGeometry::Csr ArmGeometry::to_csr(std::vector<std::vector<int>>& lists) {
  Csr out;
  out.offset.assign(lists.size() + 1, 0);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    auto& l = lists[i];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    out.offset[i + 1] = out.offset[i] + static_cast<int>(l.size());
  }
  out.target.reserve(out.offset.back());
  for (const auto& l : lists) out.target.insert(out.target.end(), l.begin(), l.end());
  return out;
}

ArmGeometry::ArmGeometry(const LatticeGraph& g, ArmCenter center, int r0, int R) {
  if (r0 < 0 || R <= r0) throw std::invalid_argument("arm annulus needs 0 <= r0 < R");
  if (!fits(g, center, R)) throw std::out_of_range("arm annulus exceeds the lattice");
  const CenterBox cb = center_box(g, center);
  const int X0 = cb.c0 - R, X1 = cb.c1 + R, Y0 = cb.r0 - R, Y1 = cb.r1 + R;
  const int W = X1 - X0 + 1, H = Y1 - Y0 + 1;

  // Boundary vertices of the box, ccw starting at the lower-left corner.
  std::vector<std::pair<int, int>> boundary;
  for (int c = X0; c <= X1; ++c) boundary.push_back({c, Y0});
  for (int r = Y0 + 1; r <= Y1; ++r) boundary.push_back({X1, r});
  for (int c = X1 - 1; c >= X0; --c) boundary.push_back({c, Y1});
  for (int r = Y1 - 1; r > Y0; --r) boundary.push_back({X0, r});

  std::vector<std::vector<int>> lists[2];

  if (g.triangular()) {
    std::vector<int> node_at(static_cast<std::size_t>(W) * H, -1);
    auto local = [&](int c, int r) { return static_cast<std::size_t>(r - Y0) * W + (c - X0); };
    for (int r = Y0; r <= Y1; ++r)
      for (int c = X0; c <= X1; ++c)
        if (cb.distance(c, r) > r0) {
          node_at[local(c, r)] = static_cast<int>(carrier_.size());
          carrier_.push_back(g.site_at(c, r));
        }
    const std::size_t N = carrier_.size();
    lists[kP].resize(N);
    start_[kP].assign(N, 0);
    for (std::size_t k = 0; k < N; ++k) {
      for (SiteId t : g.original_neighbors(carrier_[k])) {
        const int c = g.col_of(t), r = g.row_of(t);
        if (c < X0 || c > X1 || r < Y0 || r > Y1) continue;
        if (cb.distance(c, r) <= r0) {
          start_[kP][k] = 1;
          continue;
        }
        lists[kP][k].push_back(node_at[local(c, r)]);
      }
    }
    adj_[kP] = to_csr(lists[kP]);
    adj_[kD] = adj_[kP];
    start_[kD] = start_[kP];
    ring_flag_[kP].assign(N, 0);
    for (const auto& [c, r] : boundary) {
      const int k = node_at[local(c, r)];
      ring_.push_back(k);
      ring_flag_[kP][k] = 1;
    }
    ring_flag_[kD] = ring_flag_[kP];
    return;
  }

  // SquareBond: nodes are bonds, indexed by midpoint in a local doubled grid.
  const int W2 = 2 * W - 1, H2 = 2 * H - 1;
  std::vector<int> node_at(static_cast<std::size_t>(W2) * H2, -1);
  auto local2 = [&](int x2, int y2) {
    return static_cast<std::size_t>(y2 - 2 * Y0) * W2 + (x2 - 2 * X0);
  };
  auto inner = [&](int c, int r) { return cb.distance(c, r) <= r0; };
  auto bond = [&](int ca, int ra, int cb2, int rb) {
    return node_at[local2(ca + cb2, ra + rb)];
  };
  for (int r = Y0; r <= Y1; ++r) {
    for (int c = X0; c <= X1; ++c) {
      const int nbr[2][2] = {{c + 1, r}, {c, r + 1}};
      for (const auto& q : nbr) {
        if (q[0] > X1 || q[1] > Y1) continue;
        if (inner(c, r) && inner(q[0], q[1])) continue;
        const CarrierId e = g.carrier_at_coord2({c + q[0], r + q[1]});
        node_at[local2(c + q[0], r + q[1])] = static_cast<int>(carrier_.size());
        carrier_.push_back(e);
      }
    }
  }
  const std::size_t N = carrier_.size();
  lists[kP].resize(N);
  lists[kD].resize(N);
  start_[kP].assign(N, 0);
  start_[kD].assign(N, 0);

  // Primal: bonds sharing a vertex.
  for (int r = Y0; r <= Y1; ++r) {
    for (int c = X0; c <= X1; ++c) {
      int nodes[4];
      int cnt = 0;
      const int nbr[4][2] = {{c + 1, r}, {c - 1, r}, {c, r + 1}, {c, r - 1}};
      for (const auto& q : nbr) {
        if (q[0] < X0 || q[0] > X1 || q[1] < Y0 || q[1] > Y1) continue;
        const int k = bond(c, r, q[0], q[1]);
        if (k < 0) continue;
        nodes[cnt++] = k;
        if (inner(c, r)) start_[kP][k] = 1;
      }
      link_all(lists[kP], nodes, cnt);
    }
  }
  // Dual: bonds on a common face.
  for (int r = Y0; r < Y1; ++r) {
    for (int c = X0; c < X1; ++c) {
      const bool touches_inner =
          inner(c, r) || inner(c + 1, r) || inner(c, r + 1) || inner(c + 1, r + 1);
      const int sides[4] = {bond(c, r, c + 1, r), bond(c, r + 1, c + 1, r + 1),
                            bond(c, r, c, r + 1), bond(c + 1, r, c + 1, r + 1)};
      int nodes[4];
      int cnt = 0;
      for (int k : sides) {
        if (k < 0) continue;
        nodes[cnt++] = k;
        if (touches_inner) start_[kD][k] = 1;
      }
      link_all(lists[kD], nodes, cnt);
    }
  }
  adj_[kP] = to_csr(lists[kP]);
  adj_[kD] = to_csr(lists[kD]);

  // Ring: the radial bond into each non-corner boundary vertex (primal only),
  // then the boundary bond to the next vertex (both colors; a dual arm
  // through it reaches the outer face).
  ring_flag_[kP].assign(N, 0);
  ring_flag_[kD].assign(N, 0);
  const std::size_t m = boundary.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto [c, r] = boundary[i];
    const bool corner = (c == X0 || c == X1) && (r == Y0 || r == Y1);
    if (!corner) {
      int ic = c, ir = r;
      if (r == Y0)
        ir = r + 1;
      else if (r == Y1)
        ir = r - 1;
      else if (c == X0)
        ic = c + 1;
      else
        ic = c - 1;
      const int k = bond(c, r, ic, ir);
      if (k >= 0) {
        ring_.push_back(k);
        ring_flag_[kP][k] = 1;
      }
    }
    const auto [nc, nr] = boundary[(i + 1) % m];
    const int k = bond(c, r, nc, nr);
    ring_.push_back(k);
    ring_flag_[kP][k] = 1;
    ring_flag_[kD][k] = 1;
  }
}

std::span<const int> ArmGeometry::adjacent(ArmColor color, int node) const {
  const Csr& a = adj_[color_index(color)];
  return {a.target.data() + a.offset[node],
          static_cast<std::size_t>(a.offset[node + 1] - a.offset[node])};
}

bool ArmGeometry::starts(ArmColor color, int node) const {
  return start_[color_index(color)][node] != 0;
}

bool ArmGeometry::on_ring(ArmColor color, int node) const {
  return ring_flag_[color_index(color)][node] != 0;
}

int ArmGeometry::max_flow(const std::vector<int>& members, ArmColor color,
                          std::span<const std::uint8_t> ok, int limit) const {
  // Vertex-disjoint start->ring paths inside one cluster, by node splitting.
  const int ci = color_index(color);
  const int M = static_cast<int>(members.size());
  std::vector<int> local(carrier_.size(), -1);
  for (int i = 0; i < M; ++i) local[members[i]] = i;
  const int S = 2 * M, T = 2 * M + 1;
  struct Arc {
    int to, cap, next;
  };
  std::vector<Arc> arcs;
  std::vector<int> head(2 * M + 2, -1);
  auto add = [&](int u, int v) {
    arcs.push_back({v, 1, head[u]});
    head[u] = static_cast<int>(arcs.size()) - 1;
    arcs.push_back({u, 0, head[v]});
    head[v] = static_cast<int>(arcs.size()) - 1;
  };
  for (int i = 0; i < M; ++i) {
    const int k = members[i];
    add(2 * i, 2 * i + 1);
    if (start_[ci][k]) add(S, 2 * i);
    if (ring_flag_[ci][k]) add(2 * i + 1, T);
    for (int t : adjacent(color, k))
      if (ok[t] && local[t] >= 0) add(2 * i + 1, 2 * local[t]);
  }
  int flow = 0;
  std::vector<int> via(2 * M + 2);
  while (flow < limit) {
    std::fill(via.begin(), via.end(), -1);
    std::queue<int> q;
    q.push(S);
    via[S] = -2;
    while (!q.empty() && via[T] == -1) {
      const int u = q.front();
      q.pop();
      for (int a = head[u]; a >= 0; a = arcs[a].next) {
        if (arcs[a].cap > 0 && via[arcs[a].to] == -1) {
          via[arcs[a].to] = a;
          q.push(arcs[a].to);
        }
      }
    }
    if (via[T] == -1) break;
    for (int v = T; v != S;) {
      const int a = via[v];
      arcs[a].cap -= 1;
      arcs[a ^ 1].cap += 1;
      v = arcs[a ^ 1].to;
    }
    ++flow;
  }
  return flow;
}

bool ArmGeometry::holds_colored(std::span<const std::uint8_t> primal_ok,
                                std::span<const std::uint8_t> dual_ok,
                                std::span<const ArmColor> pattern) const {
  if (pattern.empty()) return true;
  const int N = static_cast<int>(carrier_.size());
  std::span<const std::uint8_t> ok[2] = {primal_ok, dual_ok};

  // Clusters of each color inside the annulus, and which of them cross it.
  std::vector<int> cluster[2];
  std::vector<std::vector<int>> members[2];
  std::vector<std::uint8_t> crossing[2];
  for (int ci = 0; ci < 2; ++ci) {
    const ArmColor color = ci == kP ? ArmColor::Primal : ArmColor::Dual;
    cluster[ci].assign(N, -1);
    std::vector<int> stack;
    for (int k = 0; k < N; ++k) {
      if (!ok[ci][k] || cluster[ci][k] >= 0) continue;
      const int id = static_cast<int>(members[ci].size());
      members[ci].emplace_back();
      bool s = false, t = false;
      stack.push_back(k);
      cluster[ci][k] = id;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        members[ci][id].push_back(u);
        s = s || start_[ci][u];
        t = t || ring_flag_[ci][u];
        for (int v : adjacent(color, u)) {
          if (ok[ci][v] && cluster[ci][v] < 0) {
            cluster[ci][v] = id;
            stack.push_back(v);
          }
        }
      }
      crossing[ci].push_back(s && t ? 1 : 0);
    }
  }

  // Runs of crossing clusters along the outer ring. A cluster may appear in
  // several runs when it wraps around a start region.
  std::vector<std::pair<int, int>> seq;
  for (int k : ring_) {
    for (int ci = 0; ci < 2; ++ci) {
      if (!ok[ci][k] || !ring_flag_[ci][k]) continue;
      const int id = cluster[ci][k];
      if (!crossing[ci][id]) continue;
      if (seq.empty() || seq.back() != std::pair{ci, id}) seq.push_back({ci, id});
    }
  }
  while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
  const int m = static_cast<int>(seq.size());
  if (m == 0) return false;

  const int k = static_cast<int>(pattern.size());
  int need[2] = {0, 0};
  for (ArmColor c : pattern) ++need[color_index(c)];
  int have[2] = {0, 0};
  for (const auto& e : seq) ++have[e.first];
  if ((need[kP] > 0 && have[kP] == 0) || (need[kD] > 0 && have[kD] == 0)) return false;

  // Longest cyclic run of one color bounds the capacity ever needed.
  int run_max = 1;
  for (int i = 0; i < k; ++i) {
    int len = 1;
    while (len < k && pattern[(i + len) % k] == pattern[i]) ++len;
    run_max = std::max(run_max, len);
  }
  std::map<std::pair<int, int>, int> cap;
  auto capacity = [&](std::pair<int, int> c) {
    auto it = cap.find(c);
    if (it == cap.end()) {
      const int v = run_max == 1 ? 1
                                 : max_flow(members[c.first][c.second],
                                            c.first == kP ? ArmColor::Primal : ArmColor::Dual,
                                            ok[c.first], run_max);
      it = cap.emplace(c, v).first;
    }
    return it->second;
  };

  // Arms map to runs monotonically around the ring. Arms of one color that
  // are separated by the other color must lie in different clusters.
  std::vector<int> block(k);
  std::map<std::pair<int, int>, int> used, owner;
  std::vector<ArmColor> rotated(k);
  int s = 0;
  std::function<bool(int, int)> place = [&](int t, int j) {
    if (t == k) return true;
    const int ci = color_index(rotated[t]);
    for (int jj = j; jj < m; ++jj) {
      const auto c = seq[(s + jj) % m];
      if (c.first != ci) continue;
      auto o = owner.find(c);
      if (o != owner.end() && o->second != block[t]) continue;
      if (used[c] >= capacity(c)) continue;
      ++used[c];
      const bool fresh = o == owner.end();
      if (fresh) owner[c] = block[t];
      const bool ok_rest = place(t + 1, jj);
      if (fresh) owner.erase(c);
      --used[c];
      if (ok_rest) return true;
    }
    return false;
  };
  for (int rot = 0; rot < k; ++rot) {
    for (int t = 0; t < k; ++t) rotated[t] = pattern[(rot + t) % k];
    int b = 0;
    for (int t = 0; t < k; ++t) {
      if (t > 0 && rotated[t] != rotated[t - 1]) ++b;
      block[t] = b;
    }
    if (b > 0 && rotated[k - 1] == rotated[0])
      for (int t = k - 1; t >= 0 && block[t] == b; --t) block[t] = 0;
    for (s = 0; s < m; ++s)
      if (place(0, 0)) return true;
  }
  return false;
}

bool ArmGeometry::holds(std::span<const double> labels, ArmLevels levels,
                        std::span<const ArmColor> pattern) const {
  const std::size_t N = carrier_.size();
  std::vector<std::uint8_t> pok(N), dok(N);
  if (levels.dual >= levels.primal) {
    for (std::size_t k = 0; k < N; ++k) {
      const double u = labels[carrier_[k]];
      pok[k] = u <= levels.primal;
      dok[k] = u > levels.dual;
    }
    return holds_colored(pok, dok, pattern);
  }
  // Overlapping windows: carriers in (dual, primal] could serve either
  // color. Certify the event through a single split level q in
  // [dual, primal], which yields disjoint arms of the required colors.
  std::vector<double> splits{levels.dual};
  for (std::size_t k = 0; k < N; ++k) {
    const double u = labels[carrier_[k]];
    if (u > levels.dual && u <= levels.primal) splits.push_back(u);
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  for (double q : splits) {
    for (std::size_t k = 0; k < N; ++k) {
      const double u = labels[carrier_[k]];
      pok[k] = u <= q;
      dok[k] = u > q;
    }
    if (holds_colored(pok, dok, pattern)) return true;
  }
  return false;
}

bool arm_event_holds(const LabelField& f, const ArmEvent& a, ArmLevels levels) {
  if (a.pattern.size() != 4 && a.pattern.size() != 6)
    throw std::invalid_argument("arm pattern length must be 4 or 6");
  ArmGeometry geom(f.graph(), a.center, a.inner_radius, a.outer_radius);
  return geom.holds(f.values(), levels, a.pattern);
}

}  // namespace mstperc
