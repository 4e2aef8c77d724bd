#include "mstperc/labels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mstperc/rng.hpp"

namespace mstperc {

Distribution Distribution::uniform(double lo, double hi) {
  Distribution d;
  d.kind = Kind::Uniform;
  d.a = lo;
  d.b = hi;
  d.validate();
  return d;
}

Distribution Distribution::uniform_union(double a, double b, double c, double d) {
  Distribution r;
  r.kind = Kind::UniformUnion;
  r.a = a;
  r.b = b;
  r.c = c;
  r.d = d;
  r.validate();
  return r;
}

void Distribution::validate() const {
  auto check = [](double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
      throw std::invalid_argument("distribution support must be a proper interval in [0,1]");
  };
  check(a, b);
  if (kind == Kind::UniformUnion) {
    check(c, d);
    if (c < b) throw std::invalid_argument("union intervals must be ordered and disjoint");
  }
}

double Distribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (kind == Kind::Uniform) return a + (b - a) * u;
  const double l1 = b - a, l2 = d - c;
  const double t = u * (l1 + l2);
  return t < l1 ? a + t : c + (t - l1);
}

double Distribution::mean() const {
  if (kind == Kind::Uniform) return 0.5 * (a + b);
  const double l1 = b - a, l2 = d - c;
  return (l1 * 0.5 * (a + b) + l2 * 0.5 * (c + d)) / (l1 + l2);
}

bool Distribution::contains(double u) const {
  if (u >= a && u <= b) return true;
  return kind == Kind::UniformUnion && u >= c && u <= d;
}

RegionDistributionSpec RegionDistributionSpec::uniform() {
  return {{{Region{}, Distribution::uniform(0.0, 1.0), "all"}}};
}

RegionDistributionSpec RegionDistributionSpec::asymmetric_halves() {
  return {{{Region{0.0, 0.5, 0.0, 2.0}, Distribution::uniform_union(0.0, 0.2, 0.8, 1.0), "left"},
           {Region{0.5, 2.0, 0.0, 2.0}, Distribution::uniform(0.4, 0.6), "right"}}};
}

RegionDistributionSpec RegionDistributionSpec::asymmetric_halves_mirrored() {
  return {{{Region{0.0, 0.5, 0.0, 2.0}, Distribution::uniform(0.4, 0.6), "left"},
           {Region{0.5, 2.0, 0.0, 2.0}, Distribution::uniform_union(0.0, 0.2, 0.8, 1.0), "right"}}};
}

LabelField::LabelField(std::shared_ptr<const LatticeGraph> graph, std::vector<double> values,
                       std::uint64_t seed, RegionDistributionSpec source)
    : graph_(std::move(graph)), values_(std::move(values)), seed_(seed), source_(std::move(source)) {
  if (!graph_) throw std::invalid_argument("label field needs a lattice");
  if (values_.size() != graph_->num_carriers())
    throw std::invalid_argument("label count does not match carrier count");
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("labels must lie in [0,1]");
}

bool LabelField::edge_less(EdgeId a, EdgeId b) const {
  const CarrierId ca = graph_->carrier_of_edge(a), cb = graph_->carrier_of_edge(b);
  if (ca != cb) return carrier_less(ca, cb);
  return a < b;
}

std::vector<EdgeId> LabelField::sorted_edges() const {
  std::vector<EdgeId> order(graph_->num_edges());
  std::iota(order.begin(), order.end(), 0);
  // Sort on a packed key; much faster than calling edge_less through the graph.
  std::vector<std::pair<double, std::int64_t>> keys(order.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(order.size()); ++e) {
    const CarrierId c = graph_->carrier_of_edge(e);
    keys[e] = {values_[c], (static_cast<std::int64_t>(c) << 32) | static_cast<std::uint32_t>(e)};
  }
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return keys[a] < keys[b]; });
  return order;
}

LabelField sample_uniform(std::shared_ptr<const LatticeGraph> g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(g->num_carriers());
  for (double& x : v) x = rng.uniform();
  return LabelField(std::move(g), std::move(v), seed, RegionDistributionSpec::uniform());
}

LabelField sample_regional(std::shared_ptr<const LatticeGraph> g,
                           const RegionDistributionSpec& spec, std::uint64_t seed) {
  if (spec.parts.empty()) throw std::invalid_argument("region spec has no parts");
  for (const auto& part : spec.parts) part.distribution.validate();
  const std::size_t nc = g->num_carriers();
  // Resolve regions first so a bad spec fails before any sampling.
  std::vector<std::uint8_t> which(nc);
  const double k = g->unit_per_half_step();
  for (CarrierId c = 0; c < static_cast<CarrierId>(nc); ++c) {
    const Coord2 p = g->carrier_coord2(c);
    const double x = p.x * k, y = p.y * k;
    int hit = -1;
    for (std::size_t i = 0; i < spec.parts.size(); ++i) {
      if (!spec.parts[i].region.contains(x, y)) continue;
      if (hit >= 0) throw std::invalid_argument("label regions overlap");
      hit = static_cast<int>(i);
    }
    if (hit < 0) throw std::invalid_argument("label regions leave a carrier uncovered");
    which[c] = static_cast<std::uint8_t>(hit);
  }
  Rng rng(seed);
  std::vector<double> v(nc);
  for (std::size_t c = 0; c < nc; ++c) v[c] = spec.parts[which[c]].distribution.sample(rng);
  return LabelField(std::move(g), std::move(v), seed, spec);
}

LabelField relabel_monotone(const LabelField& f, const std::function<double(double)>& map) {
  const std::size_t nc = f.size();
  std::vector<CarrierId> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](CarrierId a, CarrierId b) { return f.carrier_less(a, b); });
  std::vector<double> v(nc);
  for (std::size_t c = 0; c < nc; ++c) v[c] = map(f[static_cast<CarrierId>(c)]);
  for (std::size_t i = 1; i < nc; ++i) {
    const CarrierId a = order[i - 1], b = order[i];
    const bool was_strict = f[a] < f[b];
    if (v[a] > v[b] || (was_strict && v[a] == v[b]))
      throw std::invalid_argument("relabel map is not strictly increasing on the field's labels");
  }
  return LabelField(f.graph_ptr(), std::move(v), f.seed(), f.source());
}

LabelField make_field(std::shared_ptr<const LatticeGraph> g, std::vector<double> values,
                      std::uint64_t seed, RegionDistributionSpec source) {
  return LabelField(std::move(g), std::move(values), seed, std::move(source));
}

LabelField mirror_field(const LabelField& f) {
  const LatticeGraph& g = f.graph();
  if (g.triangular())
    throw std::invalid_argument("mirror_field: the sheared triangular lattice has no vertical mirror");
  std::vector<double> v(f.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) v[g.mirror_edge(e)] = f[e];
  return LabelField(f.graph_ptr(), std::move(v), f.seed(), f.source());
}

bool labels_distinct(const LabelField& f) {
  std::vector<double> v = f.values();
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace mstperc
