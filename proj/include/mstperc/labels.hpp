#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mstperc/lattice.hpp"

namespace mstperc {

class Rng;

enum class CarrierKind { PerEdge, PerSite };

/// Uniform(lo, hi), or the union of two disjoint intervals with density
/// proportional to length.
struct Distribution {
  enum class Kind { Uniform, UniformUnion };
  Kind kind = Kind::Uniform;
  double a = 0.0, b = 1.0;  // first interval
  double c = 0.0, d = 0.0;  // second interval (UniformUnion only)

  static Distribution uniform(double lo, double hi);
  static Distribution uniform_union(double a, double b, double c, double d);

  void validate() const;
  double sample(Rng& rng) const;
  double mean() const;
  bool contains(double u) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

/// Half-open box [xmin, xmax) x [ymin, ymax) in unit-square positions.
/// Use bounds past 1 to include the closing edge of the domain.
struct Region {
  double xmin = 0.0, xmax = 2.0;
  double ymin = 0.0, ymax = 2.0;
  bool contains(double x, double y) const {
    return x >= xmin && x < xmax && y >= ymin && y < ymax;
  }
  friend bool operator==(const Region&, const Region&) = default;
};

struct RegionDistributionSpec {
  struct Part {
    Region region;
    Distribution distribution;
    std::string name;
    friend bool operator==(const Part&, const Part&) = default;
  };
  std::vector<Part> parts;

  // Uniform(0,1) on the whole domain.
  static RegionDistributionSpec uniform();
  // Left half x < 1/2: Unif([0,1/5] u [4/5,1]); right half x >= 1/2: Unif[2/5,3/5].
  static RegionDistributionSpec asymmetric_halves();
  // Same two distributions with the sides exchanged.
  static RegionDistributionSpec asymmetric_halves_mirrored();

  friend bool operator==(const RegionDistributionSpec&,
                         const RegionDistributionSpec&) = default;
};

/// One label per carrier, with ties broken by carrier index so every
/// comparison is strict.
class LabelField {
 public:
  LabelField(std::shared_ptr<const LatticeGraph> graph, std::vector<double> values,
             std::uint64_t seed, RegionDistributionSpec source);

  const LatticeGraph& graph() const { return *graph_; }
  const std::shared_ptr<const LatticeGraph>& graph_ptr() const { return graph_; }
  CarrierKind carrier() const {
    return graph_->triangular() ? CarrierKind::PerSite : CarrierKind::PerEdge;
  }
  std::uint64_t seed() const { return seed_; }
  const RegionDistributionSpec& source() const { return source_; }

  std::size_t size() const { return values_.size(); }
  double operator[](CarrierId c) const { return values_[c]; }
  const std::vector<double>& values() const { return values_; }

  double edge_label(EdgeId e) const { return values_[graph_->carrier_of_edge(e)]; }

  // Strict total order on carriers: (label, carrier id).
  bool carrier_less(CarrierId a, CarrierId b) const {
    return values_[a] < values_[b] || (values_[a] == values_[b] && a < b);
  }
  // Strict total order on edges: (label, carrier, edge id).
  bool edge_less(EdgeId a, EdgeId b) const;

  bool carrier_open(CarrierId c, double p) const { return values_[c] <= p; }
  bool edge_open(EdgeId e, double p) const { return edge_label(e) <= p; }

  /// Edge ids sorted by edge_less.
  std::vector<EdgeId> sorted_edges() const;

  friend bool operator==(const LabelField& a, const LabelField& b) {
    return a.graph_->spec() == b.graph_->spec() && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const LatticeGraph> graph_;
  std::vector<double> values_;
  std::uint64_t seed_;
  RegionDistributionSpec source_;
};

LabelField sample_uniform(std::shared_ptr<const LatticeGraph> g, std::uint64_t seed);

/// Each carrier draws from the distribution of the region containing its
/// position (edge midpoint for SquareBond, site for TriangularSite).
/// Throws if a carrier is covered by zero or several regions.
LabelField sample_regional(std::shared_ptr<const LatticeGraph> g,
                           const RegionDistributionSpec& spec, std::uint64_t seed);

/// Apply a strictly increasing map pointwise. Throws std::invalid_argument
/// if the map breaks the rank order of the existing labels.
LabelField relabel_monotone(const LabelField& f, const std::function<double(double)>& map);

/// Field with explicit values (tests, file loading).
LabelField make_field(std::shared_ptr<const LatticeGraph> g, std::vector<double> values,
                      std::uint64_t seed = 0,
                      RegionDistributionSpec source = RegionDistributionSpec::uniform());

/// Labels transported by the reflection x -> 1 - x. SquareBond only.
LabelField mirror_field(const LabelField& f);

/// True iff no two labels are equal (before tie-breaking).
bool labels_distinct(const LabelField& f);

}  // namespace mstperc
