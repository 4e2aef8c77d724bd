#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mstperc/labels.hpp"
#include "mstperc/lattice.hpp"

namespace mstperc {

enum class ArmColor : std::uint8_t { Primal, Dual };

/// Arms are centred on a lattice site, or on a bond (SquareBond only).
struct ArmCenter {
  enum class Kind { Site, Edge };
  Kind kind = Kind::Site;
  std::int32_t id = 0;

  static ArmCenter site(SiteId s) { return {Kind::Site, s}; }
  static ArmCenter edge(EdgeId e) { return {Kind::Edge, e}; }
};

/// Disjoint crossings of the L-infinity annulus r0 < d <= R around the
/// centre, in the given ccw cyclic color order.
struct ArmEvent {
  ArmCenter center;
  int inner_radius = 0;
  int outer_radius = 1;
  std::vector<ArmColor> pattern;

  static std::vector<ArmColor> alternating_four();
  /// Two primal pairs separated by dual arms: the touch-point obstruction.
  static std::vector<ArmColor> six_arm_touch();
};

/// Primal arms use carriers with label <= primal; dual arms use carriers
/// with label > dual.
struct ArmLevels {
  double primal = 0.5;
  double dual = 0.5;
  static ArmLevels single(double p) { return {p, p}; }
};

/// Precomputed annulus structure around one centre. Labels enter only in
/// `holds`, so the same geometry serves many samples.
///
/// TriangularSite: nodes are original sites; both colors use the site
/// adjacency (the lattice is self-matching).
/// SquareBond: nodes are bonds. Primal arms step between bonds sharing a
/// vertex; dual arms step between bonds on a common face, i.e. along the
/// dual lattice.
class ArmGeometry {
 public:
  ArmGeometry(const LatticeGraph& g, ArmCenter center, int r0, int R);

  /// True iff the radius-R box around the centre lies inside the lattice.
  static bool fits(const LatticeGraph& g, ArmCenter center, int R);

  std::size_t size() const { return carrier_.size(); }
  CarrierId carrier(int node) const { return carrier_[node]; }
  std::span<const int> adjacent(ArmColor color, int node) const;
  bool starts(ArmColor color, int node) const;
  bool on_ring(ArmColor color, int node) const;
  /// Ring nodes in ccw order around the outer boundary.
  std::span<const int> ring() const { return ring_; }

  /// Evaluate with labels indexed by carrier id (a LabelField's values).
  bool holds(std::span<const double> labels, ArmLevels levels,
             std::span<const ArmColor> pattern) const;

  /// Evaluate for disjoint color classes given per node.
  bool holds_colored(std::span<const std::uint8_t> primal_ok,
                     std::span<const std::uint8_t> dual_ok,
                     std::span<const ArmColor> pattern) const;

 private:
  struct Csr {
    std::vector<int> offset;
    std::vector<int> target;
  };
  static Csr to_csr(std::vector<std::vector<int>>& lists);

  int max_flow(const std::vector<int>& members, ArmColor color,
               std::span<const std::uint8_t> ok, int limit) const;

  std::vector<CarrierId> carrier_;
  Csr adj_[2];
  std::vector<std::uint8_t> start_[2];
  std::vector<std::uint8_t> ring_flag_[2];
  std::vector<int> ring_;
};

/// Throws std::out_of_range if the annulus leaves the lattice and
/// std::invalid_argument for malformed events.
bool arm_event_holds(const LabelField& f, const ArmEvent& a, ArmLevels levels);

}  // namespace mstperc
