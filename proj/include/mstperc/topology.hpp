#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mstperc/arms.hpp"
#include "mstperc/forest.hpp"

namespace mstperc {

/// degree -> number of sites. With `original_only`, triangular midpoints
/// are skipped.
std::map<int, std::int64_t> degree_histogram(const SpanningForest& t, bool original_only = false);

struct BranchPointReport {
  SiteId site = kNoSite;
  int degree = 0;  // branches of L-infinity diameter >= delta
  double delta = 0.0;
};

/// Sites whose removal leaves at least k_min components of L-infinity
/// diameter >= delta (unit-square units). Requires a spanning tree.
std::vector<BranchPointReport> macroscopic_branch_points(const SpanningForest& t, double delta,
                                                         int k_min);

/// Largest Hausdorff distance (L-infinity, unit-square units) between the
/// vertex sets of two paths on the same lattice.
double hausdorff_distance(const LatticeGraph& g, const MinimaxPath& a, const MinimaxPath& b);

enum class ProbeMode {
  Jitter,    // perturb every label by less than half the smallest gap
  Resample,  // independent field from the same label law
};

struct PathProbe {
  bool identical = false;
  double hausdorff = 0.0;
};

/// Compare the MST path x-y in f with the one in a perturbed field. For
/// Jitter, rho in (0,1) scales the perturbation relative to half the
/// smallest label gap.
PathProbe path_uniqueness_probe(const LabelField& f, SiteId x, SiteId y, ProbeMode mode,
                                double rho, std::uint64_t seed);

struct TouchPointCandidate {
  SiteId site = kNoSite;          // where the path comes back
  std::int32_t first_visit = 0;   // index into path.sites
  std::int32_t second_visit = 0;
  int separation = 0;             // L-infinity distance of the visits, lattice steps
  double excursion = 0.0;         // diameter of the loop between them, unit-square units
  bool annulus_fits = false;
  bool six_arm = false;
};

/// Places where the path returns within `radius` lattice steps of itself
/// after an excursion of diameter >= `excursion`. Candidates closer than
/// 2*radius to an earlier one are merged. Each candidate is tested for the
/// touch-point pattern on the annulus radius < d <= excursion*(n-1)
/// around it.
std::vector<TouchPointCandidate> near_touch_points(const LabelField& f, const MinimaxPath& path,
                                                   int radius, double excursion,
                                                   ArmLevels levels);

/// One tree sample summarised for the topology trend checks.
struct TopologySpec {
  LatticeSpec lattice{LatticeKind::TriangularSite, 32};
  double delta = 0.125;
  int k_min = 5;
  int touch_radius = 2;
  double excursion = 0.125;
  double lambda = 2.0;  // levels 1/2 -+ lambda * rate for the touch test
  std::int64_t trials = 200;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TopologyRecord {
  std::int64_t index = 0;
  double leaf_fraction = 0.0;  // among original sites
  int max_degree = 0;
  std::int64_t branch_points = 0;
  std::int64_t touch_candidates = 0;
  std::int64_t six_arm_touches = 0;
};

/// Path for the touch test joins the midpoints of the left and right sides.
TopologyRecord topology_trial(const TopologySpec& spec, const std::shared_ptr<const LatticeGraph>& g,
                              double rate, std::int64_t index);
std::vector<TopologyRecord> topology_experiment(const TopologySpec& spec, double rate);

}  // namespace mstperc
