#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "mstperc/labels.hpp"
#include "mstperc/lattice.hpp"

namespace mstperc {

/// Open/closed flag per carrier.
using Configuration = std::vector<std::uint8_t>;

Configuration configuration_at(const LabelField& f, double p);

struct ClusterStats {
  SiteId representative = kNoSite;  // smallest site id in the cluster
  int size = 0;                     // vertices, midpoints included
  int open_carriers = 0;
  Box2 box;
  double diameter() const { return box.diameter(); }  // lattice units
};

/// Connected components of the graph restricted to open edges. Every
/// vertex belongs to exactly one cluster (closed regions are singletons).
class ClusterPartition {
 public:
  ClusterPartition(double threshold, std::vector<std::int32_t> cluster_of,
                   std::vector<ClusterStats> clusters)
      : threshold_(threshold),
        cluster_of_(std::move(cluster_of)),
        clusters_(std::move(clusters)) {}

  double threshold() const { return threshold_; }
  std::size_t num_clusters() const { return clusters_.size(); }
  std::int32_t cluster_of(SiteId s) const { return cluster_of_[s]; }
  const std::vector<std::int32_t>& assignment() const { return cluster_of_; }
  const ClusterStats& stats(std::int32_t c) const { return clusters_[c]; }
  const std::vector<ClusterStats>& clusters() const { return clusters_; }
  bool same_cluster(SiteId a, SiteId b) const { return cluster_of_[a] == cluster_of_[b]; }

  std::vector<std::vector<SiteId>> members() const;
  /// Every cluster of *this is contained in one cluster of `coarser`.
  bool refines(const ClusterPartition& coarser) const;
  double max_diameter() const;

 private:
  double threshold_;
  std::vector<std::int32_t> cluster_of_;
  std::vector<ClusterStats> clusters_;
};

ClusterPartition clusters_at(const LabelField& f, double p);
ClusterPartition clusters_of(const LatticeGraph& g, const Configuration& open,
                             double threshold_tag = 0.5);

/// Rectangle in unit-square coordinates; crossings go from the x0 side to
/// the x1 side. A quad covers the lattice columns/rows whose positions fall
/// in [x0,x1] x [y0,y1]; a single row or column is allowed.
struct Quad {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  static Quad whole();
  static Quad from_sites(const LatticeGraph& g, int col0, int row0, int col1, int row1);

  struct IndexRange {
    int col0, col1, row0, row1;
    bool contains(int c, int r) const { return c >= col0 && c <= col1 && r >= row0 && r <= row1; }
  };
  IndexRange index_range(const LatticeGraph& g) const;
  friend bool operator==(const Quad&, const Quad&) = default;
};

bool has_crossing(const LabelField& f, const Quad& q, double p);
bool has_crossing(const LatticeGraph& g, const Configuration& open, const Quad& q);

/// Carriers whose flip changes has_crossing(q).
std::vector<CarrierId> pivotal_sites(const LabelField& f, const Quad& q, double p);
std::vector<CarrierId> pivotal_sites(const LatticeGraph& g, const Configuration& open,
                                     const Quad& q);

// --- near-critical scaling -------------------------------------------------

/// alpha4(eta): probability of the alternating 4-arm event from the lattice
/// scale to macroscopic distance 1.
using Alpha4Function = std::function<double(double eta)>;

/// r(eta) = eta^2 / alpha4(eta, 1) ~ eta^{3/4}. Throws if alpha4 is not positive.
double rate_r(double eta, const Alpha4Function& alpha4);

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo probability of the alternating 4-arm event from L-infinity
/// radius r0 to R around a site, on a box of side 2R+1 of the given kind.
/// R == r0 returns 1. Trials are independent with stream seeds (seed, i).
Estimate estimate_alpha4(const LatticeSpec& spec, int r0, int R, std::int64_t trials,
                         std::uint64_t seed, int threads = 1);

/// alpha4(eta,1) at mesh 1/n: arms from a site to radius n/2. Cached per argument tuple.
double alpha4_at_mesh(LatticeKind kind, int n, std::int64_t trials, std::uint64_t seed);

/// Maps a mesh to its switching rate and lambda levels to thresholds.
class RateModel {
 public:
  static RateModel from_alpha4(Alpha4Function alpha4);
  /// Cached Monte Carlo alpha4_at_mesh.
  static RateModel monte_carlo(LatticeKind kind, std::int64_t trials = 4000,
                               std::uint64_t seed = 0x5eedC0FFEEull);

  double rate(double eta) const { return rate_r(eta, alpha4_); }
  double alpha4(double eta) const { return alpha4_(eta); }

 private:
  explicit RateModel(Alpha4Function a) : alpha4_(std::move(a)) {}
  Alpha4Function alpha4_;
};

/// Threshold p_lambda = clamp(1/2 + lambda * rate, 0, 1).
struct LambdaLevel {
  double lambda = 0.0;
  double eta = 0.0;
  double rate = 0.0;
  double p = 0.5;
};
LambdaLevel lambda_level(double lambda, double eta, double rate);

/// Carriers with the alternating 4-arm event at level p out to L-infinity
/// distance >= eps (unit-square units). Carriers whose annulus leaves the
/// lattice are not important.
std::vector<CarrierId> important_sites(const LabelField& f, double p, double eps);
bool is_important(const LabelField& f, CarrierId c, double p, double eps);
/// Outer radius in lattice steps used for an importance scale eps.
int importance_radius(const LatticeGraph& g, double eps);

struct PivotalMeasure {
  std::int64_t raw_count = 0;
  double rate = 0.0;
  double normalized = 0.0;  // raw_count * rate
};
PivotalMeasure pivotal_measure_estimate(const LabelField& f, const Quad& q, double p,
                                        const RateModel& rates);

}  // namespace mstperc
