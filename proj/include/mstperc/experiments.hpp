#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mstperc/forest.hpp"
#include "mstperc/labels.hpp"
#include "mstperc/stats.hpp"

namespace mstperc {

/// Where the MST path starts and ends.
enum class EndpointReading {
  MidlineEnds,  // top and bottom ends of the vertical midline
  Custom,       // explicit (col, row) pairs
};

/// The asymmetric-square experiment. `n` is the side length in lattice
/// steps, so the lattice has n+1 sites per side and the midline is the
/// column n/2; n must be even.
struct AsymmetrySpec {
  LatticeKind kind = LatticeKind::SquareBond;
  int n = 256;
  double eps = 1.0 / 16.0;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  RegionDistributionSpec labels = RegionDistributionSpec::asymmetric_halves();
  bool invasion = false;  // use the invasion tree from x stopped at y
  EndpointReading endpoints = EndpointReading::MidlineEnds;
  int x_col = 0, x_row = 0, y_col = 0, y_row = 0;  // Custom only
  int threads = 1;

  LatticeSpec lattice() const { return {kind, n + 1}; }
  SiteId x_site(const LatticeGraph& g) const;
  SiteId y_site(const LatticeGraph& g) const;
  /// Throws std::invalid_argument for a degenerate spec.
  void validate() const;
  static AsymmetrySpec baseline_of(const AsymmetrySpec& s);
};

struct AsymmetryTrialRecord {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;

  std::vector<SiteId> path;  // trimmed segment, x side first
  std::int64_t path_length = 0;  // edges in the segment
  std::int64_t left_edges = 0;
  std::int64_t right_edges = 0;
  std::int64_t midline_edges = 0;  // counted half to each side
  double left_fraction = 0.0;
  double right_fraction = 0.0;
  bool contained_left = false;
  bool contained_right = false;
  std::int64_t midline_crossings = 0;
  std::int64_t segments = 1;  // passages from the x neighbourhood to the y one
  std::int64_t invaded_left = 0;   // invasion only
  std::int64_t invaded_right = 0;
};

/// Replays trial `index` from (spec, index). Errors other than a degenerate
/// spec are reported through `failed`.
AsymmetryTrialRecord asymmetry_trial(const AsymmetrySpec& spec,
                                     const std::shared_ptr<const LatticeGraph>& g,
                                     std::int64_t index);
AsymmetryTrialRecord asymmetry_trial(const AsymmetrySpec& spec, std::int64_t index);
AsymmetryTrialRecord invasion_asymmetry_trial(const AsymmetrySpec& spec, std::int64_t index);

/// Path statistics of a given x-y path (helper shared by both trial kinds).
AsymmetryTrialRecord path_side_statistics(const LatticeGraph& g, const MinimaxPath& path,
                                          SiteId x, SiteId y, double eps_steps);

struct ArmSummary {
  std::int64_t completed = 0;
  std::int64_t failures = 0;
  std::int64_t multiple_segments = 0;
  Summary left_fraction;
  Summary right_fraction;
  Summary right_minus_left;
  Summary midline_crossings;
  Summary path_length;
  Proportion contained_left;
  Proportion contained_right;
};

ArmSummary summarize_records(const std::vector<AsymmetryTrialRecord>& records);

struct ExperimentReport {
  AsymmetrySpec spec;
  AsymmetrySpec baseline;
  std::vector<AsymmetryTrialRecord> records;
  std::vector<AsymmetryTrialRecord> baseline_records;
  ArmSummary arm;
  ArmSummary base;

  Comparison right_vs_left;       // within the arm: mean(right - left) vs 0
  Comparison right_fraction;      // arm - baseline
  Comparison midline_crossings;   // arm - baseline
  Comparison contained_left;      // arm - baseline
  Comparison contained_right;     // arm - baseline

  // One-sided 95% verdicts on the preregistered statistics.
  bool right_exceeds_left = false;
  bool fewer_midline_crossings = false;
  // Two-sided 95% on right_fraction and midline_crossings.
  bool any_significant_difference = false;
};

/// Runs both trial sets. Throws std::invalid_argument if the specs differ in
/// n, lattice kind or eps, and std::runtime_error if an arm has no
/// completed trials.
ExperimentReport asymmetry_experiment(const AsymmetrySpec& spec, const AsymmetrySpec& baseline);

/// The argument checks of asymmetry_experiment.
void check_arms(const AsymmetrySpec& spec, const AsymmetrySpec& baseline);

/// Aggregates and comparisons over records already computed.
ExperimentReport compare_arms(const AsymmetrySpec& spec, const AsymmetrySpec& baseline,
                              std::vector<AsymmetryTrialRecord> records,
                              std::vector<AsymmetryTrialRecord> baseline_records);

/// Exact check that the mirrored field gives the mirrored path (SquareBond).
bool mirror_path_check(const AsymmetrySpec& spec, std::int64_t index);

struct ScalingPoint {
  int n = 0;
  Summary summary;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  std::vector<Comparison> vs_first;  // each later n against the first
  double max_abs_z = 0.0;
  bool drift_significant = false;    // two-sided 95%, Bonferroni over comparisons
};

/// statistic(n, seed) is one sample at size n. Trial i at every n uses
/// stream seed (seed, i).
ScalingReport scaling_invariance_check(const std::function<double(int, std::uint64_t)>& statistic,
                                       const std::vector<int>& n_list, std::int64_t trials,
                                       std::uint64_t seed, int threads = 1);

}  // namespace mstperc
