#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mstperc/labels.hpp"
#include "mstperc/percolation.hpp"

namespace mstperc {

enum class SwitchMode : std::uint8_t {
  Resample,  // dynamical percolation: the carrier redraws its color
  OpenOnly,  // near-critical: the carrier becomes open
};

struct TrajectoryEvent {
  CarrierId carrier = 0;
  double time = 0.0;
  bool open_after = true;
  friend bool operator==(const TrajectoryEvent&, const TrajectoryEvent&) = default;
};

/// Colors at level 1/2 of a label field evolved by independent Poisson
/// clocks of rate `rate` per carrier on [0, horizon].
class DynamicalRun {
 public:
  DynamicalRun(std::shared_ptr<const LatticeGraph> graph, Configuration initial,
               std::vector<TrajectoryEvent> events, SwitchMode mode, double rate,
               double horizon, std::uint64_t seed);

  const LatticeGraph& graph() const { return *graph_; }
  const Configuration& initial() const { return initial_; }
  /// Sorted by (time, carrier).
  const std::vector<TrajectoryEvent>& events() const { return events_; }
  SwitchMode mode() const { return mode_; }
  double rate() const { return rate_; }
  double horizon() const { return horizon_; }
  std::uint64_t seed() const { return seed_; }

  /// Configuration after all events with time <= t. Throws
  /// std::out_of_range for t outside [0, horizon].
  Configuration snapshot(double t) const;

 private:
  std::shared_ptr<const LatticeGraph> graph_;
  Configuration initial_;
  std::vector<TrajectoryEvent> events_;
  SwitchMode mode_;
  double rate_;
  double horizon_;
  std::uint64_t seed_;
};

/// Throws std::invalid_argument unless rate > 0 and horizon >= 0.
DynamicalRun run_dynamics(const LabelField& f, SwitchMode mode, double rate, double horizon,
                          std::uint64_t seed);

double open_density(const Configuration& c);

/// Near-critical stability test. Per trial: sample a field, run OpenOnly
/// dynamics to time `t` (clocks of rate r(eta), so t is in the same units
/// as lambda), compare the crossing of `quad` at time t with the crossing
/// predicted by applying only switches at carriers that are eps-important
/// in the initial configuration.
struct StabilitySpec {
  LatticeSpec lattice{LatticeKind::TriangularSite, 32};
  Quad quad = Quad::whole();
  std::vector<double> eps{0.5, 0.25, 0.125};
  double t = 1.0;
  std::int64_t trials = 500;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct StabilityPoint {
  double eps = 0.0;
  std::int64_t disagreements = 0;
  double disagreement_rate = 0.0;
  double std_error = 0.0;
};

struct StabilityTrial {
  std::int64_t index = 0;
  std::int64_t switches = 0;
  bool actual = false;
  std::vector<std::uint8_t> predicted;          // per eps
  std::vector<std::int64_t> important_switches;  // per eps
};

struct StabilityReport {
  StabilitySpec spec;
  double rate = 0.0;
  std::vector<StabilityPoint> points;
  std::vector<StabilityTrial> trials;
};

StabilityTrial stability_trial(const StabilitySpec& spec,
                               const std::shared_ptr<const LatticeGraph>& g, double rate,
                               std::int64_t index);

StabilityReport stability_experiment(const StabilitySpec& spec, double rate);
StabilityReport stability_experiment(const StabilitySpec& spec, const RateModel& rates);

}  // namespace mstperc
