#include "mstperc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mstperc/parallel.hpp"
#include "mstperc/rng.hpp"

namespace mstperc {

DynamicalRun::DynamicalRun(std::shared_ptr<const LatticeGraph> graph, Configuration initial,
                           std::vector<TrajectoryEvent> events, SwitchMode mode, double rate,
                           double horizon, std::uint64_t seed)
    : graph_(std::move(graph)),
      initial_(std::move(initial)),
      events_(std::move(events)),
      mode_(mode),
      rate_(rate),
      horizon_(horizon),
      seed_(seed) {}

Configuration DynamicalRun::snapshot(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw std::out_of_range("snapshot time outside [0, horizon]");
  Configuration c = initial_;
  for (const auto& e : events_) {
    if (e.time > t) break;
    c[e.carrier] = e.open_after ? 1 : 0;
  }
  return c;
}

DynamicalRun run_dynamics(const LabelField& f, SwitchMode mode, double rate, double horizon,
                          std::uint64_t seed) {
  if (!(rate > 0.0)) throw std::invalid_argument("dynamics rate must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("dynamics horizon must be non-negative");
  Rng rng(seed);
  std::vector<TrajectoryEvent> events;
  for (CarrierId c = 0; c < static_cast<CarrierId>(f.size()); ++c) {
    for (double t = rng.exponential(rate); t <= horizon; t += rng.exponential(rate)) {
      const bool open = mode == SwitchMode::OpenOnly ? true : rng.coin();
      events.push_back({c, t, open});
    }
  }
  std::sort(events.begin(), events.end(), [](const TrajectoryEvent& a, const TrajectoryEvent& b) {
    return a.time < b.time || (a.time == b.time && a.carrier < b.carrier);
  });
  return DynamicalRun(f.graph_ptr(), configuration_at(f, 0.5), std::move(events), mode, rate,
                      horizon, seed);
}

double open_density(const Configuration& c) {
  if (c.empty()) return 0.0;
  std::int64_t open = 0;
  for (auto v : c) open += v;
  return static_cast<double>(open) / static_cast<double>(c.size());
}

StabilityTrial stability_trial(const StabilitySpec& spec,
                               const std::shared_ptr<const LatticeGraph>& g, double rate,
                               std::int64_t index) {
  const std::uint64_t i = static_cast<std::uint64_t>(index);
  const LabelField f = sample_uniform(g, stream_seed(spec.seed, 2 * i));
  StabilityTrial rec;
  rec.index = index;
  const Configuration initial = configuration_at(f, 0.5);
  if (spec.t <= 0.0) {
    rec.actual = has_crossing(*g, initial, spec.quad);
    rec.predicted.assign(spec.eps.size(), rec.actual);
    rec.important_switches.assign(spec.eps.size(), 0);
    return rec;
  }
  const DynamicalRun run = run_dynamics(f, SwitchMode::OpenOnly, rate, spec.t, stream_seed(spec.seed, 2 * i + 1));
  rec.switches = static_cast<std::int64_t>(run.events().size());
  rec.actual = has_crossing(*g, run.snapshot(spec.t), spec.quad);
  for (double eps : spec.eps) {
    Configuration predicted = initial;
    std::int64_t used = 0;
    std::vector<std::int8_t> important(f.size(), -1);
    for (const auto& e : run.events()) {
      if (important[e.carrier] < 0) important[e.carrier] = is_important(f, e.carrier, 0.5, eps) ? 1 : 0;
      if (!important[e.carrier]) continue;
      predicted[e.carrier] = e.open_after ? 1 : 0;
      ++used;
    }
    rec.predicted.push_back(has_crossing(*g, predicted, spec.quad) ? 1 : 0);
    rec.important_switches.push_back(used);
  }
  return rec;
}

StabilityReport stability_experiment(const StabilitySpec& spec, double rate) {
  if (spec.trials <= 0) throw std::invalid_argument("stability needs a positive trial count");
  if (spec.t < 0.0) throw std::invalid_argument("stability time must be non-negative");
  for (double e : spec.eps)
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("importance scale must lie in (0,1]");
  const auto g = make_lattice(spec.lattice);
  spec.quad.index_range(*g);

  StabilityReport report;
  report.spec = spec;
  report.rate = rate;
  report.trials.resize(spec.trials);
  parallel_for(spec.trials, spec.threads,
               [&](std::int64_t i) { report.trials[i] = stability_trial(spec, g, rate, i); });
  for (std::size_t k = 0; k < spec.eps.size(); ++k) {
    StabilityPoint pt;
    pt.eps = spec.eps[k];
    for (const auto& t : report.trials) pt.disagreements += (t.predicted[k] != 0) != t.actual;
    const double p = static_cast<double>(pt.disagreements) / spec.trials;
    pt.disagreement_rate = p;
    pt.std_error = std::sqrt(p * (1.0 - p) / spec.trials);
    report.points.push_back(pt);
  }
  return report;
}

StabilityReport stability_experiment(const StabilitySpec& spec, const RateModel& rates) {
  return stability_experiment(spec, rates.rate(spec.lattice.mesh()));
}

}  // namespace mstperc
