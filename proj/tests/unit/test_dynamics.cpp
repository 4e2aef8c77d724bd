#include "doctest.h"

#include <cmath>

#include "mstperc/dynamics.hpp"
#include "mstperc/rng.hpp"

using namespace mstperc;

TEST_CASE("poisson clocks: event counts and order") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 40});
  const LabelField f = sample_uniform(g, 5);
  const double rate = 0.7, horizon = 3.0;
  const DynamicalRun run = run_dynamics(f, SwitchMode::Resample, rate, horizon, 17);
  const double mean = rate * horizon * static_cast<double>(f.size());
  CHECK(std::abs(static_cast<double>(run.events().size()) - mean) < 5.0 * std::sqrt(mean));
  for (std::size_t i = 1; i < run.events().size(); ++i)
    CHECK(run.events()[i - 1].time <= run.events()[i].time);
  for (const auto& e : run.events()) {
    CHECK(e.time > 0.0);
    CHECK(e.time <= horizon);
  }
  // Inter-arrival times at one carrier are exponential: P(no event) = exp(-rT).
  std::vector<int> hit(f.size(), 0);
  for (const auto& e : run.events()) hit[e.carrier] = 1;
  double quiet = 0;
  for (int h : hit) quiet += !h;
  const double p0 = std::exp(-rate * horizon);
  CHECK(std::abs(quiet / f.size() - p0) < 5.0 * std::sqrt(p0 * (1 - p0) / f.size()));
}

TEST_CASE("dynamics replays from its seed") {
  const auto g = make_lattice({LatticeKind::SquareBond, 10});
  const LabelField f = sample_uniform(g, 1);
  const DynamicalRun a = run_dynamics(f, SwitchMode::Resample, 1.0, 2.0, 3);
  const DynamicalRun b = run_dynamics(f, SwitchMode::Resample, 1.0, 2.0, 3);
  const DynamicalRun c = run_dynamics(f, SwitchMode::Resample, 1.0, 2.0, 4);
  CHECK(a.events() == b.events());
  CHECK_FALSE(a.events() == c.events());
  CHECK(a.initial() == configuration_at(f, 0.5));
}

TEST_CASE("open-only dynamics is monotone") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 20});
  const LabelField f = sample_uniform(g, 2);
  const DynamicalRun run = run_dynamics(f, SwitchMode::OpenOnly, 0.5, 1.0, 9);
  Configuration prev = run.snapshot(0.0);
  CHECK(prev == run.initial());
  for (double t : {0.1, 0.3, 0.6, 1.0}) {
    const Configuration cur = run.snapshot(t);
    for (std::size_t k = 0; k < cur.size(); ++k) CHECK(cur[k] >= prev[k]);
    prev = cur;
  }
  // Every carrier that rang is open at the horizon.
  for (const auto& e : run.events()) CHECK(prev[e.carrier] == 1);
}

TEST_CASE("resampling keeps critical percolation stationary") {
  const auto g = make_lattice({LatticeKind::TriangularSite, 80});
  const LabelField f = sample_uniform(g, 3);
  const DynamicalRun run = run_dynamics(f, SwitchMode::Resample, 1.0, 2.0, 4);
  const double se = std::sqrt(0.25 / f.size());
  for (double t : {0.0, 0.5, 1.0, 2.0}) CHECK(std::abs(open_density(run.snapshot(t)) - 0.5) < 5 * se);
  // Open density under OpenOnly grows as 1 - exp(-t)/2.
  const DynamicalRun up = run_dynamics(f, SwitchMode::OpenOnly, 1.0, 2.0, 4);
  for (double t : {0.5, 1.0, 2.0})
    CHECK(std::abs(open_density(up.snapshot(t)) - (1.0 - 0.5 * std::exp(-t))) < 5 * se);
}

TEST_CASE("dynamics argument checks") {
  const auto g = make_lattice({LatticeKind::SquareBond, 4});
  const LabelField f = sample_uniform(g, 1);
  CHECK_THROWS_AS(run_dynamics(f, SwitchMode::Resample, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_dynamics(f, SwitchMode::Resample, 1.0, -1.0, 1), std::invalid_argument);
  const DynamicalRun run = run_dynamics(f, SwitchMode::Resample, 1.0, 1.0, 1);
  CHECK_THROWS_AS(run.snapshot(1.5), std::out_of_range);
  CHECK_THROWS_AS(run.snapshot(-0.1), std::out_of_range);
  CHECK(run_dynamics(f, SwitchMode::Resample, 1.0, 0.0, 1).events().empty());
}

TEST_CASE("stability trials") {
  StabilitySpec spec;
  spec.lattice = {LatticeKind::TriangularSite, 16};
  spec.eps = {0.5, 0.25, 0.125};
  spec.trials = 24;
  spec.seed = 5;
  const auto g = make_lattice(spec.lattice);

  SUBCASE("zero time predicts exactly") {
    spec.t = 0.0;
    const StabilityTrial t = stability_trial(spec, g, 0.3, 0);
    for (auto p : t.predicted) CHECK(static_cast<bool>(p) == t.actual);
  }
  SUBCASE("an annulus that does not fit marks nothing important") {
    spec.t = 1.0;
    for (std::int64_t i = 0; i < 5; ++i) {
      const StabilityTrial t = stability_trial(spec, g, 0.3, i);
      CHECK(t.important_switches[0] == 0);
      const LabelField f = sample_uniform(g, stream_seed(spec.seed, 2 * static_cast<std::uint64_t>(i)));
      CHECK(static_cast<bool>(t.predicted[0]) == has_crossing(f, spec.quad, 0.5));
      CHECK(t.important_switches[2] <= t.switches);
    }
  }
  SUBCASE("reports are independent of the thread count") {
    spec.t = 1.0;
    spec.threads = 1;
    const StabilityReport a = stability_experiment(spec, 0.3);
    spec.threads = 3;
    const StabilityReport b = stability_experiment(spec, 0.3);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k)
      CHECK(a.points[k].disagreements == b.points[k].disagreements);
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
      CHECK(a.trials[i].switches == b.trials[i].switches);
      CHECK(a.trials[i].predicted == b.trials[i].predicted);
    }
  }
  SUBCASE("bad specs are rejected") {
    spec.trials = 0;
    CHECK_THROWS_AS(stability_experiment(spec, 0.3), std::invalid_argument);
    spec.trials = 2;
    spec.eps = {0.0};
    CHECK_THROWS_AS(stability_experiment(spec, 0.3), std::invalid_argument);
  }
}
