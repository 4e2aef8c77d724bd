#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mstperc/cli.hpp"
#include "mstperc/dynamics.hpp"
#include "mstperc/experiments.hpp"
#include "mstperc/forest.hpp"
#include "mstperc/parallel.hpp"
#include "mstperc/rng.hpp"
#include "mstperc/stats.hpp"
#include "mstperc/topology.hpp"

namespace mstperc {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

// FNV-1a, printed as 16 hex digits.
std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string edge_digest(const std::vector<EdgeId>& edges) {
  std::vector<EdgeId> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  std::string bytes;
  for (EdgeId e : sorted) bytes += std::to_string(e) + ',';
  return digest(bytes);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error}};
}

Json to_json(const Proportion& p) {
  return {{"successes", p.successes}, {"trials", p.trials}, {"p", p.p},
          {"std_error", p.std_error}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high}};
}

Json to_json(const Comparison& c) {
  return {{"diff", c.diff},           {"std_error", c.std_error}, {"z", c.z},
          {"p_greater", c.p_greater}, {"p_less", c.p_less},       {"p_two_sided", c.p_two_sided},
          {"ci_low", c.ci_low},       {"ci_high", c.ci_high}};
}

struct Run {
  explicit Run(const RunConfig& c) : cfg(c) {}
  const RunConfig& cfg;
  Json results = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> artifacts;  // file name, content
  std::string error;

  std::string records_csv() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
    o << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << csv_quote(r[i]);
      o << '\n';
    }
    return o.str();
  }
};

// Runs fn(i) for every trial. A throwing trial becomes a failed record and
// the first failure (by index) becomes the run's error.
template <class Fn>
std::vector<std::string> run_trials(std::int64_t trials, int threads, Fn&& fn) {
  std::vector<std::string> errors(trials);
  parallel_for(trials, threads, [&](std::int64_t i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "trial failed";
    }
  });
  return errors;
}

void note_first_error(Run& run, const std::vector<std::string>& errors) {
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) {
      run.error = "trial " + std::to_string(i) + ": " + errors[i];
      return;
    }
}

std::uint64_t rate_seed(std::uint64_t root) { return mix64(root ^ 0x7a7e5eed5eedull); }

double mesh_rate(const RunConfig& c) {
  return RateModel::monte_carlo(c.lattice.kind, c.rate_trials, rate_seed(c.seed))
      .rate(c.lattice.mesh());
}

LabelField input_field(const RunConfig& c) {
  if (!c.field_path.empty()) return load_field(c.field_path);
  return sample_regional(make_lattice(c.lattice), c.labels, c.seed);
}

// Sorted by edge id so that equal trees give equal files.
void tree_records(Run& run, const LabelField& f, std::vector<EdgeId> edges) {
  const LatticeGraph& g = f.graph();
  std::sort(edges.begin(), edges.end());
  run.header = {"edge", "a", "b", "ax2", "ay2", "bx2", "by2", "label"};
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    const Coord2 a = g.coord2(ed.a), b = g.coord2(ed.b);
    run.rows.push_back({fmt(e), fmt(ed.a), fmt(ed.b), fmt(a.x), fmt(a.y), fmt(b.x), fmt(b.y),
                        fmt(f.edge_label(e))});
  }
}

// --- commands --------------------------------------------------------------

void cmd_generate(Run& run) {
  const LabelField f = input_field(run.cfg);
  std::vector<double> v = f.values();
  run.results["carriers"] = f.size();
  run.results["sites"] = f.graph().num_sites();
  run.results["edges"] = f.graph().num_edges();
  run.results["label_summary"] = to_json(summarize(v));
  run.results["label_min"] = *std::min_element(v.begin(), v.end());
  run.results["label_max"] = *std::max_element(v.begin(), v.end());
  run.results["labels_distinct"] = labels_distinct(f);
  const std::string field = field_to_json(f, run.cfg.inline_values).dump() + "\n";
  run.results["field_digest"] = digest(field);
  run.artifacts.push_back({"field.json", field});
}

void cmd_mst(Run& run) {
  const LabelField f = input_field(run.cfg);
  const SpanningForest t = mst(f);
  double total = 0.0, top = 0.0;
  for (EdgeId e : t.edges()) {
    total += f.edge_label(e);
    top = std::max(top, f.edge_label(e));
  }
  run.results["sites"] = f.graph().num_sites();
  run.results["tree_edges"] = t.num_edges();
  run.results["spanning"] = t.spanning();
  run.results["total_label"] = total;
  run.results["max_label"] = top;
  run.results["edge_digest"] = edge_digest(t.edges());
  tree_records(run, f, t.edges());
  if (run.cfg.svg) run.artifacts.push_back({"mst.svg", render_svg(f.graph(), t.edges())});
}

InvasionStop stop_of(const RunConfig& c, const LatticeGraph& g) {
  if (c.stop == "sites") return InvasionStop::after_sites(c.stop_sites);
  if (c.stop == "level") return InvasionStop::at_level(c.stop_level);
  if (c.stop == "target") return InvasionStop::at_target(g.site_at(c.target_col, c.target_row));
  return InvasionStop::full();
}

void cmd_invade(Run& run) {
  const LabelField f = input_field(run.cfg);
  const LatticeGraph& g = f.graph();
  const SiteId s = g.site_at(run.cfg.source_col, run.cfg.source_row);
  const SpanningForest t = invasion_tree(f, s, stop_of(run.cfg, g));
  double top = 0.0;
  for (EdgeId e : t.edges()) top = std::max(top, f.edge_label(e));
  run.results["source"] = s;
  run.results["tree_edges"] = t.num_edges();
  run.results["invaded_sites"] = t.component(s).size();
  run.results["max_label"] = top;
  run.results["edge_digest"] = edge_digest(t.edges());
  if (run.cfg.stop == "full") run.results["equals_mst"] = same_edges(t, mst(f));
  tree_records(run, f, t.edges());
  if (run.cfg.svg) run.artifacts.push_back({"invade.svg", render_svg(g, t.edges())});
}

void cmd_clustertree(Run& run) {
  const RunConfig& c = run.cfg;
  const LabelField f = input_field(c);
  const double mesh = f.graph().spec().mesh();
  double p = 0.5;
  if (std::isinf(c.lambda)) {
    p = c.lambda > 0 ? 1.0 : 0.0;
    run.results["rate"] = nullptr;
  } else if (c.lambda != 0.0) {
    const double rate = RateModel::monte_carlo(f.graph().kind(), c.rate_trials, rate_seed(c.seed))
                            .rate(mesh);
    p = lambda_level(c.lambda, mesh, rate).p;
    run.results["rate"] = rate;
  } else {
    run.results["rate"] = nullptr;
  }
  const ClusterTree ct = cluster_tree(f, p);
  double top = 0.0;
  std::vector<EdgeId> edges;
  run.header = {"a", "b", "edge", "label"};
  for (const auto& l : ct.links) {
    top = std::max(top, l.label);
    edges.push_back(l.edge);
    run.rows.push_back({fmt(l.a), fmt(l.b), fmt(l.edge), fmt(l.label)});
  }
  run.results["p"] = p;
  run.results["vertices"] = ct.num_vertices;
  run.results["links"] = ct.links.size();
  run.results["max_link_label"] = top;
  if (c.svg) run.artifacts.push_back({"clustertree.svg", render_svg(f.graph(), edges)});
}

void cmd_dynamics(Run& run) {
  const RunConfig& c = run.cfg;
  const auto g = make_lattice(c.lattice);
  const double rate = mesh_rate(c);
  const SwitchMode mode = c.switch_mode == "open_only" ? SwitchMode::OpenOnly : SwitchMode::Resample;
  struct Rec {
    std::int64_t events = 0;
    double density0 = 0, density1 = 0;
    bool cross0 = false, cross1 = false;
  };
  std::vector<Rec> recs(c.trials);
  const auto errors = run_trials(c.trials, c.threads, [&](std::int64_t i) {
    const auto u = static_cast<std::uint64_t>(i);
    const LabelField f = sample_regional(g, c.labels, stream_seed(c.seed, 2 * u));
    const DynamicalRun d = run_dynamics(f, mode, rate, c.horizon, stream_seed(c.seed, 2 * u + 1));
    const Configuration end = d.snapshot(c.horizon);
    recs[i] = {static_cast<std::int64_t>(d.events().size()), open_density(d.initial()),
               open_density(end), has_crossing(*g, d.initial(), c.quad), has_crossing(*g, end, c.quad)};
  });
  note_first_error(run, errors);
  run.header = {"index", "failed", "error", "events", "density_start", "density_end",
                "crossing_start", "crossing_end"};
  std::vector<double> ev;
  std::int64_t done = 0, x0 = 0, x1 = 0, changed = 0;
  for (std::int64_t i = 0; i < c.trials; ++i) {
    const Rec& r = recs[i];
    const bool failed = !errors[i].empty();
    run.rows.push_back({fmt(i), fmt(failed), errors[i], fmt(r.events), fmt(r.density0),
                        fmt(r.density1), fmt(r.cross0), fmt(r.cross1)});
    if (failed) continue;
    ++done;
    ev.push_back(static_cast<double>(r.events));
    x0 += r.cross0;
    x1 += r.cross1;
    changed += r.cross0 != r.cross1;
  }
  run.results["rate"] = rate;
  run.results["mode"] = c.switch_mode;
  run.results["completed"] = done;
  run.results["expected_events"] = rate * c.horizon * static_cast<double>(g->num_carriers());
  run.results["events"] = to_json(summarize(ev));
  if (done > 0) {
    run.results["crossing_start"] = to_json(proportion(x0, done));
    run.results["crossing_end"] = to_json(proportion(x1, done));
    run.results["crossing_changed"] = to_json(proportion(changed, done));
  }
}

// Finer scales may not be significantly worse: the lower 95% bound at each
// finer eps stays below the upper bound of the coarser one.
bool non_increasing_by_ci(const std::vector<StabilityPoint>& pts) {
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (pts[k].disagreement_rate - kZ95 * pts[k].std_error >
        pts[k - 1].disagreement_rate + kZ95 * pts[k - 1].std_error)
      return false;
  return true;
}

void cmd_stability(Run& run) {
  const RunConfig& c = run.cfg;
  StabilitySpec s;
  s.lattice = c.lattice;
  s.quad = c.quad;
  s.eps = c.eps_grid;
  s.t = c.horizon;
  s.trials = c.trials;
  s.seed = c.seed;
  s.threads = c.threads;
  const double rate = mesh_rate(c);
  const StabilityReport rep = stability_experiment(s, rate);
  run.header = {"index", "switches", "actual"};
  for (double e : s.eps) {
    run.header.push_back("predicted_" + fmt(e));
    run.header.push_back("important_" + fmt(e));
  }
  for (const auto& t : rep.trials) {
    std::vector<std::string> row{fmt(t.index), fmt(t.switches), fmt(t.actual)};
    for (std::size_t k = 0; k < s.eps.size(); ++k) {
      row.push_back(fmt(static_cast<bool>(t.predicted[k])));
      row.push_back(fmt(t.important_switches[k]));
    }
    run.rows.push_back(std::move(row));
  }
  Json pts = Json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"eps", p.eps},
                   {"disagreements", p.disagreements},
                   {"disagreement_rate", p.disagreement_rate},
                   {"std_error", p.std_error},
                   {"interval", to_json(proportion(p.disagreements, s.trials))}});
  run.results["rate"] = rate;
  run.results["points"] = pts;
  run.results["non_increasing"] = non_increasing_by_ci(rep.points);
}

Json to_json(const ArmSummary& a) {
  return {{"completed", a.completed},
          {"failures", a.failures},
          {"multiple_segments", a.multiple_segments},
          {"left_fraction", to_json(a.left_fraction)},
          {"right_fraction", to_json(a.right_fraction)},
          {"right_minus_left", to_json(a.right_minus_left)},
          {"midline_crossings", to_json(a.midline_crossings)},
          {"path_length", to_json(a.path_length)},
          {"contained_left", to_json(a.contained_left)},
          {"contained_right", to_json(a.contained_right)}};
}

void cmd_asymmetry(Run& run) {
  const RunConfig& c = run.cfg;
  AsymmetrySpec s;
  s.kind = c.lattice.kind;
  s.n = c.lattice.n - 1;
  s.eps = c.eps;
  s.trials = c.trials;
  s.seed = c.seed;
  s.labels = c.labels;
  s.invasion = c.invasion;
  s.endpoints = c.endpoints == "custom" ? EndpointReading::Custom : EndpointReading::MidlineEnds;
  s.x_col = c.x_col, s.x_row = c.x_row, s.y_col = c.y_col, s.y_row = c.y_row;
  s.threads = c.threads;
  AsymmetrySpec b = AsymmetrySpec::baseline_of(s);
  b.labels = c.baseline_labels;
  if (c.baseline_seed) b.seed = *c.baseline_seed;
  check_arms(s, b);

  const auto g = make_lattice(s.lattice());
  std::vector<AsymmetryTrialRecord> arm(s.trials), base(b.trials);
  parallel_for(s.trials, s.threads, [&](std::int64_t i) { arm[i] = asymmetry_trial(s, g, i); });
  parallel_for(b.trials, b.threads, [&](std::int64_t i) { base[i] = asymmetry_trial(b, g, i); });

  run.header = {"arm", "index", "seed", "failed", "error", "path_length", "left_edges",
                "right_edges", "midline_edges", "left_fraction", "right_fraction",
                "contained_left", "contained_right", "midline_crossings", "segments",
                "invaded_left", "invaded_right"};
  for (const auto* recs : {&arm, &base})
    for (const auto& r : *recs)
      run.rows.push_back({recs == &arm ? "arm" : "baseline", fmt(r.index), fmt(r.seed), fmt(r.failed),
                          r.error, fmt(r.path_length), fmt(r.left_edges), fmt(r.right_edges),
                          fmt(r.midline_edges), fmt(r.left_fraction), fmt(r.right_fraction),
                          fmt(r.contained_left), fmt(r.contained_right), fmt(r.midline_crossings),
                          fmt(r.segments), fmt(r.invaded_left), fmt(r.invaded_right)});
  for (const auto& r : arm)
    if (r.failed) {
      run.error = "trial " + std::to_string(r.index) + ": " + r.error;
      break;
    }
  if (c.svg) {
    std::vector<SvgPath> paths;
    for (const auto& r : arm)
      if (!r.failed) {
        paths.push_back({r.path, "#c0392b"});
        break;
      }
    for (const auto& r : base)
      if (!r.failed) {
        paths.push_back({r.path, "#2980b9"});
        break;
      }
    run.artifacts.push_back({"asymmetry.svg", render_svg(*g, {}, paths, s.eps)});
  }

  const ExperimentReport rep = compare_arms(s, b, std::move(arm), std::move(base));
  run.results["n_steps"] = s.n;
  run.results["baseline_seed"] = b.seed;
  run.results["endpoints"] = {{"x", {s.x_site(*g) % g->n(), s.x_site(*g) / g->n()}},
                              {"y", {s.y_site(*g) % g->n(), s.y_site(*g) / g->n()}}};
  run.results["arm"] = to_json(rep.arm);
  run.results["baseline"] = to_json(rep.base);
  run.results["right_vs_left"] = to_json(rep.right_vs_left);
  run.results["right_fraction_vs_baseline"] = to_json(rep.right_fraction);
  run.results["midline_crossings_vs_baseline"] = to_json(rep.midline_crossings);
  run.results["contained_left_vs_baseline"] = to_json(rep.contained_left);
  run.results["contained_right_vs_baseline"] = to_json(rep.contained_right);
  run.results["right_exceeds_left"] = rep.right_exceeds_left;
  run.results["fewer_midline_crossings"] = rep.fewer_midline_crossings;
  run.results["any_significant_difference"] = rep.any_significant_difference;
}

void cmd_armexp(Run& run) {
  const RunConfig& c = run.cfg;
  std::vector<double> lx, ly, sy;
  Json pts = Json::array();
  run.header = {"R", "r0", "trials", "successes", "estimate", "std_error"};
  for (std::size_t k = 0; k < c.radii.size(); ++k) {
    const int R = c.radii[k];
    const Estimate e = estimate_alpha4({c.lattice.kind, 2 * R + 1}, c.r0, R, c.trials,
                                       stream_seed(c.seed, k), c.threads);
    run.rows.push_back({fmt(R), fmt(c.r0), fmt(e.trials), fmt(e.successes), fmt(e.estimate),
                        fmt(e.std_error)});
    pts.push_back({{"R", R}, {"successes", e.successes}, {"estimate", e.estimate},
                   {"std_error", e.std_error}});
    if (e.successes > 0) {
      lx.push_back(std::log(static_cast<double>(R)));
      ly.push_back(std::log(e.estimate));
      sy.push_back(e.std_error / e.estimate);
    }
  }
  run.results["points"] = pts;
  if (lx.size() >= 2) {
    const LinearFit f = linear_fit(lx, ly, sy);
    run.results["slope"] = f.slope;
    run.results["slope_std_error"] = f.slope_std_error;
    run.results["slope_ci"] = {f.slope - kZ95 * f.slope_std_error, f.slope + kZ95 * f.slope_std_error};
    // r = eta^2 / alpha4 with eta ~ 1/R.
    run.results["rate_slope"] = 2.0 + f.slope;
    run.results["slope_within_expected"] = std::abs(f.slope + 1.25) <= 0.2;
  } else {
    run.error = "fewer than two radii with a positive estimate";
  }
}

void cmd_topology(Run& run) {
  const RunConfig& c = run.cfg;
  TopologySpec s;
  s.lattice = c.lattice;
  s.delta = c.delta;
  s.k_min = c.k_min;
  s.touch_radius = c.touch_radius;
  s.excursion = c.excursion;
  s.lambda = c.touch_lambda;
  s.trials = c.trials;
  s.seed = c.seed;
  const double rate = mesh_rate(c);
  const auto g = make_lattice(s.lattice);
  std::vector<TopologyRecord> recs(c.trials);
  const auto errors = run_trials(c.trials, c.threads,
                                 [&](std::int64_t i) { recs[i] = topology_trial(s, g, rate, i); });
  note_first_error(run, errors);
  run.header = {"index", "failed", "error", "leaf_fraction", "max_degree", "branch_points",
                "touch_candidates", "six_arm_touches"};
  std::vector<double> leaf, bp, tc;
  std::int64_t done = 0, with_bp = 0, with_touch = 0;
  for (std::int64_t i = 0; i < c.trials; ++i) {
    const auto& r = recs[i];
    const bool failed = !errors[i].empty();
    run.rows.push_back({fmt(i), fmt(failed), errors[i], fmt(r.leaf_fraction), fmt(r.max_degree),
                        fmt(r.branch_points), fmt(r.touch_candidates), fmt(r.six_arm_touches)});
    if (failed) continue;
    ++done;
    leaf.push_back(r.leaf_fraction);
    bp.push_back(static_cast<double>(r.branch_points));
    tc.push_back(static_cast<double>(r.touch_candidates));
    with_bp += r.branch_points > 0;
    with_touch += r.six_arm_touches > 0;
  }
  run.results["rate"] = rate;
  run.results["completed"] = done;
  run.results["leaf_fraction"] = to_json(summarize(leaf));
  run.results["branch_points"] = to_json(summarize(bp));
  run.results["touch_candidates"] = to_json(summarize(tc));
  if (done > 0) {
    run.results["trials_with_branch_point"] = to_json(proportion(with_bp, done));
    run.results["trials_with_six_arm_touch"] = to_json(proportion(with_touch, done));
  }
}

void dispatch(Run& run) {
  const std::string& cmd = run.cfg.command;
  if (cmd == "generate") return cmd_generate(run);
  if (cmd == "mst") return cmd_mst(run);
  if (cmd == "invade") return cmd_invade(run);
  if (cmd == "clustertree") return cmd_clustertree(run);
  if (cmd == "dynamics") return cmd_dynamics(run);
  if (cmd == "stability") return cmd_stability(run);
  if (cmd == "asymmetry") return cmd_asymmetry(run);
  if (cmd == "armexp") return cmd_armexp(run);
  if (cmd == "topology") return cmd_topology(run);
  throw UsageError("unknown command '" + cmd + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

RunOutcome run_command(const RunConfig& config, bool write_files) {
  config.validate();
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Run run(config);
  try {
    dispatch(run);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    run.error = e.what();
  }

  Json report;
  report["schema"] = "mstperc.report";
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = config.command;
  report["config"] = to_json(config);
  report["seed"] = config.seed;
  report["status"] = run.error.empty() ? "ok" : "failed";
  if (!run.error.empty()) report["error"] = run.error;
  if (!run.header.empty()) {
    const std::string csv = run.records_csv();
    run.results["records"] = run.rows.size();
    run.results["records_digest"] = digest(csv);
    run.artifacts.insert(run.artifacts.begin(), {config.command + "_records.csv", csv});
  }
  report["results"] = run.results;
  Json files = Json::array();
  for (const auto& a : run.artifacts) files.push_back(a.first);
  files.push_back(config.command + ".json");
  report["files"] = files;
  report["metadata"] = {
      {"version", std::string(library_version())},
      {"started", started},
      {"finished", utc_now()},
      {"elapsed_seconds",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
      {"hardware_threads", default_threads()}};

  if (write_files) {
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, text] : run.artifacts) write_text(dir / name, text);
    write_text(dir / (config.command + ".json"), report.dump(2) + "\n");
  }
  return {report, run.error.empty()};
}

Json reproducible_part(const Json& report) {
  Json out;
  for (const char* key : {"schema", "schema_version", "command", "seed", "status", "error", "results"})
    if (report.contains(key)) out[key] = report[key];
  Json cfg = report.at("config");
  cfg.erase("threads");
  cfg.erase("output_dir");
  out["config"] = cfg;
  return out;
}

bool replay_report(const Json& report, int threads) {
  RunConfig c = config_from_json(report.at("config"));
  c.threads = threads;
  // Round-trip through text so both sides went through the same encoding.
  const Json fresh = Json::parse(run_command(c, false).report.dump());
  const Json stored = Json::parse(report.dump());
  return reproducible_part(fresh) == reproducible_part(stored);
}

// --- command line ----------------------------------------------------------

namespace {

struct Flags {
  std::string kind, labels, baseline_labels, lambda;
  std::vector<int> source, target, x, y;
  std::vector<double> quad;
  std::uint64_t baseline_seed = 0;
  bool no_inline = false, no_svg = false, print = false;
  std::string save_config;
};

void add_run_options(CLI::App& app, RunConfig& c, Flags& f) {
  app.add_option("--config", "JSON config file; flags override its values");
  app.add_option("--lattice", f.kind, "square_bond or triangular_site");
  app.add_option("-n,--size", c.lattice.n, "sites per side");
  app.add_option("--seed", c.seed, "root seed (overrides MSTPERC_SEED)");
  app.add_option("--trials", c.trials);
  app.add_option("--threads", c.threads);
  app.add_option("-o,--out", c.output_dir, "output directory");
  app.add_option("--labels", f.labels, "uniform, asymmetric or asymmetric_mirrored");
  app.add_option("--baseline-labels", f.baseline_labels);
  app.add_option("--baseline-seed", f.baseline_seed);
  app.add_option("--field", c.field_path, "field artifact to use instead of sampling");
  app.add_flag("--no-inline", f.no_inline, "do not inline label values in field.json");
  app.add_flag("--no-svg", f.no_svg);
  app.add_option("--source", f.source, "invasion source: col row")->expected(2);
  app.add_option("--stop", c.stop, "full, sites, level or target");
  app.add_option("--stop-sites", c.stop_sites);
  app.add_option("--stop-level", c.stop_level);
  app.add_option("--target", f.target, "col row")->expected(2);
  app.add_option("--lambda", f.lambda, "cluster level; inf allowed");
  app.add_option("--rate-trials", c.rate_trials, "trials for the four-arm rate estimate");
  app.add_option("--switch-mode", c.switch_mode, "resample or open_only");
  app.add_option("--horizon,-t", c.horizon, "near-critical time; clocks ring at rate r(eta)");
  app.add_option("--eps-grid", c.eps_grid);
  app.add_option("--quad", f.quad, "x0 y0 x1 y1")->expected(4);
  app.add_option("--eps", c.eps);
  app.add_flag("--invasion", c.invasion);
  app.add_option("--endpoints", c.endpoints, "midline or custom");
  app.add_option("--x", f.x, "col row")->expected(2);
  app.add_option("--y", f.y, "col row")->expected(2);
  app.add_option("--r0", c.r0);
  app.add_option("--radii", c.radii);
  app.add_option("--delta", c.delta);
  app.add_option("--k-min", c.k_min);
  app.add_option("--touch-radius", c.touch_radius);
  app.add_option("--excursion", c.excursion);
  app.add_option("--touch-lambda", c.touch_lambda);
  app.add_option("--save-config", f.save_config, "write the effective config here");
  app.add_flag("--print", f.print, "print the full report");
}

void apply_flags(const CLI::App& app, RunConfig& c, const Flags& f) {
  try {
    if (app.count("--lattice")) c.lattice.kind = lattice_kind_from_string(f.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (app.count("--labels")) c.labels = region_spec_from_json(Json(f.labels));
  if (app.count("--baseline-labels")) c.baseline_labels = region_spec_from_json(Json(f.baseline_labels));
  if (app.count("--baseline-seed")) c.baseline_seed = f.baseline_seed;
  if (f.no_inline) c.inline_values = false;
  if (f.no_svg) c.svg = false;
  if (app.count("--source")) c.source_col = f.source[0], c.source_row = f.source[1];
  if (app.count("--target")) c.target_col = f.target[0], c.target_row = f.target[1];
  if (app.count("--x")) c.x_col = f.x[0], c.x_row = f.x[1];
  if (app.count("--y")) c.y_col = f.y[0], c.y_row = f.y[1];
  if (app.count("--quad")) c.quad = {f.quad[0], f.quad[1], f.quad[2], f.quad[3]};
  if (app.count("--lambda")) {
    if (f.lambda == "inf" || f.lambda == "+inf") {
      c.lambda = std::numeric_limits<double>::infinity();
    } else if (f.lambda == "-inf") {
      c.lambda = -std::numeric_limits<double>::infinity();
    } else {
      try {
        std::size_t used = 0;
        c.lambda = std::stod(f.lambda, &used);
        if (used != f.lambda.size()) throw std::invalid_argument(f.lambda);
      } catch (const std::exception&) {
        throw UsageError("--lambda expects a number or inf");
      }
    }
  }
}

std::optional<std::string> config_path_in(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    throw UsageError("MSTPERC_SEED must be an unsigned integer");
  return v;
}

void print_summary(const Json& report, bool full) {
  if (full) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::cout << report["command"].get<std::string>() << ": " << report["status"].get<std::string>();
  if (report.contains("error")) std::cout << " (" << report["error"].get<std::string>() << ")";
  std::cout << "\n" << report["results"].dump(2) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Minimal spanning trees and near-critical percolation on lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  RunConfig cfg;
  Flags flags;
  std::string seed_source = "default";
  try {
    if (const auto path = config_path_in(argc, argv)) {
      cfg = load_config(*path);
      seed_source = "config";
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  static const std::map<std::string, std::string> about{
      {"generate", "sample a label field and write field.json"},
      {"mst", "minimal spanning tree of a field"},
      {"invade", "invasion tree from a source site"},
      {"clustertree", "cluster tree at a lambda level"},
      {"dynamics", "Poisson switching dynamics and crossing events"},
      {"stability", "eps-important switches as a predictor of crossing"},
      {"asymmetry", "asymmetric square against a symmetric baseline"},
      {"armexp", "four-arm probabilities and the fitted exponent"},
      {"topology", "branch points and near-touch points of the tree"}};
  std::vector<CLI::App*> subs;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    add_run_options(*sub, cfg, flags);
    subs.push_back(sub);
  }
  std::string replay_path;
  int replay_threads = 1;
  CLI::App* replay = app.add_subcommand("replay", "re-run a report from its embedded config");
  replay->add_option("report", replay_path, "report JSON")->required();
  replay->add_option("--threads", replay_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay->parsed()) {
      std::ifstream in(replay_path);
      if (!in) throw UsageError("cannot read report " + replay_path);
      Json report;
      try {
        report = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw UsageError(std::string("report is not valid JSON: ") + e.what());
      }
      if (!report.contains("config")) throw UsageError("report has no embedded config");
      const bool same = replay_report(report, replay_threads);
      std::cout << "replay: " << (same ? "identical" : "DIFFERENT") << '\n';
      return same ? 0 : 1;
    }
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      if (sub->count("--seed")) {
        seed_source = "flag";
      } else if (const char* env = std::getenv("MSTPERC_SEED"); env && *env) {
        cfg.seed = parse_seed(env);
        seed_source = "env";
      }
      apply_flags(*sub, cfg, flags);
      cfg.validate();
      if (!flags.save_config.empty()) save_config(cfg, flags.save_config);
      RunOutcome out = run_command(cfg, true);
      std::cerr << "seed " << cfg.seed << " (" << seed_source << "), output in " << cfg.output_dir
                << '\n';
      print_summary(out.report, flags.print);
      return out.ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace mstperc
