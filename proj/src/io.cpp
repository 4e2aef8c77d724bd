#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mstperc/cli.hpp"
#include "mstperc/experiments.hpp"

namespace mstperc {

std::string_view library_version() { return "0.3.0"; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"generate",  "mst",       "invade",
                                              "clustertree", "dynamics", "stability",
                                              "asymmetry", "armexp",    "topology"};
  return names;
}

namespace {

Json to_json(const Distribution& d) {
  Json j;
  if (d.kind == Distribution::Kind::Uniform) {
    j["kind"] = "uniform";
    j["support"] = {d.a, d.b};
  } else {
    j["kind"] = "uniform_union";
    j["support"] = {d.a, d.b, d.c, d.d};
  }
  return j;
}

Distribution distribution_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto s = j.at("support").get<std::vector<double>>();
  if (kind == "uniform" && s.size() == 2) return Distribution::uniform(s[0], s[1]);
  if (kind == "uniform_union" && s.size() == 4)
    return Distribution::uniform_union(s[0], s[1], s[2], s[3]);
  throw UsageError("distribution must be uniform [a,b] or uniform_union [a,b,c,d]");
}

Json cell(int col, int row) { return Json::array({col, row}); }

void read_cell(const Json& j, int& col, int& row) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != 2) throw UsageError("a site is given as [col, row]");
  col = v[0];
  row = v[1];
}

Json number_or_infinity(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number_or_infinity(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw UsageError("expected a number, \"inf\" or \"-inf\"");
  }
  return j.get<double>();
}

template <class T>
void check_range(bool ok, const T& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

Json to_json(const RegionDistributionSpec& s) {
  Json parts = Json::array();
  for (const auto& p : s.parts) {
    Json j;
    j["name"] = p.name;
    j["region"] = {p.region.xmin, p.region.xmax, p.region.ymin, p.region.ymax};
    j["distribution"] = to_json(p.distribution);
    parts.push_back(j);
  }
  return parts;
}

RegionDistributionSpec region_spec_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "uniform") return RegionDistributionSpec::uniform();
    if (name == "asymmetric") return RegionDistributionSpec::asymmetric_halves();
    if (name == "asymmetric_mirrored") return RegionDistributionSpec::asymmetric_halves_mirrored();
    throw UsageError("unknown label preset '" + name + "'");
  }
  if (!j.is_array()) throw UsageError("labels must be a preset name or a list of parts");
  RegionDistributionSpec s;
  for (const Json& p : j) {
    RegionDistributionSpec::Part part;
    part.name = p.value("name", std::string());
    const auto r = p.at("region").get<std::vector<double>>();
    if (r.size() != 4) throw UsageError("region is [xmin, xmax, ymin, ymax]");
    part.region = {r[0], r[1], r[2], r[3]};
    part.distribution = distribution_from_json(p.at("distribution"));
    s.parts.push_back(part);
  }
  return s;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schema"] = "mstperc.config";
  j["schema_version"] = kConfigSchemaVersion;
  j["command"] = c.command;
  j["lattice"] = {{"kind", std::string(to_string(c.lattice.kind))}, {"n", c.lattice.n}};
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  j["labels"] = to_json(c.labels);
  j["inline_values"] = c.inline_values;
  j["field_path"] = c.field_path;
  j["svg"] = c.svg;
  j["source"] = cell(c.source_col, c.source_row);
  j["stop"] = c.stop;
  j["stop_sites"] = c.stop_sites;
  j["stop_level"] = c.stop_level;
  j["target"] = cell(c.target_col, c.target_row);
  j["lambda"] = number_or_infinity(c.lambda);
  j["rate_trials"] = c.rate_trials;
  j["switch_mode"] = c.switch_mode;
  j["horizon"] = c.horizon;
  j["eps_grid"] = c.eps_grid;
  j["quad"] = {c.quad.x0, c.quad.y0, c.quad.x1, c.quad.y1};
  j["eps"] = c.eps;
  j["invasion"] = c.invasion;
  j["endpoints"] = c.endpoints;
  j["x"] = cell(c.x_col, c.x_row);
  j["y"] = cell(c.y_col, c.y_row);
  j["baseline_labels"] = to_json(c.baseline_labels);
  j["baseline_seed"] = c.baseline_seed ? Json(*c.baseline_seed) : Json(nullptr);
  j["r0"] = c.r0;
  j["radii"] = c.radii;
  j["delta"] = c.delta;
  j["k_min"] = c.k_min;
  j["touch_radius"] = c.touch_radius;
  j["excursion"] = c.excursion;
  j["touch_lambda"] = c.touch_lambda;
  return j;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known{
      "schema",     "schema_version", "command",      "lattice",     "seed",
      "trials",     "threads",        "output_dir",   "labels",      "inline_values",
      "field_path", "svg",            "source",       "stop",        "stop_sites",
      "stop_level", "target",         "lambda",       "rate_trials", "switch_mode",
      "horizon",    "eps_grid",       "quad",         "eps",         "invasion",
      "endpoints",  "x",              "y",            "baseline_labels", "baseline_seed",
      "r0",         "radii",          "delta",        "k_min",       "touch_radius",
      "excursion",  "touch_lambda"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw UsageError("unknown config key '" + k + "'");
  if (j.contains("schema_version") && j["schema_version"].get<int>() > kConfigSchemaVersion)
    throw UsageError("config schema version is newer than this build");

  RunConfig c;
  try {
    auto get = [&](const char* key, auto& out) {
      if (j.contains(key)) out = j[key].get<std::decay_t<decltype(out)>>();
    };
    get("command", c.command);
    if (j.contains("lattice")) {
      const Json& l = j["lattice"];
      if (l.contains("kind")) c.lattice.kind = lattice_kind_from_string(l["kind"].get<std::string>());
      if (l.contains("n")) c.lattice.n = l["n"].get<int>();
    }
    get("seed", c.seed);
    get("trials", c.trials);
    get("threads", c.threads);
    get("output_dir", c.output_dir);
    if (j.contains("labels")) c.labels = region_spec_from_json(j["labels"]);
    get("inline_values", c.inline_values);
    get("field_path", c.field_path);
    get("svg", c.svg);
    if (j.contains("source")) read_cell(j["source"], c.source_col, c.source_row);
    get("stop", c.stop);
    get("stop_sites", c.stop_sites);
    get("stop_level", c.stop_level);
    if (j.contains("target")) read_cell(j["target"], c.target_col, c.target_row);
    if (j.contains("lambda")) c.lambda = read_number_or_infinity(j["lambda"]);
    get("rate_trials", c.rate_trials);
    get("switch_mode", c.switch_mode);
    get("horizon", c.horizon);
    get("eps_grid", c.eps_grid);
    if (j.contains("quad")) {
      const auto q = j["quad"].get<std::vector<double>>();
      if (q.size() != 4) throw UsageError("quad is [x0, y0, x1, y1]");
      c.quad = {q[0], q[1], q[2], q[3]};
    }
    get("eps", c.eps);
    get("invasion", c.invasion);
    get("endpoints", c.endpoints);
    if (j.contains("x")) read_cell(j["x"], c.x_col, c.x_row);
    if (j.contains("y")) read_cell(j["y"], c.y_col, c.y_row);
    if (j.contains("baseline_labels")) c.baseline_labels = region_spec_from_json(j["baseline_labels"]);
    if (j.contains("baseline_seed") && !j["baseline_seed"].is_null())
      c.baseline_seed = j["baseline_seed"].get<std::uint64_t>();
    get("r0", c.r0);
    get("radii", c.radii);
    get("delta", c.delta);
    get("k_min", c.k_min);
    get("touch_radius", c.touch_radius);
    get("excursion", c.excursion);
    get("touch_lambda", c.touch_lambda);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void RunConfig::validate() const {
  const auto& names = command_names();
  check_range(std::find(names.begin(), names.end(), command) != names.end(),
              "unknown command '" + command + "'");
  try {
    lattice.validate();
    if (labels.parts.empty() || baseline_labels.parts.empty())
      throw std::invalid_argument("label specs need at least one part");
    for (const auto& p : labels.parts) p.distribution.validate();
    for (const auto& p : baseline_labels.parts) p.distribution.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const int n = lattice.n;
  auto inside = [n](int c, int r) { return c >= 0 && c < n && r >= 0 && r < n; };
  check_range(trials >= 1, "trials must be positive");
  check_range(threads >= 1, "threads must be positive");
  check_range(rate_trials >= 1, "rate_trials must be positive");
  check_range(inside(source_col, source_row), "source outside the lattice");
  check_range(inside(target_col, target_row), "target outside the lattice");
  check_range(stop == "full" || stop == "sites" || stop == "level" || stop == "target",
              "stop must be full, sites, level or target");
  check_range(stop_sites >= 1, "stop_sites must be positive");
  check_range(stop_level >= 0.0 && stop_level <= 1.0, "stop_level must lie in [0,1]");
  check_range(!std::isnan(lambda), "lambda must be a number");
  check_range(switch_mode == "resample" || switch_mode == "open_only",
              "switch_mode must be resample or open_only");
  check_range(std::isfinite(horizon) && horizon >= 0.0, "horizon must be finite and >= 0");
  check_range(!eps_grid.empty(), "eps_grid must not be empty");
  for (double e : eps_grid) check_range(e > 0.0 && e <= 1.0, "eps_grid values must lie in (0,1]");
  check_range(quad.x0 >= 0.0 && quad.x0 <= quad.x1 && quad.x1 <= 1.0 && quad.y0 >= 0.0 &&
                  quad.y0 <= quad.y1 && quad.y1 <= 1.0,
              "quad must lie in the unit square with x0 <= x1, y0 <= y1");
  check_range(eps > 0.0 && eps < 0.5, "eps must lie in (0, 1/2)");
  check_range(endpoints == "midline" || endpoints == "custom", "endpoints must be midline or custom");
  check_range(r0 >= 0, "r0 must be >= 0");
  check_range(!radii.empty(), "radii must not be empty");
  for (std::size_t i = 0; i < radii.size(); ++i)
    check_range(radii[i] > r0 && (i == 0 || radii[i] > radii[i - 1]),
                "radii must increase and exceed r0");
  check_range(delta > 0.0 && delta <= 1.0, "delta must lie in (0,1]");
  check_range(k_min >= 1, "k_min must be positive");
  check_range(touch_radius >= 1, "touch_radius must be positive");
  check_range(excursion > 0.0 && excursion <= 1.0, "excursion must lie in (0,1]");
  check_range(std::isfinite(touch_lambda), "touch_lambda must be finite");

  if (command == "asymmetry") {
    check_range(n % 2 == 1, "asymmetry needs an odd number of sites per side");
    AsymmetrySpec s;
    s.kind = lattice.kind;
    s.n = n - 1;
    s.eps = eps;
    s.trials = trials;
    s.labels = labels;
    s.endpoints = endpoints == "custom" ? EndpointReading::Custom : EndpointReading::MidlineEnds;
    s.x_col = x_col, s.x_row = x_row, s.y_col = y_col, s.y_row = y_row;
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (command == "armexp")
    for (int R : radii) check_range(2 * R + 1 <= 46000, "radius too large");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(c).dump(2) << '\n';
}

// --- field artifacts -------------------------------------------------------

Json field_to_json(const LabelField& f, bool inline_values) {
  Json j;
  j["schema"] = "mstperc.field";
  j["schema_version"] = kFieldSchemaVersion;
  j["lattice"] = {{"kind", std::string(to_string(f.graph().kind()))}, {"n", f.graph().n()}};
  j["seed"] = f.seed();
  j["labels"] = to_json(f.source());
  j["carriers"] = f.size();
  if (inline_values) j["values"] = f.values();
  return j;
}

LabelField field_from_json(const Json& j) {
  try {
    if (j.value("schema", std::string()) != "mstperc.field")
      throw std::runtime_error("not a field artifact");
    const LatticeSpec spec{lattice_kind_from_string(j.at("lattice").at("kind").get<std::string>()),
                           j.at("lattice").at("n").get<int>()};
    const auto g = make_lattice(spec);
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    const RegionDistributionSpec labels = region_spec_from_json(j.at("labels"));
    if (!j.contains("values")) return sample_regional(g, labels, seed);
    auto values = j["values"].get<std::vector<double>>();
    if (values.size() != g->num_carriers())
      throw std::runtime_error("field artifact has the wrong number of values");
    return make_field(g, std::move(values), seed, labels);
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("bad field artifact: ") + e.what());
  }
}

LabelField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read field " + path.string());
  return field_from_json(Json::parse(in));
}

// --- rendering -------------------------------------------------------------

std::string render_svg(const LatticeGraph& g, const std::vector<EdgeId>& edges,
                       const std::vector<SvgPath>& paths, double midline_eps) {
  const double size = 720.0, margin = 20.0, scale = size - 2 * margin;
  auto px = [&](SiteId s) {
    const auto [x, y] = g.position(s);
    return std::pair{margin + x * scale, margin + (1.0 - y) * scale};
  };
  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
    << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double r = std::max(0.3, 0.15 * scale / g.n());
  o << "<g class=\"sites\" fill=\"#7f8c8d\">\n";
  for (SiteId s = 0; s < static_cast<SiteId>(g.num_sites()); ++s) {
    const auto [x, y] = px(s);
    o << "<circle class=\"site\" cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\"/>\n";
  }
  o << "</g>\n<g class=\"edges\" stroke=\"#2c3e50\" stroke-width=\"1\">\n";
  for (EdgeId e : edges) {
    const auto [x1, y1] = px(g.edge(e).a);
    const auto [x2, y2] = px(g.edge(e).b);
    o << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2 << "\"/>\n";
  }
  o << "</g>\n";
  if (midline_eps > 0.0) {
    const double h = midline_eps * scale;
    o << "<line class=\"midline\" x1=\"" << margin + 0.5 * scale << "\" y1=\"" << margin << "\" x2=\""
      << margin + 0.5 * scale << "\" y2=\"" << margin + scale
      << "\" stroke=\"#27ae60\" stroke-dasharray=\"4 3\"/>\n";
    for (double y : {margin, margin + scale})
      o << "<rect class=\"neighbourhood\" x=\"" << margin + 0.5 * scale - h << "\" y=\"" << y - h
        << "\" width=\"" << 2 * h << "\" height=\"" << 2 * h
        << "\" fill=\"none\" stroke=\"#27ae60\"/>\n";
  }
  for (const auto& p : paths) {
    o << "<polyline class=\"path\" fill=\"none\" stroke=\"" << p.color
      << "\" stroke-width=\"2\" points=\"";
    for (SiteId s : p.sites) {
      const auto [x, y] = px(s);
      o << x << ',' << y << ' ';
    }
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace mstperc
