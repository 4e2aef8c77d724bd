#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mstperc/cli.hpp"
#include "mstperc/experiments.hpp"
#include "mstperc/forest.hpp"
#include "mstperc/percolation.hpp"

namespace py = pybind11;
using namespace mstperc;

namespace {

using GraphPtr = std::shared_ptr<LatticeGraph>;

GraphPtr new_lattice(LatticeKind kind, int n) {
  return std::const_pointer_cast<LatticeGraph>(make_lattice({kind, n}));
}

RegionDistributionSpec preset(const std::string& name) {
  return region_spec_from_json(Json(name));
}

InvasionStop stop_from(std::optional<std::int64_t> sites, std::optional<double> level,
                       std::optional<SiteId> target) {
  const int given = sites.has_value() + level.has_value() + target.has_value();
  if (given > 1) throw std::invalid_argument("give at most one of sites, level, target");
  if (sites) return InvasionStop::after_sites(*sites);
  if (level) return InvasionStop::at_level(*level);
  if (target) return InvasionStop::at_target(*target);
  return InvasionStop::full();
}

py::dict summary_dict(const Summary& s) {
  py::dict d;
  d["count"] = s.count;
  d["mean"] = s.mean;
  d["std_error"] = s.std_error;
  return d;
}

py::dict comparison_dict(const Comparison& c) {
  py::dict d;
  d["diff"] = c.diff;
  d["std_error"] = c.std_error;
  d["p_greater"] = c.p_greater;
  d["p_less"] = c.p_less;
  d["p_two_sided"] = c.p_two_sided;
  d["ci"] = py::make_tuple(c.ci_low, c.ci_high);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimal spanning trees on critical percolation lattices";
  m.attr("__version__") = std::string(library_version());

  py::enum_<LatticeKind>(m, "LatticeKind")
      .value("SquareBond", LatticeKind::SquareBond)
      .value("TriangularSite", LatticeKind::TriangularSite);

  py::class_<LatticeGraph, GraphPtr>(m, "Lattice")
      .def(py::init(&new_lattice), py::arg("kind"), py::arg("n"))
      .def_property_readonly("kind", &LatticeGraph::kind)
      .def_property_readonly("n", &LatticeGraph::n)
      .def_property_readonly("num_sites", &LatticeGraph::num_sites)
      .def_property_readonly("num_edges", &LatticeGraph::num_edges)
      .def_property_readonly("num_carriers", &LatticeGraph::num_carriers)
      .def("site_at", &LatticeGraph::site_at, py::arg("col"), py::arg("row"))
      .def("edge", [](const LatticeGraph& g, EdgeId e) {
        if (e < 0 || static_cast<std::size_t>(e) >= g.num_edges()) throw py::index_error();
        return py::make_tuple(g.edge(e).a, g.edge(e).b);
      })
      .def("position", [](const LatticeGraph& g, SiteId s) {
        if (s < 0 || static_cast<std::size_t>(s) >= g.num_sites()) throw py::index_error();
        return g.position(s);
      })
      .def("is_original", &LatticeGraph::is_original);

  py::class_<LabelField>(m, "LabelField")
      .def_property_readonly("lattice", [](const LabelField& f) {
        return std::const_pointer_cast<LatticeGraph>(f.graph_ptr());
      })
      .def_property_readonly("seed", &LabelField::seed)
      .def_property_readonly("values", &LabelField::values)
      .def("__len__", &LabelField::size)
      .def("__getitem__", [](const LabelField& f, CarrierId c) {
        if (c < 0 || static_cast<std::size_t>(c) >= f.size()) throw py::index_error();
        return f[c];
      })
      .def("edge_label", &LabelField::edge_label);

  m.def("sample_uniform", [](GraphPtr g, std::uint64_t seed) { return sample_uniform(g, seed); },
        py::arg("lattice"), py::arg("seed"));
  m.def("sample_regional",
        [](GraphPtr g, const std::string& labels, std::uint64_t seed) {
          return sample_regional(g, preset(labels), seed);
        },
        py::arg("lattice"), py::arg("labels"), py::arg("seed"),
        "labels: uniform, asymmetric or asymmetric_mirrored");
  m.def("make_field",
        [](GraphPtr g, std::vector<double> values) { return make_field(g, std::move(values)); },
        py::arg("lattice"), py::arg("values"));

  py::class_<MinimaxPath>(m, "MinimaxPath")
      .def_readonly("sites", &MinimaxPath::sites)
      .def_readonly("edges", &MinimaxPath::edges)
      .def_readonly("bottleneck", &MinimaxPath::bottleneck);

  py::class_<SpanningForest>(m, "SpanningForest")
      .def_property_readonly("edges", &SpanningForest::edges)
      .def_property_readonly("spanning", &SpanningForest::spanning)
      .def("contains", &SpanningForest::contains)
      .def("degree", &SpanningForest::degree)
      .def("path", &SpanningForest::path, py::arg("x"), py::arg("y"));

  m.def("mst", &mst, py::arg("field"));
  m.def("reverse_delete_tree", &reverse_delete_tree, py::arg("field"));
  m.def("cycle_rule_check", &cycle_rule_check, py::arg("field"), py::arg("tree"));
  m.def("invasion_tree",
        [](const LabelField& f, SiteId source, std::optional<std::int64_t> sites,
           std::optional<double> level, std::optional<SiteId> target) {
          return invasion_tree(f, source, stop_from(sites, level, target));
        },
        py::arg("field"), py::arg("source"), py::kw_only(), py::arg("sites") = py::none(),
        py::arg("level") = py::none(), py::arg("target") = py::none());

  py::class_<ClusterTree>(m, "ClusterTree")
      .def_readonly("p", &ClusterTree::p)
      .def_readonly("num_vertices", &ClusterTree::num_vertices)
      .def_readonly("vertex_of", &ClusterTree::vertex_of)
      .def("link_labels", &ClusterTree::link_labels)
      .def_property_readonly("links", [](const ClusterTree& t) {
        py::list out;
        for (const auto& l : t.links) out.append(py::make_tuple(l.a, l.b, l.edge, l.label));
        return out;
      });
  m.def("cluster_tree", &cluster_tree, py::arg("field"), py::arg("p"));

  m.def("has_crossing",
        [](const LabelField& f, double p) { return has_crossing(f, Quad::whole(), p); },
        py::arg("field"), py::arg("p"), "Open left-right crossing of the whole lattice at level p.");
  m.def("pivotal_sites",
        [](const LabelField& f, double p) { return pivotal_sites(f, Quad::whole(), p); },
        py::arg("field"), py::arg("p"));

  m.def("estimate_alpha4",
        [](LatticeKind kind, int r0, int R, std::int64_t trials, std::uint64_t seed, int threads) {
          const Estimate e = estimate_alpha4({kind, 2 * R + 1}, r0, R, trials, seed, threads);
          return py::make_tuple(e.estimate, e.std_error);
        },
        py::arg("kind"), py::arg("r0"), py::arg("R"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1, "Four-arm probability from radius r0 to R; (estimate, std_error).");
  m.def("rate_r", [](double eta, const Alpha4Function& a) { return rate_r(eta, a); },
        py::arg("eta"), py::arg("alpha4"));
  m.def("lambda_threshold",
        [](double lambda, double eta, double rate) { return lambda_level(lambda, eta, rate).p; },
        py::arg("lambda_"), py::arg("eta"), py::arg("rate"));

  m.def("asymmetry_experiment",
        [](int n, double eps, std::int64_t trials, std::uint64_t seed, const std::string& labels,
           int threads) {
          AsymmetrySpec s;
          s.n = n;
          s.eps = eps;
          s.trials = trials;
          s.seed = seed;
          s.labels = preset(labels);
          s.threads = threads;
          ExperimentReport r;
          {
            py::gil_scoped_release release;
            r = asymmetry_experiment(s, AsymmetrySpec::baseline_of(s));
          }
          py::dict d;
          d["right_fraction"] = summary_dict(r.arm.right_fraction);
          d["left_fraction"] = summary_dict(r.arm.left_fraction);
          d["midline_crossings"] = summary_dict(r.arm.midline_crossings);
          d["baseline_midline_crossings"] = summary_dict(r.base.midline_crossings);
          d["right_vs_left"] = comparison_dict(r.right_vs_left);
          d["crossings_vs_baseline"] = comparison_dict(r.midline_crossings);
          d["right_exceeds_left"] = r.right_exceeds_left;
          d["fewer_midline_crossings"] = r.fewer_midline_crossings;
          return d;
        },
        py::arg("n"), py::arg("eps"), py::arg("trials"), py::arg("seed"),
        py::arg("labels") = "asymmetric", py::arg("threads") = 1,
        "Square-lattice path-side statistics against a uniform baseline.");

  m.def("_run_command",
        [](const std::string& config, bool write_files) {
          const RunConfig c = config_from_json(Json::parse(config));
          RunOutcome out;
          {
            py::gil_scoped_release release;
            out = run_command(c, write_files);
          }
          return out.report.dump();
        },
        py::arg("config"), py::arg("write_files"));
  m.def("_replay",
        [](const std::string& report, int threads) {
          const Json j = Json::parse(report);
          py::gil_scoped_release release;
          return replay_report(j, threads);
        },
        py::arg("report"), py::arg("threads"));
  m.def("_default_config", [] { return to_json(RunConfig{}).dump(); });

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
}
