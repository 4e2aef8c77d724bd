#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mstperc/labels.hpp"
#include "mstperc/lattice.hpp"
#include "mstperc/percolation.hpp"

namespace mstperc {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kFieldSchemaVersion = 1;
std::string_view library_version();

/// Bad configuration or command line. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run depends on. Commands ignore the parameters they do not
/// use, but every field is validated and serialized.
struct RunConfig {
  std::string command = "generate";
  LatticeSpec lattice{LatticeKind::TriangularSite, 32};
  std::uint64_t seed = 1;
  std::int64_t trials = 100;
  int threads = 1;
  std::string output_dir = "mstperc_out";

  // label fields
  RegionDistributionSpec labels = RegionDistributionSpec::uniform();
  bool inline_values = true;
  std::string field_path;  // load this field artifact instead of sampling
  bool svg = true;

  // forest commands
  int source_col = 0, source_row = 0;
  std::string stop = "full";  // full | sites | level | target
  std::int64_t stop_sites = 1;
  double stop_level = 1.0;
  int target_col = 0, target_row = 0;
  double lambda = 0.0;  // cluster tree level; +inf allowed

  // near-critical
  std::int64_t rate_trials = 4000;
  std::string switch_mode = "resample";  // resample | open_only
  double horizon = 1.0;                  // clocks ring at rate r(eta)
  std::vector<double> eps_grid{0.5, 0.25, 0.125};
  Quad quad = Quad::whole();

  // asymmetry
  double eps = 1.0 / 16.0;
  bool invasion = false;
  std::string endpoints = "midline";  // midline | custom
  int x_col = 0, x_row = 0, y_col = 0, y_row = 0;
  RegionDistributionSpec baseline_labels = RegionDistributionSpec::uniform();
  std::optional<std::uint64_t> baseline_seed;  // derived from seed when absent

  // arm exponent
  int r0 = 0;
  std::vector<int> radii{4, 8, 16};

  // topology
  double delta = 0.125;
  int k_min = 5;
  int touch_radius = 2;
  double excursion = 0.125;
  double touch_lambda = 2.0;

  /// Throws UsageError.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& command_names();

Json to_json(const RunConfig& c);
/// Unknown keys and wrong types are UsageErrors.
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& c, const std::filesystem::path& path);

Json to_json(const RegionDistributionSpec& s);
/// Accepts a preset name (uniform, asymmetric, asymmetric_mirrored) or a
/// list of parts.
RegionDistributionSpec region_spec_from_json(const Json& j);

// --- field artifacts -------------------------------------------------------

Json field_to_json(const LabelField& f, bool inline_values);
/// Uses inlined values when present, otherwise regenerates from the seed.
LabelField field_from_json(const Json& j);
LabelField load_field(const std::filesystem::path& path);

// --- rendering -------------------------------------------------------------

struct SvgPath {
  std::vector<SiteId> sites;
  std::string color = "#c0392b";
};

/// Sites as dots, `edges` as segments, optional highlighted paths. With
/// `midline_eps` > 0 the vertical midline and the eps-neighbourhoods of its
/// ends are drawn.
std::string render_svg(const LatticeGraph& g, const std::vector<EdgeId>& edges,
                       const std::vector<SvgPath>& paths = {}, double midline_eps = 0.0);

// --- running ---------------------------------------------------------------

/// A report has the keys schema, schema_version, command, config, seed,
/// status, results, files and metadata. Only metadata depends on the
/// moment of the run.
struct RunOutcome {
  Json report;
  bool ok = true;
};

/// Runs config.command. When `write_files` is set the report, records and
/// renderings go to config.output_dir. Exceptions during the run become a
/// failed report carrying the records completed so far.
RunOutcome run_command(const RunConfig& config, bool write_files = true);

/// The part of a report that must replay bit-identically.
Json reproducible_part(const Json& report);

/// Re-runs the embedded config with `threads` workers and compares.
bool replay_report(const Json& report, int threads);

/// Full command-line entry point. Returns 0 when the run completed, 1 on a
/// runtime failure and 2 on a usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace mstperc
