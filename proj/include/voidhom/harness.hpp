#pragma once

#include <optional>
#include <string>
#include <vector>

#include "voidhom/densities.hpp"
#include "voidhom/geom.hpp"
#include "voidhom/grid.hpp"
#include "voidhom/limits.hpp"
#include "voidhom/report.hpp"

// JSON-configured experiments: scenario library, parallel sweeps over
// (datum, rho, eps-or-r) grids, limit aggregation, deterministic reports.
namespace voidhom {

// Density families a config can reference.  Discrete-geometry-coupled
// parameters (counterexample line width, eps-scaled periods) are resolved
// per run from the run's spacing/eps.
struct DensityConfig {
  std::string family;  // constant | stripes | sin | counterexample |
                       // aniso-l1 | aniso-dip | laminate | quadratic
  double value = 1.0;                   // constant / quadratic coefficient
  double low = 1.0, high = 2.0;         // stripes / laminate phase values
  double base = 1.5, amplitude = 0.5;   // sin
  double cheap = 1.0, expensive = 2.0;  // counterexample
  double period = 1.0;
  Vec2 normal{1.0, 0.0};                // stripes / laminate layer normal
  bool scalar_mode = false;             // antiplane bulk toggle
  bool scale_by_eps = false;            // sweep family g(x / eps)
  double line_halfwidth_cells = 0.5;    // counterexample width, in cells
};

// Declarative pass/fail checks a scenario carries; evaluated against the
// aggregated per-datum estimates.
struct Expectation {
  std::string name;
  std::string datum;     // datum label the check applies to
  std::string quantity;  // estimate | companion-2g | gap-vs-2g
  std::string op;        // close | interval | at-least | at-most
  double value = 0.0;    // close / at-least / at-most target
  double lo = 0.0, hi = 0.0;  // interval bounds
  double rel = 0.0, abs = 0.0;  // close tolerances: abs + rel * |value|
  bool add_budget = false;      // widen by the datum's fit/stencil budget
};

struct ExperimentConfig {
  std::string scenario;
  std::string kind;  // bulk | void | jump | gbv | fqc
  DensityConfig density;
  Shape shape = Shape::Disc;
  std::vector<Vec2> nu_list;   // surface-type data
  std::vector<Mat2> xi_list;   // bulk-type data
  std::vector<double> rho_list;
  std::vector<double> eps_list;  // jump layer half-widths, or density scales
  std::vector<double> r_list;    // growing-window sizes, in periods
  int cells_per_rho = 128;    // spacing = rho / cells_per_rho ...
  int cells_per_period = 0;   // ... unless > 0: spacing = period / cells_per_period
  int stencil = 16;
  double collar_fraction = 0.1;
  int collar_cells = 0;  // when > 0: collar_fraction = collar_cells * spacing / (2 rho)
  int gbv_resolution = 64;
  int fqc_resolution = 64;
  std::vector<Expectation> expectations;
};

// Built-in scenario library; throws ConfigError for unknown names.
ExperimentConfig scenario_config(const std::string& name);
std::vector<std::string> scenario_names();

// Datum labels used in CSV rows and expectation references: "nu=(1;0)",
// "xi=[[0;0];[1;0]]"; FEM cross-check rows are prefixed "fem:".  Components
// use ';' so labels stay single CSV fields.
std::string nu_label(Vec2 nu);
std::string xi_label(const Mat2& xi);

// Config (de)serialization.  parse_config reports violations as ConfigError
// with JSON-pointer-style paths ("/rho_list/1: ...").
ExperimentConfig parse_config_text(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);

// Aggregated outcome for one datum of a scenario.
struct DatumSummary {
  std::string datum;
  LimitEstimate estimate;              // final (outer) limit
  std::vector<LimitEstimate> inner;    // inner stage of a double limit
  std::vector<double> inner_scales;    // outer scales the inner estimates sit at
  double budget = 0.0;                 // tau_stencil * |estimate| + spreads
  // Jump scenarios: the companion void estimate (doubled) and the gap.
  std::optional<double> companion_2g;
  double companion_2g_spread = 0.0;
  std::optional<double> gap_vs_2g;
};

struct ExpectationResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double target = 0.0;  // value, or violated interval endpoint
  double tolerance = 0.0;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  double tau_stencil = 0.0;
  std::vector<CsvRow> rows;  // deterministic order: datum, rho, eps/r
  std::vector<DatumSummary> data;
  std::vector<ExpectationResult> expectations;
  bool pass = true;  // all expectations hold

  std::string csv() const;
  std::string summary_json() const;
};

// Runs every cell solve of the config (parallel over independent runs,
// `jobs` >= 1), aggregates limits, evaluates expectations.  Output is
// independent of `jobs`.  When out_dir is non-empty, writes
// {scenario}.csv, {scenario}.summary.json, {scenario}.config.json and
// per-run label/field artifacts into it.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int jobs);

// Runs the named scenarios (ConfigError when the list is empty); returns the
// reports and sets `all_pass`.  Used by the CLI `suite` subcommand, which
// exits 1 when a scenario's expectations fail.
std::vector<ExperimentReport> run_suite(const std::vector<std::string>& names,
                                        const std::string& out_dir, int jobs, bool* all_pass);

// Re-emits the SVG for a stored label artifact (.meta.json + .pgm pair).
std::string render_stored_labels(const std::string& meta_path);

}  // namespace voidhom
