// Command-line front end: single cell solves, scenario sweeps, the
// expectation suite, stencil calibration reports, and SVG re-rendering of
// stored label artifacts.
//
// Exit codes: 0 success, 1 expectation failure, 2 solver error, 3 config
// error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/grid.hpp"
#include "voidhom/harness.hpp"

namespace {

using namespace voidhom;

struct GlobalOptions {
  std::string out_dir = "out";
  int jobs = 0;        // 0 -> hardware concurrency
  int spacing = 0;     // cells per rho; 0 -> keep config value
  int stencil = 0;     // 8 or 16; 0 -> keep config value
};

int effective_jobs(const GlobalOptions& g) {
  if (g.jobs > 0) return g.jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& scenario, const std::string& config_path,
                             const GlobalOptions& g) {
  if (scenario.empty() == config_path.empty()) {
    throw ConfigError("pass exactly one of --scenario NAME or --config FILE");
  }
  ExperimentConfig c = scenario.empty() ? parse_config_text(read_file(config_path))
                                        : scenario_config(scenario);
  if (g.spacing > 0) {
    c.cells_per_rho = g.spacing;
    c.cells_per_period = 0;
  }
  if (g.stencil > 0) c.stencil = g.stencil;
  return c;
}

template <typename T>
void slice_to(std::vector<T>& list, int index, const char* path) {
  if (list.empty()) return;
  if (index < 0 || index >= int(list.size())) {
    throw ConfigError(std::string(path) + ": index " + std::to_string(index) +
                      " out of range [0, " + std::to_string(list.size()) + ")");
  }
  T kept = list[size_t(index)];
  list.assign(1, kept);
}

void print_report(const ExperimentReport& report) {
  for (const auto& d : report.data) {
    std::printf("%s  %s  estimate %.12g  spread %.12g  budget %.12g", report.config.scenario.c_str(),
                d.datum.c_str(), d.estimate.value, d.estimate.spread, d.budget);
    if (d.companion_2g) {
      std::printf("  2g %.12g  gap %.12g", *d.companion_2g, d.gap_vs_2g ? *d.gap_vs_2g : 0.0);
    }
    std::printf("\n");
  }
  for (const auto& e : report.expectations) {
    std::printf("  [%s] %s%s%s\n", e.pass ? "PASS" : "FAIL", e.name.c_str(),
                e.detail.empty() ? "" : ": ", e.detail.c_str());
  }
}

int run_cell(const std::string& scenario, const std::string& config_path, const GlobalOptions& g,
             int datum, int rho_index, int scale_index) {
  ExperimentConfig c = load_config(scenario, config_path, g);
  slice_to(c.nu_list, c.nu_list.empty() ? 0 : datum, "/nu_list");
  slice_to(c.xi_list, c.xi_list.empty() ? 0 : datum, "/xi_list");
  slice_to(c.rho_list, c.rho_list.empty() ? 0 : rho_index, "/rho_list");
  if (scale_index >= 0) {
    slice_to(c.eps_list, scale_index, "/eps_list");
    slice_to(c.r_list, scale_index, "/r_list");
  }
  c.expectations.clear();  // sweep-level checks do not apply to one solve
  ExperimentReport report = run_experiment(c, g.out_dir, effective_jobs(g));
  std::fputs(report.csv().c_str(), stdout);
  print_report(report);
  return 0;
}

int run_sweep(const std::string& scenario, const std::string& config_path,
              const GlobalOptions& g) {
  ExperimentConfig c = load_config(scenario, config_path, g);
  ExperimentReport report = run_experiment(c, g.out_dir, effective_jobs(g));
  print_report(report);
  std::printf("%s: %s\n", report.config.scenario.c_str(), report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

int run_suite_cmd(std::vector<std::string> names, const GlobalOptions& g) {
  if (names.empty()) names = scenario_names();
  bool all_pass = false;
  std::vector<ExperimentReport> reports = run_suite(names, g.out_dir, effective_jobs(g), &all_pass);
  for (const auto& report : reports) {
    std::printf("[%s] %s\n", report.pass ? "PASS" : "FAIL", report.config.scenario.c_str());
    for (const auto& e : report.expectations) {
      if (!e.pass) std::printf("       %s: %s\n", e.name.c_str(), e.detail.c_str());
    }
  }
  std::printf("suite: %s (%zu scenarios)\n", all_pass ? "PASS" : "FAIL", reports.size());
  return all_pass ? 0 : 1;
}

int run_calibrate(const GlobalOptions& g) {
  std::vector<int> neighborhoods = g.stencil > 0 ? std::vector<int>{g.stencil}
                                                 : std::vector<int>{4, 8, 16};
  for (int n : neighborhoods) {
    Stencil st = make_stencil(n);
    double tau = stencil_calibration(st);
    std::printf("stencil %d: %zu arcs, tau_stencil %.12g\n", n, st.offsets.size(), tau);
    std::printf("  axis density %.12g, diagonal density %.12g\n",
                straight_cut_density(st, {1.0, 0.0}),
                straight_cut_density(st, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
    for (int k : st.representative_indices()) {
      std::printf("  offset (%+d,%+d)  weight %.12g\n", st.offsets[size_t(k)].x,
                  st.offsets[size_t(k)].y, st.weights[size_t(k)]);
    }
  }
  return 0;
}

int run_render(const std::string& meta_path, const GlobalOptions& g, bool explicit_out) {
  std::string svg = render_stored_labels(meta_path);
  std::filesystem::path meta(meta_path);
  std::string stem = meta.filename().string();
  const std::string suffix = ".meta.json";
  if (stem.size() > suffix.size() && stem.substr(stem.size() - suffix.size()) == suffix) {
    stem = stem.substr(0, stem.size() - suffix.size());
  } else {
    stem = meta.stem().string();
  }
  std::filesystem::path dir = explicit_out ? std::filesystem::path(g.out_dir)
                                           : meta.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path out = dir / (stem + ".svg");
  std::ofstream(out, std::ios::binary) << svg;
  std::printf("%s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective bulk, void-surface and jump-surface energy densities"
               " via discrete cell formulas"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out", g.out_dir, "Output directory for reports and artifacts")
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Parallel solves (0 = hardware concurrency)")
      ->capture_default_str();
  app.add_option("--spacing", g.spacing, "Cells per rho (overrides the config spacing rule)");
  app.add_option("--stencil", g.stencil, "Cut-metric stencil")->check(CLI::IsMember({8, 16}));

  std::string scenario, config_path;
  int datum = 0, rho_index = 0, scale_index = -1;
  CLI::App* cell = app.add_subcommand("cell", "Run one cell solve selected by indices");
  cell->add_option("--scenario", scenario, "Built-in scenario name");
  cell->add_option("--config", config_path, "Experiment config JSON file");
  cell->add_option("--datum", datum, "Datum index into nu_list / xi_list")->capture_default_str();
  cell->add_option("--rho", rho_index, "Index into rho_list")->capture_default_str();
  cell->add_option("--scale", scale_index, "Index into eps_list / r_list (-1 = all)")
      ->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Run one full experiment");
  sweep->add_option("--scenario", scenario, "Built-in scenario name");
  sweep->add_option("--config", config_path, "Experiment config JSON file");

  std::vector<std::string> suite_names;
  CLI::App* suite = app.add_subcommand("suite", "Run scenarios and check expectations");
  suite->add_option("--scenario", suite_names, "Scenario names (default: all built-ins)");

  app.add_subcommand("calibrate", "Print stencil calibration report");

  std::string meta_path;
  CLI::App* render = app.add_subcommand("render", "Re-emit the SVG for a stored label artifact");
  render->add_option("result", meta_path, "Path to a stored .meta.json artifact")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cell->parsed()) return run_cell(scenario, config_path, g, datum, rho_index, scale_index);
    if (sweep->parsed()) return run_sweep(scenario, config_path, g);
    if (app.get_subcommand("suite")->parsed()) return run_suite_cmd(suite_names, g);
    if (app.get_subcommand("calibrate")->parsed()) return run_calibrate(g);
    if (render->parsed()) {
      return run_render(meta_path, g, app.count("--out") > 0);
    }
  } catch (const voidhom::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
