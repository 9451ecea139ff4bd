#include "voidhom/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <thread>

#include "json.hpp"
#include "voidhom/elastic.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/jump.hpp"
#include "voidhom/relax.hpp"
#include "voidhom/surface.hpp"

namespace voidhom {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Run geometry helpers

double spacing_for(const ExperimentConfig& c, double rho, double eps) {
  double h;
  if (c.cells_per_period > 0) {
    double period = c.density.period * (c.density.scale_by_eps ? eps : 1.0);
    h = period / double(c.cells_per_period);
  } else {
    h = rho / double(c.cells_per_rho);
  }
  if (!(h <= rho / 16.0 * (1.0 + 1e-12)))
    throw ConfigError("/cells_per_period: spacing " + format_value(h) +
                      " is coarser than rho/16 at rho " + format_value(rho));
  return h;
}

double collar_for(const ExperimentConfig& c, double rho, double h) {
  double cf = c.collar_fraction;
  if (c.collar_cells > 0) cf = double(c.collar_cells) * h / (2.0 * rho);
  if (!(cf > 0.0) || !(cf < 0.5))
    throw ConfigError("/collar_cells: collar fraction " + format_value(cf) +
                      " outside (0, 1/2) at rho " + format_value(rho));
  return cf;
}

SurfaceDensity surface_density_for(const ExperimentConfig& c, double h, double eps) {
  const DensityConfig& d = c.density;
  if (d.family == "constant") return make_constant_surface(d.value);
  SurfaceDensity g;
  if (d.family == "stripes")
    g = make_stripe_surface(d.low, d.high, d.normal, d.period);
  else if (d.family == "sin")
    g = make_sin_surface(d.base, d.amplitude, d.period);
  else if (d.family == "counterexample")
    return make_counterexample_surface(0.0, d.cheap, d.expensive, d.line_halfwidth_cells * h);
  else if (d.family == "aniso-l1")
    return make_aniso_surface(
        [](Vec2 nu) { return std::abs(nu.x) + std::abs(nu.y); }, 1.0, std::sqrt(2.0));
  else if (d.family == "aniso-dip")
    return make_aniso_surface([](Vec2 nu) { return 2.0 - std::abs(nu.x); }, 1.0, 2.0);
  else
    throw ConfigError("/density/family: '" + d.family + "' is not a surface family");
  if (d.scale_by_eps) g = scale_surface(g, eps);
  return g;
}

BulkDensity bulk_density_for(const ExperimentConfig& c) {
  const DensityConfig& d = c.density;
  if (d.family == "laminate")
    return make_laminate_bulk(d.low, d.high, d.normal, d.period, d.scalar_mode);
  if (d.family == "quadratic") return make_quadratic_bulk(d.value, d.scalar_mode);
  throw ConfigError("/density/family: '" + d.family + "' is not a bulk family");
}

// Jump scenarios fall back to the layer-width rule eps in {4, 8} * spacing
// when no eps_list is configured.
std::vector<double> jump_eps_for(const ExperimentConfig& c, double rho) {
  if (!c.eps_list.empty()) return c.eps_list;
  double h = spacing_for(c, rho, 1.0);
  return {4.0 * h, 8.0 * h};
}

// ---------------------------------------------------------------------------
// Task pool: fixed task list, atomic cursor, outcomes land in preallocated
// slots, so results are independent of the worker count.

void run_tasks(const std::vector<std::function<void()>>& tasks,
               std::vector<std::exception_ptr>& errors, int jobs) {
  errors.assign(tasks.size(), nullptr);
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, int(tasks.size()) > 0 ? int(tasks.size()) : 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(size_t(jobs));
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Per-run bookkeeping

struct RunOutcome {
  CsvRow row;
  double value = 0.0;
  std::shared_ptr<const GridDomain> domain;
  std::optional<LabelField> labels;
  std::vector<double> displacement;
  bool scalar_field = false;
  std::string artifact_base;  // empty = no label/field artifact
};

LimitEstimate single_value_estimate(double v) {
  LimitEstimate e;
  e.value = v;
  e.spread = 0.0;
  e.model_order = 0;
  e.extrapolated = false;
  return e;
}

LimitEstimate estimate_over(SeriesKind kind, const std::vector<double>& scales,
                            const std::vector<double>& values) {
  if (values.size() == 1) return single_value_estimate(values[0]);
  ScaleSeries s;
  s.kind = kind;
  s.scales = scales;
  s.values = values;
  return estimate_limit(s);
}

// Two-stage aggregation for eps-swept runs.  Multi-point stages go through
// double_limit unchanged; one-point stages (single cell solves requested via
// CLI index slicing) pass through as their own estimate with zero fit spread,
// keeping the limits-module "too few points" contract intact for real sweeps.
void aggregate_stages(const std::vector<double>& outer_scales,
                      const std::vector<ScaleSeries>& inner, DatumSummary* s) {
  bool one_point_stage = false;
  for (const ScaleSeries& series : inner) one_point_stage |= series.values.size() < 2;
  if (outer_scales.size() >= 2 && !one_point_stage) {
    DoubleLimitEstimate dl = double_limit(outer_scales, inner);
    s->estimate.value = dl.value;
    s->estimate.spread = dl.spread;
    s->estimate.model_order = dl.outer.model_order;
    s->estimate.extrapolated = dl.outer.extrapolated;
    s->inner = dl.inner;
    s->inner_scales = outer_scales;
    return;
  }
  std::vector<LimitEstimate> per_stage;
  std::vector<double> stage_values;
  double worst_inner = 0.0;
  for (const ScaleSeries& series : inner) {
    LimitEstimate e = series.values.size() == 1 ? single_value_estimate(series.values[0])
                                                : estimate_limit(series);
    worst_inner = std::max(worst_inner, e.spread);
    stage_values.push_back(e.value);
    per_stage.push_back(e);
  }
  if (outer_scales.size() == 1) {
    s->estimate = per_stage[0];
  } else {
    s->estimate = estimate_over(SeriesKind::OuterRho, outer_scales, stage_values);
    s->estimate.spread += worst_inner;
  }
  s->inner = std::move(per_stage);
  s->inner_scales = outer_scales;
}

std::string run_suffix(int rho_idx, int eps_idx) {
  std::string s;
  if (rho_idx >= 0) s += "_r" + std::to_string(rho_idx);
  if (eps_idx >= 0) s += "_e" + std::to_string(eps_idx);
  return s;
}

// ---------------------------------------------------------------------------
// Expectation evaluation

const DatumSummary* find_datum(const std::vector<DatumSummary>& data, const std::string& name) {
  for (const DatumSummary& d : data)
    if (d.datum == name) return &d;
  return nullptr;
}

ExpectationResult evaluate_expectation(const Expectation& e,
                                       const std::vector<DatumSummary>& data,
                                       double tau_stencil) {
  ExpectationResult r;
  r.name = e.name;
  const DatumSummary* d = find_datum(data, e.datum);
  if (!d) {
    r.pass = false;
    r.detail = "datum '" + e.datum + "' not present";
    return r;
  }

  double budget = 0.0;
  if (e.quantity == "estimate") {
    r.measured = d->estimate.value;
    budget = d->budget;
  } else if (e.quantity == "companion-2g") {
    if (!d->companion_2g) {
      r.pass = false;
      r.detail = "no companion value for datum '" + e.datum + "'";
      return r;
    }
    r.measured = *d->companion_2g;
    budget = d->companion_2g_spread + tau_stencil * std::abs(*d->companion_2g);
  } else {  // gap-vs-2g
    if (!d->gap_vs_2g) {
      r.pass = false;
      r.detail = "no companion value for datum '" + e.datum + "'";
      return r;
    }
    r.measured = *d->gap_vs_2g;
    budget = d->budget + d->companion_2g_spread +
             tau_stencil * std::abs(d->companion_2g.value_or(0.0));
  }
  if (!e.add_budget) budget = 0.0;

  // `rel` scales the check's natural reference: the target for plain value
  // checks, the companion 2g for gap checks (so "within 5%" means 5% of 2g).
  double rel_base = e.quantity == "gap-vs-2g" ? std::abs(d->companion_2g.value_or(0.0))
                                              : std::abs(e.value);
  if (e.op == "close") {
    r.target = e.value;
    r.tolerance = e.abs + e.rel * rel_base + budget;
    r.pass = std::abs(r.measured - e.value) <= r.tolerance;
  } else if (e.op == "interval") {
    r.pass = r.measured >= e.lo && r.measured <= e.hi;
    r.target = r.measured < e.lo ? e.lo : e.hi;
    r.tolerance = 0.0;
  } else if (e.op == "at-least") {
    r.target = e.value;
    r.tolerance = e.abs + e.rel * rel_base + budget;
    r.pass = r.measured >= e.value - r.tolerance;
  } else {  // at-most: below the target by the margin and budget
    r.target = e.value;
    r.tolerance = e.abs + e.rel * rel_base + budget;
    r.pass = r.measured <= e.value - r.tolerance;
  }
  if (!r.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %s: measured %.12g vs %s %.12g (tolerance %.12g)",
                  e.datum.c_str(), e.quantity.c_str(), r.measured,
                  e.op == "interval" ? "violated bound" : e.op.c_str(), r.target, r.tolerance);
    r.detail = buf;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kind-specific execution

struct Execution {
  std::vector<RunOutcome> runs;
  std::vector<std::function<void()>> tasks;
};

void execute_void(const ExperimentConfig& c, Execution& ex,
                  std::vector<DatumSummary>& data, double tau, int jobs) {
  const bool swept = !c.eps_list.empty();
  struct Key {
    int datum, rho_idx, eps_idx, slot;
  };
  std::vector<Key> keys;
  for (int dn = 0; dn < int(c.nu_list.size()); ++dn)
    for (int ri = 0; ri < int(c.rho_list.size()); ++ri) {
      if (swept) {
        for (int ei = 0; ei < int(c.eps_list.size()); ++ei)
          keys.push_back({dn, ri, ei, int(keys.size())});
      } else {
        keys.push_back({dn, ri, -1, int(keys.size())});
      }
    }
  ex.runs.resize(keys.size());
  for (const Key& k : keys) {
    ex.tasks.push_back([&, k] {
      Vec2 nu = c.nu_list[size_t(k.datum)];
      double rho = c.rho_list[size_t(k.rho_idx)];
      double eps = k.eps_idx >= 0 ? c.eps_list[size_t(k.eps_idx)] : 0.0;
      double h = spacing_for(c, rho, eps);
      auto dom = std::make_shared<const GridDomain>(
          build_grid(c.shape, {0, 0}, rho, h, collar_for(c, rho, h)));
      SurfaceDensity g = surface_density_for(c, h, eps);
      Stencil st = make_stencil(c.stencil);
      SurfaceCellResult res = solve_void_cell(g, dom, {0, 0}, nu, st);
      RunOutcome& out = ex.runs[size_t(k.slot)];
      out.value = res.normalized;
      out.domain = dom;
      out.labels = std::move(res.labels);
      out.artifact_base = "void_d" + std::to_string(k.datum) + run_suffix(k.rho_idx, k.eps_idx);
      out.row = {c.scenario,      "void",         nu_label(nu), rho,
                 eps,             h,              res.raw_energy, res.normalized,
                 tau * std::abs(res.normalized), "mincut"};
    });
  }
  std::vector<std::exception_ptr> errors;
  run_tasks(ex.tasks, errors, jobs);

  for (int dn = 0; dn < int(c.nu_list.size()); ++dn) {
    DatumSummary s;
    s.datum = nu_label(c.nu_list[size_t(dn)]);
    if (swept) {
      std::vector<ScaleSeries> inner(c.rho_list.size());
      for (const Key& k : keys) {
        if (k.datum != dn) continue;
        inner[size_t(k.rho_idx)].kind = SeriesKind::InnerEps;
        inner[size_t(k.rho_idx)].scales.push_back(c.eps_list[size_t(k.eps_idx)]);
        inner[size_t(k.rho_idx)].values.push_back(ex.runs[size_t(k.slot)].value);
      }
      aggregate_stages(c.rho_list, inner, &s);
    } else {
      std::vector<double> values;
      for (const Key& k : keys)
        if (k.datum == dn) values.push_back(ex.runs[size_t(k.slot)].value);
      s.estimate = estimate_over(SeriesKind::OuterRho, c.rho_list, values);
    }
    s.budget = tau * std::abs(s.estimate.value) + s.estimate.spread;
    data.push_back(std::move(s));
  }
}

void execute_jump(const ExperimentConfig& c, Execution& ex,
                  std::vector<DatumSummary>& data, double tau, int jobs) {
  if (c.density.scale_by_eps)
    throw ConfigError(
        "/density/scale_by_eps: layer experiments need an eps-independent "
        "density so the companion flat-interface value is well defined");
  struct Key {
    int datum, rho_idx, eps_idx, slot;  // eps_idx < 0: companion void run
  };
  std::vector<Key> keys;
  std::vector<std::vector<double>> eps_per_rho;
  for (double rho : c.rho_list) eps_per_rho.push_back(jump_eps_for(c, rho));
  for (int dn = 0; dn < int(c.nu_list.size()); ++dn)
    for (int ri = 0; ri < int(c.rho_list.size()); ++ri) {
      for (int ei = 0; ei < int(eps_per_rho[size_t(ri)].size()); ++ei)
        keys.push_back({dn, ri, ei, int(keys.size())});
      keys.push_back({dn, ri, -1, int(keys.size())});
    }
  ex.runs.resize(keys.size());
  for (const Key& k : keys) {
    ex.tasks.push_back([&, k] {
      Vec2 nu = c.nu_list[size_t(k.datum)];
      double rho = c.rho_list[size_t(k.rho_idx)];
      double h = spacing_for(c, rho, 1.0);
      auto dom = std::make_shared<const GridDomain>(
          build_grid(c.shape, {0, 0}, rho, h, collar_for(c, rho, h)));
      SurfaceDensity g = surface_density_for(c, h, 0.0);
      Stencil st = make_stencil(c.stencil);
      RunOutcome& out = ex.runs[size_t(k.slot)];
      if (k.eps_idx >= 0) {
        double eps = eps_per_rho[size_t(k.rho_idx)][size_t(k.eps_idx)];
        JumpCellResult res = solve_jump_cell(g, dom, {0, 0}, nu, eps, st);
        out.value = res.normalized;
        out.domain = dom;
        out.labels = std::move(res.labels);
        out.artifact_base =
            "jump_d" + std::to_string(k.datum) + run_suffix(k.rho_idx, k.eps_idx);
        out.row = {c.scenario,      "jump",         nu_label(nu), rho,
                   eps,             h,              res.raw_energy, res.normalized,
                   tau * std::abs(res.normalized), res.optimizer_flag};
      } else {
        SurfaceCellResult res = solve_void_cell(g, dom, {0, 0}, nu, st);
        out.value = res.normalized;
        out.domain = dom;
        out.labels = std::move(res.labels);
        out.artifact_base = "void_d" + std::to_string(k.datum) + run_suffix(k.rho_idx, -1);
        out.row = {c.scenario,      "void",         nu_label(nu), rho,
                   0.0,             h,              res.raw_energy, res.normalized,
                   tau * std::abs(res.normalized), "mincut"};
      }
    });
  }
  std::vector<std::exception_ptr> errors;
  run_tasks(ex.tasks, errors, jobs);

  for (int dn = 0; dn < int(c.nu_list.size()); ++dn) {
    DatumSummary s;
    s.datum = nu_label(c.nu_list[size_t(dn)]);
    std::vector<ScaleSeries> inner(c.rho_list.size());
    std::vector<double> companion(c.rho_list.size(), 0.0);
    for (const Key& k : keys) {
      if (k.datum != dn) continue;
      if (k.eps_idx >= 0) {
        inner[size_t(k.rho_idx)].kind = SeriesKind::InnerEps;
        inner[size_t(k.rho_idx)].scales.push_back(
            eps_per_rho[size_t(k.rho_idx)][size_t(k.eps_idx)]);
        inner[size_t(k.rho_idx)].values.push_back(ex.runs[size_t(k.slot)].value);
      } else {
        companion[size_t(k.rho_idx)] = ex.runs[size_t(k.slot)].value;
      }
    }
    aggregate_stages(c.rho_list, inner, &s);
    LimitEstimate g_est = estimate_over(SeriesKind::OuterRho, c.rho_list, companion);
    s.budget = tau * std::abs(s.estimate.value) + s.estimate.spread;
    s.companion_2g = 2.0 * g_est.value;
    s.companion_2g_spread = 2.0 * g_est.spread;
    s.gap_vs_2g = s.estimate.value - *s.companion_2g;
    data.push_back(std::move(s));
  }
}

void execute_bulk(const ExperimentConfig& c, Execution& ex,
                  std::vector<DatumSummary>& data, int jobs) {
  const bool growing = !c.r_list.empty();
  struct Key {
    int datum, scale_idx, slot;
  };
  std::vector<Key> keys;
  const size_t nscales = growing ? c.r_list.size() : c.rho_list.size();
  for (int dx = 0; dx < int(c.xi_list.size()); ++dx)
    for (int si = 0; si < int(nscales); ++si) keys.push_back({dx, si, int(keys.size())});
  ex.runs.resize(keys.size());
  for (const Key& k : keys) {
    ex.tasks.push_back([&, k] {
      const Mat2& xi = c.xi_list[size_t(k.datum)];
      double rho, r = 0.0;
      if (growing) {
        r = c.r_list[size_t(k.scale_idx)];
        rho = 0.5 * r * c.density.period;
      } else {
        rho = c.rho_list[size_t(k.scale_idx)];
      }
      double h = spacing_for(c, rho, 1.0);
      auto dom = std::make_shared<const GridDomain>(
          build_grid(c.shape, {0, 0}, rho, h, collar_for(c, rho, h)));
      BulkDensity f = bulk_density_for(c);
      BulkCellResult res = solve_bulk_cell(f, dom, {0, 0}, xi);
      RunOutcome& out = ex.runs[size_t(k.slot)];
      out.value = res.normalized;
      out.domain = dom;
      out.scalar_field = res.scalar_field;
      out.displacement = std::move(res.displacement);
      out.artifact_base = "bulk_d" + std::to_string(k.datum) + run_suffix(k.scale_idx, -1);
      out.row = {c.scenario,
                 "bulk",
                 xi_label(xi),
                 rho,
                 r,
                 h,
                 res.raw_energy,
                 res.normalized,
                 1e-8 * std::max(1.0, std::abs(res.normalized)),
                 "cg"};
    });
  }
  std::vector<std::exception_ptr> errors;
  run_tasks(ex.tasks, errors, jobs);

  for (int dx = 0; dx < int(c.xi_list.size()); ++dx) {
    DatumSummary s;
    s.datum = xi_label(c.xi_list[size_t(dx)]);
    std::vector<double> values;
    for (const Key& k : keys)
      if (k.datum == dx) values.push_back(ex.runs[size_t(k.slot)].value);
    std::vector<double> scales;
    if (growing) {
      for (double r : c.r_list) scales.push_back(1.0 / r);
    } else {
      scales = c.rho_list;
    }
    s.estimate =
        estimate_over(growing ? SeriesKind::RGrowth : SeriesKind::OuterRho, scales, values);
    s.budget = s.estimate.spread + 1e-8 * std::max(1.0, std::abs(s.estimate.value));
    data.push_back(std::move(s));
  }
}

void execute_gbv(const ExperimentConfig& c, Execution& ex,
                 std::vector<DatumSummary>& data, double tau, int jobs) {
  ex.runs.resize(c.nu_list.size());
  for (int dn = 0; dn < int(c.nu_list.size()); ++dn) {
    ex.tasks.push_back([&, dn] {
      Vec2 nu = c.nu_list[size_t(dn)];
      SurfaceDensity g = surface_density_for(c, 1.0 / double(c.gbv_resolution), 1.0);
      Stencil st = make_stencil(c.stencil);
      double v = gbv_envelope(g, {0, 0}, nu, c.gbv_resolution, st);
      RunOutcome& out = ex.runs[size_t(dn)];
      out.value = v;
      out.row = {c.scenario,
                 "gbv",
                 nu_label(nu),
                 1.0,
                 0.0,
                 1.0 / double(c.gbv_resolution),
                 2.0 * v,
                 v,
                 tau * std::abs(v),
                 "mincut"};
    });
  }
  std::vector<std::exception_ptr> errors;
  run_tasks(ex.tasks, errors, jobs);
  for (int dn = 0; dn < int(c.nu_list.size()); ++dn) {
    DatumSummary s;
    s.datum = nu_label(c.nu_list[size_t(dn)]);
    s.estimate = single_value_estimate(ex.runs[size_t(dn)].value);
    s.budget = tau * std::abs(s.estimate.value);
    data.push_back(std::move(s));
  }
}

void execute_fqc(const ExperimentConfig& c, Execution& ex,
                 std::vector<DatumSummary>& data, int jobs) {
  // Two runs per datum: the closed-form envelope and the FEM cross-check.
  ex.runs.resize(2 * c.xi_list.size());
  for (int dx = 0; dx < int(c.xi_list.size()); ++dx) {
    ex.tasks.push_back([&, dx] {
      const Mat2& xi = c.xi_list[size_t(dx)];
      BulkDensity f = bulk_density_for(c);
      double v = fqc_envelope(f, {0, 0}, xi);
      RunOutcome& out = ex.runs[size_t(dx) * 2];
      out.value = v;
      out.row = {c.scenario, "fqc", xi_label(xi), 0.0, 0.0, 0.0, v, v, 1e-12, "closed-form"};
    });
    ex.tasks.push_back([&, dx] {
      const Mat2& xi = c.xi_list[size_t(dx)];
      BulkDensity f = bulk_density_for(c);
      double v = fqc_crosscheck(f, {0, 0}, xi, c.fqc_resolution);
      RunOutcome& out = ex.runs[size_t(dx) * 2 + 1];
      out.value = v;
      out.row = {c.scenario,
                 "fqc",
                 "fem:" + xi_label(xi),
                 0.5,
                 0.0,
                 1.0 / double(c.fqc_resolution),
                 v,
                 v,
                 1e-8 * std::max(1.0, std::abs(v)),
                 "cg"};
    });
  }
  std::vector<std::exception_ptr> errors;
  run_tasks(ex.tasks, errors, jobs);
  for (int dx = 0; dx < int(c.xi_list.size()); ++dx) {
    for (int variant = 0; variant < 2; ++variant) {
      const RunOutcome& run = ex.runs[size_t(dx) * 2 + size_t(variant)];
      DatumSummary s;
      s.datum = run.row.datum;
      s.estimate = single_value_estimate(run.value);
      s.budget = run.row.tolerance;
      data.push_back(std::move(s));
    }
  }
}

// ---------------------------------------------------------------------------
// Artifact output

void write_artifacts(const ExperimentConfig& c, const Execution& ex, const std::string& out_dir) {
  fs::path dir = fs::path(out_dir) / c.scenario;
  fs::create_directories(dir);
  for (const RunOutcome& run : ex.runs) {
    if (run.artifact_base.empty() || !run.domain) continue;
    if (run.labels) {
      const GridDomain& d = *run.domain;
      write_text_file((dir / (run.artifact_base + ".pgm")).string(), pgm_labels(*run.labels));
      write_text_file((dir / (run.artifact_base + ".svg")).string(), svg_labels(*run.labels));
      json meta;
      meta["scenario"] = c.scenario;
      meta["kind"] = run.row.kind;
      meta["datum"] = run.row.datum;
      meta["shape"] = d.shape == Shape::Disc ? "disc" : "square";
      meta["rho"] = d.rho;
      meta["spacing"] = d.spacing;
      meta["collar_fraction"] = d.collar_fraction;
      meta["eps"] = run.row.eps_or_r;
      meta["pgm"] = run.artifact_base + ".pgm";
      meta["codes"] = {{"outside", 255}, {"in", 0},    {"solid_minus", 32},
                       {"solid_plus", 64}, {"void", 128}, {"out", 192}};
      write_text_file((dir / (run.artifact_base + ".meta.json")).string(), meta.dump(2) + "\n");
    } else if (!run.displacement.empty()) {
      FemMesh mesh = build_mesh(run.domain);
      if (mesh.node_count() <= 20000) {
        write_text_file((dir / (run.artifact_base + ".vtk")).string(),
                        vtk_displacement(mesh, run.displacement, run.scalar_field));
      }
    }
  }
}

void append_json_number(std::string& out, const char* key, double v) {
  out += '"';
  out += key;
  out += "\":";
  out += format_value(v);
}

void append_estimate_fields(std::string& out, const LimitEstimate& e) {
  append_json_number(out, "estimate", e.value);
  out += ',';
  append_json_number(out, "spread", e.spread);
  out += ",\"model_order\":" + std::to_string(e.model_order);
  out += ",\"extrapolated\":";
  out += e.extrapolated ? "true" : "false";
}

}  // namespace

std::string ExperimentReport::csv() const { return csv_table(rows); }

std::string ExperimentReport::summary_json() const {
  std::string out = "{\n";
  out += "\"scenario\":\"" + config.scenario + "\",\n";
  out += "\"kind\":\"" + config.kind + "\",\n";
  out += "\"stencil\":" + std::to_string(config.stencil) + ",\n";
  append_json_number(out, "tau_stencil", tau_stencil);
  out += ",\n\"pass\":";
  out += pass ? "true" : "false";
  out += ",\n\"data\":[";
  for (size_t i = 0; i < data.size(); ++i) {
    const DatumSummary& d = data[i];
    out += i ? ",\n{" : "\n{";
    out += "\"datum\":\"" + d.datum + "\",";
    append_estimate_fields(out, d.estimate);
    out += ',';
    append_json_number(out, "budget", d.budget);
    if (!d.inner.empty()) {
      out += ",\"inner\":[";
      for (size_t k = 0; k < d.inner.size(); ++k) {
        out += k ? ",{" : "{";
        append_json_number(out, "scale", d.inner_scales[k]);
        out += ',';
        append_estimate_fields(out, d.inner[k]);
        out += '}';
      }
      out += ']';
    }
    if (d.companion_2g) {
      out += ',';
      append_json_number(out, "companion_2g", *d.companion_2g);
      out += ',';
      append_json_number(out, "companion_2g_spread", d.companion_2g_spread);
      out += ',';
      append_json_number(out, "gap_vs_2g", *d.gap_vs_2g);
    }
    out += '}';
  }
  out += "\n],\n\"expectations\":[";
  for (size_t i = 0; i < expectations.size(); ++i) {
    const ExpectationResult& e = expectations[i];
    out += i ? ",\n{" : "\n{";
    out += "\"name\":\"" + e.name + "\",\"pass\":";
    out += e.pass ? "true" : "false";
    out += ',';
    append_json_number(out, "measured", e.measured);
    out += ',';
    append_json_number(out, "target", e.target);
    out += ',';
    append_json_number(out, "tolerance", e.tolerance);
    if (!e.detail.empty()) out += ",\"detail\":\"" + e.detail + "\"";
    out += '}';
  }
  out += "\n]\n}\n";
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                int jobs) {
  if (jobs < 1) throw ConfigError("/jobs: expected a positive worker count");
  ExperimentReport report;
  report.config = config;
  report.tau_stencil = stencil_calibration(make_stencil(config.stencil));

  Execution ex;
  if (config.kind == "void")
    execute_void(config, ex, report.data, report.tau_stencil, jobs);
  else if (config.kind == "jump")
    execute_jump(config, ex, report.data, report.tau_stencil, jobs);
  else if (config.kind == "bulk")
    execute_bulk(config, ex, report.data, jobs);
  else if (config.kind == "gbv")
    execute_gbv(config, ex, report.data, report.tau_stencil, jobs);
  else if (config.kind == "fqc")
    execute_fqc(config, ex, report.data, jobs);
  else
    throw ConfigError("/kind: expected bulk | void | jump | gbv | fqc");

  for (const RunOutcome& run : ex.runs) report.rows.push_back(run.row);

  report.pass = true;
  for (const Expectation& e : config.expectations) {
    report.expectations.push_back(evaluate_expectation(e, report.data, report.tau_stencil));
    report.pass = report.pass && report.expectations.back().pass;
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    fs::path base(out_dir);
    write_text_file((base / (config.scenario + ".csv")).string(), report.csv());
    write_text_file((base / (config.scenario + ".summary.json")).string(),
                    report.summary_json());
    write_text_file((base / (config.scenario + ".config.json")).string(),
                    config_to_json(config));
    write_artifacts(config, ex, out_dir);
  }
  return report;
}

std::vector<ExperimentReport> run_suite(const std::vector<std::string>& names,
                                        const std::string& out_dir, int jobs, bool* all_pass) {
  if (names.empty()) throw ConfigError("/scenarios: empty suite");
  std::vector<ExperimentReport> reports;
  bool ok = true;
  for (const std::string& name : names) {
    reports.push_back(run_experiment(scenario_config(name), out_dir, jobs));
    ok = ok && reports.back().pass;
  }
  if (!out_dir.empty()) {
    std::string summary = "{\n\"pass\":";
    summary += ok ? "true" : "false";
    summary += ",\n\"scenarios\":[";
    for (size_t i = 0; i < reports.size(); ++i) {
      summary += i ? ",\n{" : "\n{";
      summary += "\"scenario\":\"" + reports[i].config.scenario + "\",\"pass\":";
      summary += reports[i].pass ? "true" : "false";
      summary += '}';
    }
    summary += "\n]\n}\n";
    write_text_file((fs::path(out_dir) / "suite.summary.json").string(), summary);
  }
  if (all_pass) *all_pass = ok;
  return reports;
}

std::string render_stored_labels(const std::string& meta_path) {
  std::ifstream in(meta_path, std::ios::binary);
  if (!in) throw ConfigError("/meta: cannot open " + meta_path);
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/meta: invalid JSON: " + std::string(e.what()));
  }
  for (const char* key : {"shape", "rho", "spacing", "collar_fraction", "pgm"})
    if (!meta.contains(key)) throw ConfigError(std::string("/meta/") + key + ": missing");
  Shape shape = meta["shape"] == "square" ? Shape::Square : Shape::Disc;
  auto dom = std::make_shared<const GridDomain>(
      build_grid(shape, {0, 0}, meta["rho"].get<double>(), meta["spacing"].get<double>(),
                 meta["collar_fraction"].get<double>()));

  fs::path pgm_path = fs::path(meta_path).parent_path() / meta["pgm"].get<std::string>();
  std::ifstream pgm(pgm_path, std::ios::binary);
  if (!pgm) throw ConfigError("/meta/pgm: cannot open " + pgm_path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  pgm >> magic >> w >> h >> maxval;
  pgm.get();  // single whitespace after the header
  if (magic != "P5" || maxval != 255 || w != dom->nx || h != dom->ny)
    throw ConfigError("/meta/pgm: header does not match the domain raster");
  std::vector<char> bytes(size_t(w) * size_t(h));
  pgm.read(bytes.data(), std::streamsize(bytes.size()));
  if (!pgm) throw ConfigError("/meta/pgm: truncated pixel data");

  LabelField field;
  field.domain = dom;
  field.labels.assign(size_t(dom->cell_count()), Label::In);
  field.frozen.assign(size_t(dom->cell_count()), 0);
  for (int iy = 0; iy < dom->ny; ++iy) {
    for (int ix = 0; ix < dom->nx; ++ix) {
      uint8_t code = uint8_t(bytes[size_t(dom->ny - 1 - iy) * size_t(w) + size_t(ix)]);
      int32_t cell = dom->cell_at(ix, iy);
      if (cell < 0) {
        if (code != 255) throw ConfigError("/meta/pgm: pixel set outside the domain");
        continue;
      }
      Label label;
      switch (code) {
        case 0: label = Label::In; break;
        case 32: label = Label::SolidMinus; break;
        case 64: label = Label::SolidPlus; break;
        case 128: label = Label::Void; break;
        case 192: label = Label::Out; break;
        default: throw ConfigError("/meta/pgm: unknown label code");
      }
      field.labels[size_t(cell)] = label;
      field.frozen[size_t(cell)] = dom->collar[size_t(cell)];
    }
  }
  return svg_labels(field);
}

}  // namespace voidhom
