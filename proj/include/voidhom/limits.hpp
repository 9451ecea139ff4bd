#pragma once

#include <vector>

namespace voidhom {

// Which small parameter a series sweeps; purely diagnostic, echoed in
// reports.
enum class SeriesKind { InnerEps, OuterRho, RGrowth };

// A finite family of positive scales with one observed value per scale.
// Scales are the small parameter that tends to zero (layer half-width,
// cell radius, inverse window size, ...).  Order of entry does not matter;
// the estimator sorts internally.  Built-in sweeps provide at least three
// points per series; the estimator itself accepts two (the outer stage of a
// double limit may have only two radii).
struct ScaleSeries {
  SeriesKind kind = SeriesKind::OuterRho;
  std::vector<double> scales;
  std::vector<double> values;
};

struct LimitEstimate {
  double value = 0.0;   // estimated limit as scale -> 0
  double spread = 0.0;  // conservative uncertainty budget
  int model_order = 0;  // exponent q of the fitted value = L + c*scale^q; 0 = fallback
  bool extrapolated = false;
};

// Least-squares fit of value = L + c * scale^q for q in {1, 2}; the model
// with the smaller maximum absolute residual wins (ties prefer q = 1).
// spread = max |fitted - observed| + |value at smallest scale - L|.
// Falls back to the smallest-scale observation with spread = max pairwise
// difference when the fit is ill-conditioned or the best residual exceeds
// a quarter of the observed value range.  Requires at least two points
// with distinct positive scales.
LimitEstimate estimate_limit(const ScaleSeries& series);

// Iterated limit: first the inner series (one per outer scale, inner scale ->
// 0), then the outer series of inner estimates (outer scale -> 0).  The final
// spread stacks the outer spread on top of the worst inner spread.
struct DoubleLimitEstimate {
  LimitEstimate outer;
  std::vector<LimitEstimate> inner;
  double value = 0.0;
  double spread = 0.0;
};

DoubleLimitEstimate double_limit(const std::vector<double>& outer_scales,
                                 const std::vector<ScaleSeries>& inner_series);

}  // namespace voidhom
