#include "voidhom/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace voidhom {

namespace {

struct FitResult {
  bool ok = false;
  double limit = 0.0;
  double max_residual = std::numeric_limits<double>::infinity();
};

// Least squares for value = L + c * s^q via the 2x2 normal equations.
FitResult fit_power(const std::vector<double>& s, const std::vector<double>& v,
                    int q) {
  const size_t n = s.size();
  double sw = 0.0, sww = 0.0, sv = 0.0, swv = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double w = (q == 1) ? s[i] : s[i] * s[i];
    sw += w;
    sww += w * w;
    sv += v[i];
    swv += w * v[i];
  }
  FitResult fit;
  double det = double(n) * sww - sw * sw;
  // Relative conditioning guard: det is ~ n * Var(w) * n, so compare against
  // the natural magnitude of the accumulated moments.
  double magnitude = double(n) * sww + sw * sw;
  if (!(det > 1e-12 * magnitude)) return fit;
  double limit = (sww * sv - sw * swv) / det;
  double slope = (double(n) * swv - sw * sv) / det;
  fit.ok = true;
  fit.limit = limit;
  fit.max_residual = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double w = (q == 1) ? s[i] : s[i] * s[i];
    fit.max_residual = std::max(fit.max_residual, std::abs(limit + slope * w - v[i]));
  }
  return fit;
}

}  // namespace

LimitEstimate estimate_limit(const ScaleSeries& series) {
  const size_t n = series.scales.size();
  if (n != series.values.size())
    throw std::invalid_argument("scale series: scales and values differ in length");
  if (n < 2) throw std::invalid_argument("scale series: need at least two points");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return series.scales[a] > series.scales[b];
  });
  std::vector<double> s(n), v(n);
  for (size_t i = 0; i < n; ++i) {
    s[i] = series.scales[order[i]];
    v[i] = series.values[order[i]];
    if (!(s[i] > 0.0)) throw std::invalid_argument("scale series: scales must be positive");
    if (!std::isfinite(v[i])) throw std::invalid_argument("scale series: values must be finite");
    if (i > 0 && !(s[i] < s[i - 1]))
      throw std::invalid_argument("scale series: scales must be distinct");
  }

  double vmin = *std::min_element(v.begin(), v.end());
  double vmax = *std::max_element(v.begin(), v.end());
  double range = vmax - vmin;

  FitResult f1 = fit_power(s, v, 1);
  FitResult f2 = fit_power(s, v, 2);

  LimitEstimate out;
  const FitResult* best = nullptr;
  int best_order = 0;
  if (f1.ok && (!f2.ok || f1.max_residual <= f2.max_residual)) {
    best = &f1;
    best_order = 1;
  } else if (f2.ok) {
    best = &f2;
    best_order = 2;
  }

  bool usable = best != nullptr;
  if (usable && range > 0.0 && best->max_residual > 0.25 * range) usable = false;

  if (!usable) {
    out.value = v.back();  // smallest scale
    out.spread = range;    // max pairwise difference
    out.model_order = 0;
    out.extrapolated = false;
    return out;
  }

  out.value = best->limit;
  out.spread = best->max_residual + std::abs(v.back() - best->limit);
  out.model_order = best_order;
  out.extrapolated = true;
  return out;
}

DoubleLimitEstimate double_limit(const std::vector<double>& outer_scales,
                                 const std::vector<ScaleSeries>& inner_series) {
  if (outer_scales.size() != inner_series.size())
    throw std::invalid_argument("double limit: one inner series per outer scale");
  if (outer_scales.size() < 2)
    throw std::invalid_argument("double limit: need at least two outer scales");

  DoubleLimitEstimate out;
  ScaleSeries outer;
  outer.kind = SeriesKind::OuterRho;
  outer.scales = outer_scales;
  double worst_inner = 0.0;
  for (const ScaleSeries& inner : inner_series) {
    LimitEstimate e = estimate_limit(inner);
    worst_inner = std::max(worst_inner, e.spread);
    outer.values.push_back(e.value);
    out.inner.push_back(e);
  }
  out.outer = estimate_limit(outer);
  out.value = out.outer.value;
  out.spread = out.outer.spread + worst_inner;
  return out;
}

}  // namespace voidhom
