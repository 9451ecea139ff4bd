#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "voidhom/limits.hpp"

using namespace voidhom;

namespace {

ScaleSeries series(std::vector<double> scales, std::vector<double> values,
                   SeriesKind kind = SeriesKind::OuterRho) {
  ScaleSeries s;
  s.kind = kind;
  s.scales = std::move(scales);
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_SUITE("limits") {
  TEST_CASE("constant series returns the constant with zero spread") {
    LimitEstimate e = estimate_limit(series({0.4, 0.2, 0.1}, {5.0, 5.0, 5.0}));
    CHECK(e.value == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(e.spread == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("linear-in-scale series is fit exactly with order 1") {
    LimitEstimate e = estimate_limit(series({0.4, 0.2, 0.1}, {1.4, 1.2, 1.1}));
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.model_order == 1);
    CHECK(e.extrapolated);
    // Exact fit: residuals vanish, so the conservative spread reduces to the
    // extrapolation distance from the smallest-scale sample to the limit.
    CHECK(e.spread == doctest::Approx(0.1).epsilon(1e-9));
  }

  TEST_CASE("quadratic-in-scale series selects order 2") {
    LimitEstimate e = estimate_limit(
        series({0.4, 0.2, 0.1, 0.05}, {3.0 + 0.16, 3.0 + 0.04, 3.0 + 0.01, 3.0 + 0.0025}));
    CHECK(e.value == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(e.model_order == 2);
  }

  TEST_CASE("non-monotone noisy series takes the fallback path") {
    LimitEstimate e = estimate_limit(series({0.4, 0.2, 0.1}, {1.0, 3.0, 2.0}));
    CHECK(e.model_order == 0);
    CHECK_FALSE(e.extrapolated);
    CHECK(e.value == doctest::Approx(2.0));         // smallest-scale observation
    CHECK(e.spread == doctest::Approx(2.0));        // max pairwise difference
  }

  TEST_CASE("round-trip: exact on series generated by the fit model") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> limit_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> coeff_dist(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      double L = limit_dist(rng);
      double c = coeff_dist(rng) * (trial % 2 ? 1.0 : -1.0);
      int q = 1 + (trial % 2);
      std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
      std::vector<double> values;
      for (double s : scales) values.push_back(L + c * std::pow(s, q));
      LimitEstimate e = estimate_limit(series(scales, values));
      CHECK(e.value == doctest::Approx(L).epsilon(1e-9));
      CHECK(e.model_order == q);
    }
  }

  TEST_CASE("estimate depends only on the (scale, value) set, not input order") {
    LimitEstimate a = estimate_limit(series({0.4, 0.2, 0.1}, {1.41, 1.19, 1.12}));
    LimitEstimate b = estimate_limit(series({0.1, 0.4, 0.2}, {1.12, 1.41, 1.19}));
    CHECK(a.value == b.value);
    CHECK(a.spread == b.spread);
    CHECK(a.model_order == b.model_order);
  }

  TEST_CASE("invalid series are rejected") {
    CHECK_THROWS_AS((void)estimate_limit(series({0.1}, {1.0})), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_limit(series({0.1, 0.1}, {1.0, 2.0})), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_limit(series({0.1, -0.2}, {1.0, 2.0})), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_limit(series({0.1, 0.2}, {1.0})), std::invalid_argument);
  }

  TEST_CASE("double limit: constant stages give the constant with zero spread") {
    std::vector<ScaleSeries> inner{series({0.2, 0.1}, {4.0, 4.0}, SeriesKind::InnerEps),
                                   series({0.2, 0.1}, {4.0, 4.0}, SeriesKind::InnerEps)};
    DoubleLimitEstimate d = double_limit({0.5, 0.25}, inner);
    CHECK(d.value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d.spread == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.inner.size() == 2);
  }

  TEST_CASE("double limit: v = L + rho + eps recovers L within 1e-12") {
    const double L = 2.5;
    std::vector<double> rhos{0.5, 0.25, 0.125};
    std::vector<double> epss{0.08, 0.04, 0.02};
    std::vector<ScaleSeries> inner;
    for (double rho : rhos) {
      std::vector<double> vals;
      for (double eps : epss) vals.push_back(L + rho + eps);
      inner.push_back(series(epss, vals, SeriesKind::InnerEps));
    }
    DoubleLimitEstimate d = double_limit(rhos, inner);
    CHECK(d.value == doctest::Approx(L).epsilon(1e-12));
  }

  TEST_CASE("double limit: spread stacks outer on worst inner") {
    // Inner series with a visible fallback spread; outer constant.
    std::vector<ScaleSeries> inner{series({0.2, 0.1, 0.05}, {1.0, 3.0, 2.0}),
                                   series({0.2, 0.1, 0.05}, {2.0, 2.0, 2.0})};
    DoubleLimitEstimate d = double_limit({0.5, 0.25}, inner);
    CHECK(d.spread >= 2.0);  // worst inner spread alone is 2
  }

  TEST_CASE("double limit input validation") {
    std::vector<ScaleSeries> one{series({0.2, 0.1}, {1.0, 1.0})};
    CHECK_THROWS_AS((void)double_limit({0.5}, one), std::invalid_argument);
    CHECK_THROWS_AS((void)double_limit({0.5, 0.25}, one), std::invalid_argument);
  }
}
