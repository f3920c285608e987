#include "cosq/cos_engine.hpp"
#include "cosq/errors.hpp"
#include "cosq/inversion.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cosq;

namespace {

const auto kNormal = CharacteristicFunctionSpec::normal(0.0, 1.0);
const auto kTs = CharacteristicFunctionSpec::tempered_stable(1.0, 1.0, 0.75);
const auto kNig = CharacteristicFunctionSpec::nig(1.0, 0.0, 1.0);

ToleranceConfig with_eps(double eps) {
  ToleranceConfig cfg;
  cfg.eps = eps;
  return cfg;
}

ToleranceConfig ts_config() {
  ToleranceConfig cfg;
  cfg.terms_override = 50;
  return cfg;
}

struct Named {
  const char* name;
  CharacteristicFunctionSpec spec;
  ToleranceConfig cfg;
};

std::vector<Named> table_builds() {
  return {{"ts", kTs, ts_config()},
          {"normal", kNormal, with_eps(0.005)},
          {"nig", kNig, with_eps(0.005)},
          {"nig-fine", kNig, with_eps(0.0005)}};
}

double max_normal_error(const CosApproximation& cos, int points) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double y = cos.a() + cos.width() * i / (points - 1);
    worst = std::max(worst, std::abs(cos.cdf(y) - test::std_normal_cdf(y)));
  }
  return worst;
}

}  // namespace

TEST(ToleranceConfig, Validation) {
  EXPECT_NO_THROW(ToleranceConfig{}.validate());
  ToleranceConfig cfg;
  cfg.eps = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.moment_order = 7;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.smoothness = 38;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.delta = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.terms_override = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(TruncationRange, NormalClosedForm) {
  const TruncationRange r = truncation_range(kNormal, with_eps(0.005));
  const double ell = std::pow(2.0 * 105.0 / 0.005, 1.0 / 8.0);
  EXPECT_NEAR(r.ell, ell, 1e-12);
  EXPECT_NEAR(r.ell, 3.78, 0.005);
  EXPECT_NEAR(r.a, -ell, 1e-12);
  EXPECT_NEAR(r.b, ell, 1e-12);
  EXPECT_NEAR(r.width(), 7.6, 0.05);
}

TEST(TruncationRange, TemperedStableClampedAtZero) {
  const TruncationRange r = truncation_range(kTs, with_eps(0.005));
  EXPECT_LT(1.5 - r.ell, 0.0);
  EXPECT_EQ(r.a, 0.0);
  EXPECT_NEAR(r.width(), 10.2, 0.05);
}

TEST(TruncationRange, NigWidths) {
  EXPECT_NEAR(truncation_range(kNig, with_eps(0.005)).width(), 11.9, 0.05);
  EXPECT_NEAR(truncation_range(kNig, with_eps(0.0005)).width(), 15.8, 0.05);
}

TEST(TruncationRange, ContainsMeanAndRespectsSupport) {
  for (const auto& b : table_builds()) {
    const TruncationRange r = truncation_range(b.spec, b.cfg);
    EXPECT_GE(r.a, b.spec.support().lower) << b.name;
    EXPECT_LE(r.b, b.spec.support().upper) << b.name;
    EXPECT_LT(r.a, mean(b.spec)) << b.name;
    EXPECT_LT(mean(b.spec), r.b) << b.name;
  }
}

TEST(TruncationRange, DegenerateRangeIsRejected) {
  // Support (0, 1e-3) and a mean outside it leave no room for the interval.
  const auto spec = CharacteristicFunctionSpec::custom([](double u) { return std::exp(Complex(0.0, 5.0 * u)); },
                                                       {0.0, 1e-3}, {5.0, 1e-10, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  EXPECT_THROW(truncation_range(spec, with_eps(0.005)), DegenerateRangeError);
}

TEST(ChooseTerms, ReferenceConfigurations) {
  const auto terms_for = [](const CharacteristicFunctionSpec& spec, double eps) {
    const ToleranceConfig cfg = with_eps(eps);
    return choose_terms(spec, cfg, 0.5 * truncation_range(spec, cfg).width());
  };
  EXPECT_EQ(terms_for(kNormal, 0.005).terms, 12u);
  EXPECT_EQ(terms_for(kNig, 0.005).terms, 79u);
  EXPECT_EQ(terms_for(kNig, 0.0005).terms, 114u);
  EXPECT_FALSE(terms_for(kNig, 0.0005).overridden);
  EXPECT_GT(terms_for(kNig, 0.0005).bound, 113.0);

  const TermCount ts = choose_terms(kTs, ts_config(), 5.1);
  EXPECT_EQ(ts.terms, 50u);
  EXPECT_TRUE(ts.overridden);
}

TEST(ChooseTerms, GrowsAsToleranceShrinks) {
  std::size_t previous = 0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const ToleranceConfig cfg = with_eps(eps);
    const std::size_t n = choose_terms(kNig, cfg, 0.5 * truncation_range(kNig, cfg).width()).terms;
    EXPECT_GE(n, previous);
    previous = n;
  }
}

TEST(BuildCos, TableConfigurations) {
  const CosApproximation normal = build_cos(kNormal, with_eps(0.005));
  EXPECT_EQ(normal.terms(), 12u);
  EXPECT_EQ(normal.coefficients().size(), 13u);
  const CosApproximation ts = build_cos(kTs, ts_config());
  EXPECT_EQ(ts.terms(), 50u);
  EXPECT_TRUE(ts.terms_overridden());
  EXPECT_EQ(ts.a(), 0.0);
  EXPECT_NEAR(ts.width(), 10.2, 0.05);
  EXPECT_NEAR(ts.mu(), 1.5, 1e-15);
  EXPECT_EQ(ts.eps(), 0.005);
}

TEST(BuildCos, Normalization) {
  for (const auto& b : table_builds()) {
    const CosApproximation cos = build_cos(b.spec, b.cfg);
    EXPECT_NEAR(cos.coefficients()[0] * cos.width() / 2.0, 1.0, 1e-14) << b.name;
    EXPECT_EQ(cos.cdf(cos.a()), 0.0) << b.name;
    EXPECT_NEAR(cos.cdf(cos.b()), 1.0, 1e-14) << b.name;
    // Just inside the interval the sums take over from the clamps.
    EXPECT_NEAR(cos.cdf(std::nextafter(cos.b(), cos.a())), 1.0, 1e-12) << b.name;
    EXPECT_NEAR(cos.cdf(std::nextafter(cos.a(), cos.b())), 0.0, 1e-12) << b.name;
  }
}

TEST(BuildCos, RebuildIsBitIdentical) {
  for (const auto& b : table_builds()) {
    const CosApproximation first = build_cos(b.spec, b.cfg);
    const CosApproximation second = build_cos(b.spec, b.cfg);
    ASSERT_EQ(first.coefficients(), second.coefficients()) << b.name;
    EXPECT_EQ(first.cdf(0.3), second.cdf(0.3));
  }
}

TEST(BuildCos, RejectsBadRanges) {
  EXPECT_THROW(CosApproximation(kNormal, 1.0, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(CosApproximation(kNormal, -1.0, 1.0, 0), std::invalid_argument);
}

TEST(DensityEval, NormalAtOrigin) {
  const CosApproximation cos = build_cos(kNormal, with_eps(0.005));
  EXPECT_NEAR(density_eval(cos, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 5e-3);
}

TEST(DensityEval, ZeroOutsideRange) {
  for (const auto& b : table_builds()) {
    const CosApproximation cos = build_cos(b.spec, b.cfg);
    EXPECT_EQ(density_eval(cos, cos.b() + 1.0), 0.0) << b.name;
    EXPECT_EQ(density_eval(cos, cos.a() - 1.0), 0.0) << b.name;
  }
}

TEST(DensityEval, NigTailMinimum) {
  const CosApproximation cos = build_cos(kNig, with_eps(0.005));
  const double y = 2.70116;
  const double h = std::min(density_eval(cos, y - 0.005), density_eval(cos, y + 0.005));
  EXPECT_NEAR(h, 0.014, 0.0005);
}

TEST(DensityEval, RawValuesMayBeNegative) {
  const CosApproximation cos = build_cos(kTs, ts_config());
  double lowest = 0.0;
  for (int i = 0; i <= 2000; ++i) lowest = std::min(lowest, cos.density(cos.a() + cos.width() * i / 2000.0));
  EXPECT_LT(lowest, 0.0);
}

TEST(CdfEval, NormalAtMedian) {
  const CosApproximation cos = build_cos(kNormal, with_eps(0.005));
  EXPECT_NEAR(cdf_eval(cos, 0.0), 0.5, 5e-3);
  EXPECT_EQ(cdf_eval(cos, cos.a() - 1.0), 0.0);
  EXPECT_EQ(cdf_eval(cos, cos.b() + 1.0), 1.0);
}

TEST(CdfEval, NigTailAgainstBesselDensity) {
  // F(y) = 1 - int_y^inf f; the tail beyond 80 is below 1e-30.
  const double y = 2.70116;
  const double tail = test::simpson([](double x) { return test::nig_pdf_symmetric(x, 1.0, 1.0); }, y, 80.0, 40000);
  const CosApproximation cos = build_cos(kNig, with_eps(0.005));
  EXPECT_LE(std::abs(cdf_eval(cos, y) - (1.0 - tail)), 5e-6);
}

TEST(CdfEval, SupNormAgainstNormalOracle) {
  for (double eps : {5e-3, 5e-4, 5e-5}) {
    const CosApproximation cos = build_cos(kNormal, with_eps(eps));
    EXPECT_LE(max_normal_error(cos, 10001), eps) << "eps=" << eps;
  }
}

TEST(CdfEval, MonotoneOnTableConfigurationsWithFormulaTerms) {
  for (const auto& b : table_builds()) {
    const CosApproximation cos = build_cos(b.spec, b.cfg);
    double previous = cos.cdf(cos.a());
    double worst_drop = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      const double v = cos.cdf(cos.a() + cos.width() * i / 10000.0);
      worst_drop = std::max(worst_drop, previous - v);
      previous = v;
    }
    if (b.cfg.terms_override) {
      // N = 50 for the TS law leaves Gibbs ripples near the origin.
      EXPECT_GT(worst_drop, 1e-12) << b.name;
      EXPECT_FALSE(cdf_is_monotone(cos)) << b.name;
    } else {
      EXPECT_LE(worst_drop, 1e-12) << b.name;
      EXPECT_TRUE(cdf_is_monotone(cos)) << b.name;
    }
  }
}

TEST(CdfEval, FiniteDifferenceMatchesDensity) {
  for (const auto& b : table_builds()) {
    const CosApproximation cos = build_cos(b.spec, b.cfg);
    const double h = 1e-5 * cos.width();
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double x = cos.a() + cos.width() * i / 101.0;
      const double fd = (cos.cdf(x + h) - cos.cdf(x - h)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - cos.density(x)));
    }
    EXPECT_LE(worst, 1e-6) << b.name;
  }
}

TEST(CdfEval, MoreTermsDoNotIncreaseError) {
  const TruncationRange r = truncation_range(kNormal, with_eps(5e-4));
  double previous = 1.0;
  for (std::size_t n : {8u, 12u, 16u, 24u, 32u, 64u, 128u}) {
    const CosApproximation cos(kNormal, r.a, r.b, n);
    const double err = max_normal_error(cos, 10001);
    EXPECT_LE(err, previous + 1e-12) << "N=" << n;
    previous = err;
  }
}

TEST(CdfEval, WideReferenceBuildDifferenceErrorIsTruncation) {
  // Halving the step quarters the three-point error; the five-point stencil is far below it.
  const TruncationRange r = truncation_range(kTs, with_eps(1e-9));
  const CosApproximation cos(kTs, r.a, r.b, 100000, 1e-9);
  const double x = cos.a() + cos.width() / 101.0;
  const auto three = [&](double h) { return std::abs((cos.cdf(x + h) - cos.cdf(x - h)) / (2.0 * h) - cos.density(x)); };
  const double h = 1e-5 * cos.width();
  EXPECT_NEAR(three(h) / three(h / 2.0), 4.0, 0.1);
  const double five =
      std::abs((-cos.cdf(x + 2 * h) + 8 * cos.cdf(x + h) - 8 * cos.cdf(x - h) + cos.cdf(x - 2 * h)) / (12 * h) -
               cos.density(x));
  EXPECT_LT(five, 1e-9);
}

TEST(CdfEval, MatchesDirectSummation) {
  const CosApproximation cos(kNig, -8.0, 8.0, 1000, 1e-6);
  const auto& c = cos.coefficients();
  const double w = cos.width();
  double worst_h = 0.0;
  double worst_f = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double x = cos.a() + w * i / 50.0 + 1e-3;
    const double t = std::numbers::pi * (x - cos.a()) / w;
    double h = 0.5 * c[0];
    double f = 0.5 * c[0] * (x - cos.a());
    for (std::size_t k = 1; k < c.size(); ++k) {
      h += c[k] * std::cos(k * t);
      f += c[k] * w / (k * std::numbers::pi) * std::sin(k * t);
    }
    worst_h = std::max(worst_h, std::abs(h - cos.density(x)));
    worst_f = std::max(worst_f, std::abs(f - cos.cdf(x)));
  }
  EXPECT_LT(worst_h, 1e-13);
  EXPECT_LT(worst_f, 1e-13);
}
