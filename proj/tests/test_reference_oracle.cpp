#include "cosq/errors.hpp"
#include "cosq/inversion.hpp"
#include "cosq/reference_oracle.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace cosq;

namespace {

const auto kNormal = CharacteristicFunctionSpec::normal(0.0, 1.0);
const auto kTs = CharacteristicFunctionSpec::tempered_stable(1.0, 1.0, 0.75);
const auto kNig = CharacteristicFunctionSpec::nig(1.0, 0.0, 1.0);

}  // namespace

TEST(GilPelaez, NormalMedian) {
  const CdfReference r = gil_pelaez_cdf(kNormal, 0.0);
  EXPECT_NEAR(r.value, 0.5, 1e-14);
  EXPECT_EQ(r.method, ReferenceMethod::GilPelaez);
  EXPECT_GT(r.est_error, 0.0);
}

TEST(GilPelaez, NormalTableValue) {
  const double v = gil_pelaez_cdf(kNormal, 1.28214).value;
  EXPECT_NEAR(v, 0.90010, 5e-6);
  EXPECT_NEAR(v, test::std_normal_cdf(1.28214), 1e-11);
}

TEST(GilPelaez, NormalAgainstErfcOnGrid) {
  for (const auto& spec : {kNormal, CharacteristicFunctionSpec::normal(-0.7, 2.5)}) {
    const auto& p = spec.params<NormalParams>();
    for (double z = -6.0; z <= 6.0; z += 0.25) {
      const double y = p.mean + p.sd * z;
      EXPECT_NEAR(gil_pelaez_cdf(spec, y).value, test::std_normal_cdf(z), 1e-11) << "y=" << y;
    }
  }
}

TEST(GilPelaez, NigAgainstBesselDensity) {
  for (double y : {-3.0, -0.5, 0.0, 1.0, 2.70203}) {
    // The density is symmetric: F(y) = 1/2 + sign(y) int_0^|y| f.
    const double half = test::simpson([](double x) { return test::nig_pdf_symmetric(x, 1.0, 1.0); }, 0.0, std::abs(y),
                                      20000);
    const double oracle = 0.5 + (y < 0.0 ? -half : half);
    EXPECT_NEAR(gil_pelaez_cdf(kNig, y).value, oracle, 1e-10) << "y=" << y;
  }
}

TEST(GilPelaez, PositiveSupportIsZeroBelowOrigin) {
  EXPECT_EQ(gil_pelaez_cdf(kTs, -1.0).value, 0.0);
  EXPECT_EQ(gil_pelaez_cdf(kTs, 0.0).value, 0.0);
  EXPECT_GT(gil_pelaez_cdf(kTs, 0.1).value, 0.0);
}

TEST(GilPelaez, NondecreasingOnGrid) {
  for (const auto& spec : {kNormal, kTs, kNig}) {
    double previous = 0.0;
    const double lo = spec.support().lower_bounded() ? 0.0 : -6.0;
    for (int i = 0; i <= 60; ++i) {
      const double v = gil_pelaez_cdf(spec, lo + 0.2 * i).value;
      EXPECT_GE(v, previous - 1e-12) << spec.label();
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      previous = v;
    }
  }
}

TEST(GilPelaez, ToleranceValidation) {
  EXPECT_THROW(gil_pelaez_cdf(kNormal, 0.0, 1e-13), std::invalid_argument);
  EXPECT_THROW(gil_pelaez_cdf(kNormal, 0.0, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(gil_pelaez_cdf(kNormal, 0.0, 1e-6));
}

TEST(GilPelaez, AlgebraicDecayWithinRange) {
  // Laplace law: |phi| = 1/(1+u^2), tail of the integrand ~ u^{-3}.
  const auto laplace = CharacteristicFunctionSpec::custom([](double u) { return Complex(1.0 / (1.0 + u * u), 0.0); },
                                                          {-kInf, kInf}, {0.0, 2.0});
  EXPECT_NEAR(gil_pelaez_cdf(laplace, 0.3, 1e-9).value, 1.0 - 0.5 * std::exp(-0.3), 1e-8);
}

TEST(GilPelaez, SlowlyDecayingCfIsNonConvergent) {
  // Polya-type CF 1/(1+|u|): the integrand tail ~ u^{-2} needs U far beyond 1e6.
  const auto polya = CharacteristicFunctionSpec::custom([](double u) { return Complex(1.0 / (1.0 + std::abs(u)), 0.0); },
                                                        {-kInf, kInf}, {0.0, 1.0});
  EXPECT_THROW(gil_pelaez_cdf(polya, 0.3), ConvergenceError);
}

TEST(NormalClosedForm, Values) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_quantile(0.75), 0.6744898, 5e-8);
  EXPECT_NEAR(normal_quantile(0.99), 2.3263479, 5e-8);
  EXPECT_NEAR(normal_quantile(0.75), test::std_normal_quantile_bisect(0.75), 1e-12);
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_THROW(normal_quantile(0.0), std::invalid_argument);
  EXPECT_THROW(normal_quantile(1.0), std::invalid_argument);
}

TEST(NormalClosedForm, CdfOfQuantileIsIdentity) {
  std::vector<double> ps = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  for (int i = 1; i < 20; ++i) ps.push_back(0.05 * i);
  for (double p : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) ps.push_back(1.0 - p);
  for (double p : ps) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-10) << "p=" << p;
    EXPECT_NEAR(normal_quantile(p), test::std_normal_quantile_bisect(p), 1e-9 * std::max(1.0, std::abs(normal_quantile(p))));
  }
}

TEST(HighPrecision, NormalQuantileToNineDigits) {
  const HighPrecisionReference r = high_precision_reference(kNormal, 0.75);
  EXPECT_NEAR(r.quantile, normal_quantile(0.75), 2e-9);
  EXPECT_TRUE(r.agrees);
  EXPECT_EQ(r.cos_cdf.method, ReferenceMethod::CosHighPrecision);
  EXPECT_EQ(r.gil_pelaez.method, ReferenceMethod::GilPelaez);
}

TEST(HighPrecision, NigCosAgreesWithGilPelaez) {
  const auto build = high_precision_build(kNig);
  EXPECT_EQ(build->terms(), 100000u);
  EXPECT_LE(std::abs(build->cdf(1.0) - gil_pelaez_cdf(kNig, 1.0).value), 1e-9);
}

TEST(HighPrecision, TemperedStableTailQuantile) {
  const HighPrecisionReference r = high_precision_reference(kTs, 0.99);
  EXPECT_TRUE(r.agrees);
  EXPECT_NEAR(r.cos_cdf.value, 0.99, 1e-8);
  EXPECT_NEAR(r.gil_pelaez.value, 0.99, 1e-8);
  // The COS quantile at eps = 0.005 and N = 50 is within the certified band of this value.
  ToleranceConfig cfg;
  cfg.terms_override = 50;
  const CosApproximation cos = build_cos(kTs, cfg);
  const double y = bisect_quantile(cos, 0.99, cfg.eps);
  EXPECT_LE(std::abs(y - r.quantile), error_bound(cos, y, cfg.eps).bound);
}

TEST(HighPrecision, OracleAgreementOnGrid) {
  for (const auto& spec : {kNormal, kTs, kNig}) {
    const auto build = high_precision_build(spec);
    const BuildValidation v = validate_build(*build, 21);
    ASSERT_EQ(v.points.size(), 21u);
    EXPECT_LE(v.max_discrepancy, 1e-8) << spec.label();
    EXPECT_TRUE(v.within_eps) << spec.label();
  }
}

TEST(Validation, TemperedStableTableBuild) {
  ToleranceConfig cfg;
  cfg.terms_override = 50;
  const BuildValidation v = validate_build(build_cos(kTs, cfg));
  EXPECT_EQ(v.points.size(), 11u);
  EXPECT_LE(v.max_discrepancy, 0.005);
  EXPECT_TRUE(v.within_eps);
}

TEST(Validation, FlagsTooFewTerms) {
  const CosApproximation cos(kNig, -6.0, 6.0, 5, 1e-4);
  const BuildValidation v = validate_build(cos);
  EXPECT_GT(v.max_discrepancy, 1e-4);
  EXPECT_FALSE(v.within_eps);
}
