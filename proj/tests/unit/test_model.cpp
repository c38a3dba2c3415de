#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hestonabc/errors.hpp"
#include "hestonabc/model.hpp"

using namespace hestonabc;

namespace {

const HestonParams kSet1{4.0, 0.1, 0.1, -0.5, 0.0};

double ulps_apart(double a, double b, double scale) {
  const double ulp = std::nextafter(std::abs(scale), std::numeric_limits<double>::infinity()) -
                     std::abs(scale);
  return std::abs(a - b) / ulp;
}

}  // namespace

TEST(Validate, TableOneParametersAreValidAndSatisfyFeller) {
  const auto report = validate(kSet1, {1.0, 2.0});
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.feller_ok);
  EXPECT_TRUE(report.warnings.empty());
}

TEST(Validate, SlowMeanReversionSetSatisfiesFeller) {
  const auto report = validate({0.005, 0.5, 0.01, 0.5, 0.0}, {1.0, 2.0});
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.feller_ok);
}

TEST(Validate, ZeroKappaIsRejectedWithFieldName) {
  HestonParams p = kSet1;
  p.kappa = 0.0;
  const auto report = validate(p, {1.0, 2.0});
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.errors.front().field, "kappa");
  EXPECT_EQ(report.errors.front().message, "kappa must be positive");
  try {
    require_valid(p, {1.0, 2.0});
    FAIL() << "expected InvalidParameter";
  } catch (const InvalidParameter& e) {
    EXPECT_EQ(e.field(), "kappa");
  }
}

TEST(Validate, EveryHardViolationNamesItsField) {
  struct Case {
    HestonParams p;
    ContractSpec c;
    const char* field;
  };
  const Case cases[] = {
      {{4, 0, 0.1, 0, 0}, {1, 2}, "eta"},
      {{4, 0.1, -0.1, 0, 0}, {1, 2}, "sigma"},
      {{4, 0.1, 0.1, 1.5, 0}, {1, 2}, "rho"},
      {{4, 0.1, 0.1, 0, -0.01}, {1, 2}, "r"},
      {{4, 0.1, 0.1, 0, 0}, {0, 2}, "strike"},
      {{4, 0.1, 0.1, 0, 0}, {1, 0}, "maturity"},
      {{std::nan(""), 0.1, 0.1, 0, 0}, {1, 2}, "kappa"},
  };
  for (const auto& c : cases) {
    const auto report = validate(c.p, c.c);
    ASSERT_FALSE(report.ok()) << c.field;
    EXPECT_EQ(report.errors.front().field, c.field);
  }
}

TEST(Validate, FellerViolationIsOnlyAWarning) {
  const HestonParams p{1.0, 0.04, 0.5, 0.0, 0.0};
  const auto report = validate(p, {1.0, 1.0});
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.feller_ok);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_NO_THROW(require_valid(p, {1.0, 1.0}));
}

TEST(Validate, FellerUsesHalfKappaEtaVerbatim) {
  // 2 kappa eta >= sigma^2 holds here, the stricter kappa eta / 2 >= sigma^2 does not.
  const HestonParams p{1.0, 0.1, 0.3, 0.0, 0.0};
  EXPECT_FALSE(p.feller_ok());
  const HestonParams boundary{2.0, 0.5, 0.5, 0.0, 0.0};
  EXPECT_TRUE(boundary.feller_ok());
}

TEST(Validate, IsPure) {
  const auto a = validate(kSet1, {1.0, 2.0});
  const auto b = validate(kSet1, {1.0, 2.0});
  EXPECT_EQ(a.ok(), b.ok());
  EXPECT_EQ(a.feller_ok, b.feller_ok);
  EXPECT_EQ(a.errors.size(), b.errors.size());
  EXPECT_EQ(a.warnings.size(), b.warnings.size());
}

TEST(Transform, AtMaturityAtTheMoneyCollapses) {
  const HestonParams p{4, 0.1, 0.1, 0, 0.03};
  const ContractSpec c{100.0, 2.0};
  const auto q = to_transformed({100.0, 0.2, 2.0, 0.0}, p, c);
  EXPECT_DOUBLE_EQ(q.s_tilde, 1.0);
  EXPECT_DOUBLE_EQ(q.tau, 0.0);
  EXPECT_DOUBLE_EQ(q.value, 0.0);
}

TEST(Transform, ZeroValueStaysZero) {
  const HestonParams p{4, 0.1, 0.1, 0, 0.05};
  const ContractSpec c{100.0, 2.0};
  EXPECT_EQ(to_transformed({73.0, 0.3, 0.7, 0.0}, p, c).value, 0.0);
  EXPECT_EQ(from_transformed({1.3, 0.3, 0.7, 0.0}, p, c).value, 0.0);
}

TEST(Transform, ForwardMatchesDefinition) {
  const HestonParams p{4, 0.1, 0.1, 0, 0.03};
  const ContractSpec c{100.0, 2.0};
  const auto q = to_transformed({120.0, 0.2, 0.5, 31.7}, p, c);
  const double g = std::exp(0.03 * 1.5);
  EXPECT_DOUBLE_EQ(q.tau, 1.5);
  EXPECT_DOUBLE_EQ(q.s_tilde, 120.0 * g / 100.0);
  EXPECT_DOUBLE_EQ(q.value, 31.7 * g / 100.0);
  EXPECT_EQ(q.variance, 0.2);
}

TEST(Transform, RoundTripAtReferencePoint) {
  const HestonParams p{4, 0.1, 0.1, 0, 0.03};
  const ContractSpec c{100.0, 2.0};
  const PhysicalPoint x{120.0, 0.2, 0.5, 31.7};
  const auto back = from_transformed(to_transformed(x, p, c), p, c);
  EXPECT_LE(ulps_apart(back.spot, x.spot, x.spot), 4.0);
  EXPECT_LE(ulps_apart(back.time, x.time, c.maturity), 4.0);
  EXPECT_LE(ulps_apart(back.value, x.value, x.value), 4.0);
  EXPECT_EQ(back.variance, x.variance);
  const auto q = to_transformed(x, p, c);
  const auto again = to_transformed(from_transformed(q, p, c), p, c);
  EXPECT_LE(ulps_apart(again.s_tilde, q.s_tilde, q.s_tilde), 4.0);
  EXPECT_LE(ulps_apart(again.value, q.value, q.value), 4.0);
}

TEST(Transform, RoundTripWithinFourUlpsOnRandomPoints) {
  // Time is compared in ulps of T: t passes through T - t, whose rounding is
  // relative to T rather than to t.
  std::mt19937_64 rng(7);
  const HestonParams p{4, 0.1, 0.1, 0, 0.05};
  const ContractSpec c{100.0, 2.0};
  std::uniform_real_distribution<double> spot(0.0, 10.0 * c.strike);
  std::uniform_real_distribution<double> time(0.0, c.maturity);
  std::uniform_real_distribution<double> value(0.0, 500.0);
  for (int k = 0; k < 20000; ++k) {
    const PhysicalPoint x{spot(rng), 0.3, time(rng), value(rng)};
    const auto back = from_transformed(to_transformed(x, p, c), p, c);
    ASSERT_LE(ulps_apart(back.spot, x.spot, x.spot), 4.0) << x.spot;
    ASSERT_LE(ulps_apart(back.time, x.time, c.maturity), 4.0) << x.time;
    ASSERT_LE(ulps_apart(back.value, x.value, x.value), 4.0) << x.value;
  }
}

TEST(Transform, TimeOutsideContractIsDomainError) {
  const ContractSpec c{1.0, 2.0};
  EXPECT_THROW(to_transformed({1.0, 0.1, -0.1, 0.0}, kSet1, c), DomainError);
  EXPECT_THROW(to_transformed({1.0, 0.1, 2.5, 0.0}, kSet1, c), DomainError);
  EXPECT_THROW(from_transformed({1.0, 0.1, 2.5, 0.0}, kSet1, c), DomainError);
  EXPECT_THROW(from_transformed({1.0, 0.1, -1e-9, 0.0}, kSet1, c), DomainError);
}
