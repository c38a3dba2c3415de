#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hestonabc/errors.hpp"
#include "hestonabc/fit.hpp"

using namespace hestonabc;

namespace {

std::vector<double> log_nodes() {
  std::vector<double> x;
  for (int i = 1; i <= 39; ++i) x.push_back(std::log(0.1 * i));
  return x;
}

std::vector<double> sample(const GaussLinFit& f, const std::vector<double>& x) {
  std::vector<double> y;
  for (double xi : x) y.push_back(f.at_log(xi));
  return y;
}

}  // namespace

TEST(GaussLinFit, CurveDefinition) {
  const GaussLinFit f{0.5, -0.2, 0.3, 0.4};
  const double x = 0.7;
  EXPECT_DOUBLE_EQ(f.at_log(x), (0.5 - 0.2 * x) * std::exp(-(x - 0.3) * (x - 0.3) / 0.32));
  EXPECT_DOUBLE_EQ(eval_fit(f, std::exp(x)), f.at_log(x));
  EXPECT_THROW(eval_fit(f, 0.0), DomainError);
  EXPECT_THROW(eval_fit(f, -1.0), DomainError);
  EXPECT_TRUE(GaussLinFit{}.is_zero());
}

TEST(Fit, RecoversExactParameters) {
  const auto x = log_nodes();
  const GaussLinFit truth{0.5, -0.2, 0.3, 0.4};
  const auto r = fit_gauss_linear(x, sample(truth, x));
  EXPECT_EQ(r.quality, FitQuality::converged);
  EXPECT_NEAR(r.fit.c0, truth.c0, 1e-7);
  EXPECT_NEAR(r.fit.c1, truth.c1, 1e-7);
  EXPECT_NEAR(r.fit.mu_f, truth.mu_f, 1e-7);
  EXPECT_NEAR(r.fit.sigma_f, truth.sigma_f, 1e-7);
  EXPECT_LT(r.relative_rms, 1e-9);
}

TEST(Fit, RecoversNegativePeakAwayFromCenter) {
  const auto x = log_nodes();
  const GaussLinFit truth{-0.03, 0.01, 0.9, 0.25};
  const auto r = fit_gauss_linear(x, sample(truth, x));
  EXPECT_NEAR(r.fit.mu_f, truth.mu_f, 1e-6);
  EXPECT_NEAR(r.fit.sigma_f, truth.sigma_f, 1e-6);
  EXPECT_NEAR(r.fit.c0, truth.c0, 1e-7);
  EXPECT_NEAR(r.fit.c1, truth.c1, 1e-7);
}

TEST(Fit, AllZeroSamplesGiveExactZero) {
  const auto x = log_nodes();
  const auto r = fit_gauss_linear(x, std::vector<double>(x.size(), 0.0));
  EXPECT_EQ(r.quality, FitQuality::exact_zero);
  EXPECT_TRUE(r.fit.is_zero());
  EXPECT_EQ(r.fit.sigma_f, 1.0);
  EXPECT_EQ(r.relative_rms, 0.0);
}

TEST(Fit, RejectsTooFewOrMismatchedSamples) {
  EXPECT_THROW(fit_gauss_linear({0, 1, 2, 3}, {1, 2, 3, 4}), DomainError);
  EXPECT_THROW(fit_gauss_linear({0, 1, 2, 3, 4}, {1, 2, 3, 4}), DomainError);
}

TEST(Fit, NoisySamplesStayClose) {
  const auto x = log_nodes();
  const GaussLinFit truth{1.0, 0.3, 0.2, 0.5};
  auto y = sample(truth, x);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.005);
  for (double& yi : y) yi += noise(rng);
  const auto r = fit_gauss_linear(x, y);
  EXPECT_NEAR(r.fit.mu_f, truth.mu_f, 0.02);
  EXPECT_NEAR(r.fit.sigma_f, truth.sigma_f, 0.02);
  EXPECT_NEAR(r.fit.c0, truth.c0, 0.02);
  EXPECT_LT(r.relative_rms, 0.01);
  EXPECT_GT(r.fit.sigma_f, 0.0);
}

TEST(Fit, SignFlipNegatesAmplitudes) {
  const auto x = log_nodes();
  const GaussLinFit truth{0.4, 0.1, -0.2, 0.6};
  auto y = sample(truth, x);
  const auto up = fit_gauss_linear(x, y);
  for (double& yi : y) yi = -yi;
  const auto down = fit_gauss_linear(x, y);
  EXPECT_NEAR(down.fit.c0, -up.fit.c0, 1e-8);
  EXPECT_NEAR(down.fit.c1, -up.fit.c1, 1e-8);
  EXPECT_NEAR(down.fit.mu_f, up.fit.mu_f, 1e-8);
  EXPECT_NEAR(down.fit.sigma_f, up.fit.sigma_f, 1e-8);
}

TEST(Fit, ShiftInLogPriceMovesCenter) {
  const GaussLinFit truth{0.3, -0.1, 0.5, 0.8};
  const double a = 0.25;
  auto x = log_nodes();
  const auto y = sample(truth, x);
  const auto base = fit_gauss_linear(x, y);
  std::vector<double> shifted_x;
  for (double xi : x) shifted_x.push_back(xi + a);
  const auto moved = fit_gauss_linear(shifted_x, y);
  EXPECT_NEAR(moved.fit.mu_f, base.fit.mu_f + a, 1e-7);
  EXPECT_NEAR(moved.fit.sigma_f, base.fit.sigma_f, 1e-7);
  EXPECT_NEAR(moved.fit.c1, base.fit.c1, 1e-7);
  EXPECT_NEAR(moved.fit.c0, base.fit.c0 - base.fit.c1 * a, 1e-7);
}

TEST(Fit, PureGaussianIsMatchedAsACurve) {
  // At c1 = 0 the mu and c1 columns of the Jacobian are linearly dependent, so
  // the parameters are only weakly determined; the fitted curve still is.
  const GaussLinFit truth{0.4, 0.0, 0.1, 0.3};
  const auto x = log_nodes();
  const auto y = sample(truth, x);
  const auto r = fit_gauss_linear(x, y);
  EXPECT_LT(r.relative_rms, 1e-7);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(r.fit.at_log(x[k]), y[k], 1e-6);
  EXPECT_NEAR(r.fit.sigma_f, 0.3, 1e-3);
}

TEST(Fit, IterationCapReturnsBestSoFar) {
  const auto x = log_nodes();
  const GaussLinFit truth{0.5, -0.2, 0.3, 0.4};
  FitOptions opts;
  opts.max_iterations = 1;
  const auto r = fit_gauss_linear(x, sample(truth, x), opts);
  EXPECT_LE(r.iterations, 1);
  EXPECT_TRUE(r.quality == FitQuality::max_iterations || r.quality == FitQuality::converged);
  EXPECT_TRUE(std::isfinite(r.fit.c0));
}

TEST(Fit, Deterministic) {
  const auto x = log_nodes();
  std::vector<double> y;
  for (double xi : x) y.push_back(std::sin(3 * xi) * std::exp(-xi * xi));
  const auto a = fit_gauss_linear(x, y);
  const auto b = fit_gauss_linear(x, y);
  EXPECT_EQ(a.fit.c0, b.fit.c0);
  EXPECT_EQ(a.fit.c1, b.fit.c1);
  EXPECT_EQ(a.fit.mu_f, b.fit.mu_f);
  EXPECT_EQ(a.fit.sigma_f, b.fit.sigma_f);
  EXPECT_EQ(a.iterations, b.iterations);
}
