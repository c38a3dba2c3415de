#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "hestonabc/errors.hpp"
#include "hestonabc/scheme.hpp"

using namespace hestonabc;
using namespace hestonabc::scheme;

namespace {

const HestonParams kSet1{4.0, 0.1, 0.1, -0.5, 0.0};
const ContractSpec kContract{1.0, 2.0};

Grid small_grid() { return Grid(GridSpec::uniform(0.2, 4.0, 4.0, 2.0), kContract); }

SolutionField sample(const Grid& g, const std::function<double(double, double)>& f) {
  SolutionField field(g);
  for (int j = 0; j <= g.n_v(); ++j)
    for (int i = 0; i <= g.n_s(); ++i) field.at(i, j) = f(g.s(i), g.v(j));
  return field;
}

}  // namespace

TEST(Theta, ImplicitFirstStepThenCrankNicolson) {
  EXPECT_EQ(ThetaWeight::for_step(1).theta, 1.0);
  EXPECT_EQ(ThetaWeight::for_step(2).theta, 0.5);
  EXPECT_EQ(ThetaWeight::for_step(40).theta, 0.5);
}

TEST(Samarskii, DampingAndWeight) {
  const double dv = 0.2;
  const double v = 0.6;
  const double r = 4.0 * 0.5 * 0.2 / (0.01 * 0.6);
  EXPECT_DOUBLE_EQ(samarskii_damping(v, dv, kSet1), r);
  EXPECT_DOUBLE_EQ(v_diffusion_weight(v, dv, kSet1), 0.5 * 0.01 * 0.6 / (1 + r) / (dv * dv));
  EXPECT_EQ(samarskii_damping(kSet1.eta, dv, kSet1), 0.0);
  EXPECT_THROW(samarskii_damping(0.0, dv, kSet1), DomainError);
  HestonParams flat = kSet1;
  flat.sigma = 0.0;
  EXPECT_EQ(v_diffusion_weight(v, dv, flat), 0.0);
  EXPECT_THROW(samarskii_damping(v, dv, flat), DomainError);
}

TEST(InteriorOperator, AnnihilatesConstants) {
  const auto g = small_grid();
  for (int j = 1; j < g.n_v(); ++j)
    for (int i = 1; i < g.n_s(); ++i) {
      const auto op = interior_operator(i, j, g, kSet1);
      double sum = 0.0;
      for (std::size_t k = 0; k < op.count; ++k) sum += op.entries[k].coeff;
      ASSERT_NEAR(sum, 0.0, 1e-9 * (1 + std::abs(op.coeff(g.index(i, j)))));
    }
}

TEST(InteriorOperator, ExactOnLowOrderPolynomials) {
  const auto g = small_grid();
  const auto s2 = sample(g, [](double s, double) { return s * s; });
  const auto lin_v = sample(g, [](double, double v) { return v; });
  const auto sv = sample(g, [](double s, double v) { return s * v; });
  for (int j = 1; j < g.n_v(); ++j)
    for (int i = 1; i < g.n_s(); ++i) {
      const double s = g.s(i), v = g.v(j);
      const auto op = interior_operator(i, j, g, kSet1);
      ASSERT_NEAR(op.apply(s2.values), v * s * s, 1e-10);
      ASSERT_NEAR(op.apply(lin_v.values), kSet1.kappa * (kSet1.eta - v), 1e-10);
      // the v-drift sees S v as S times a linear function, the cross term gives rho sigma v S
      ASSERT_NEAR(op.apply(sv.values),
                  kSet1.rho * kSet1.sigma * v * s + kSet1.kappa * (kSet1.eta - v) * s, 1e-10);
    }
}

TEST(InteriorOperator, DriftIsUpwind) {
  const auto g = small_grid();
  // v = 0.2 > eta: backward difference, no (i, j+1) drift weight beyond diffusion
  const int j = 1;
  const auto op = interior_operator(3, j, g, kSet1);
  const double cvv = v_diffusion_weight(g.v(j), g.dv(), kSet1);
  EXPECT_DOUBLE_EQ(op.coeff(g.index(3, j + 1)), cvv);
  EXPECT_DOUBLE_EQ(op.coeff(g.index(3, j - 1)),
                   cvv - kSet1.kappa * (kSet1.eta - g.v(j)) / g.dv());
  EXPECT_EQ(op.count, 9u);
  HestonParams uncorrelated = kSet1;
  uncorrelated.rho = 0.0;
  EXPECT_EQ(interior_operator(3, j, g, uncorrelated).count, 5u);
}

TEST(InteriorOperator, OutOfRangeIsRejected) {
  const auto g = small_grid();
  EXPECT_THROW(interior_operator(0, 3, g, kSet1), DomainError);
  EXPECT_THROW(interior_operator(3, g.n_v(), g, kSet1), DomainError);
}

TEST(TimeRow, BackwardEulerAndCrankNicolson) {
  const auto g = small_grid();
  const auto known = sample(g, [](double s, double v) { return s * s + v; });
  const auto op = interior_operator(4, 5, g, kSet1);
  const auto be = assemble_interior_row(4, 5, ThetaWeight::for_step(1), g, kSet1, known);
  const auto cn = assemble_interior_row(4, 5, ThetaWeight::for_step(2), g, kSet1, known);
  const auto diag = g.index(4, 5);
  EXPECT_DOUBLE_EQ(be.coeff(diag), 1.0 / g.dt() - op.coeff(diag));
  EXPECT_DOUBLE_EQ(cn.coeff(diag), 1.0 / g.dt() - 0.5 * op.coeff(diag));
  EXPECT_DOUBLE_EQ(be.rhs, known.at(4, 5) / g.dt());
  EXPECT_NEAR(cn.rhs, known.at(4, 5) / g.dt() + 0.5 * op.apply(known.values), 1e-12);
  EXPECT_DOUBLE_EQ(cn.coeff(g.index(5, 5)), -0.5 * op.coeff(g.index(5, 5)));
}

TEST(TimeRow, SteadyStateOfOperatorIsFixedPoint) {
  // A field with L V = 0 reproduces itself under either theta.
  const auto g = small_grid();
  const auto ones = sample(g, [](double, double) { return 1.0; });
  for (int n : {1, 2}) {
    const auto row = assemble_interior_row(7, 9, ThetaWeight::for_step(n), g, kSet1, ones);
    EXPECT_NEAR(row.apply(ones.values), row.rhs, 1e-10);
  }
}

TEST(BoundaryRows, VarianceZeroTransport) {
  const auto g = small_grid();
  const auto known = sample(g, [](double s, double v) { return s + 2 * v; });
  const auto row = v0_boundary_row(6, ThetaWeight::for_step(2), g, kSet1, known);
  const double c = kSet1.kappa * kSet1.eta / g.dv();
  EXPECT_DOUBLE_EQ(row.coeff(g.index(6, 0)), 1.0 / g.dt() + 0.5 * c);
  EXPECT_DOUBLE_EQ(row.coeff(g.index(6, 1)), -0.5 * c);
  EXPECT_NEAR(row.rhs, known.at(6, 0) / g.dt() + 0.5 * c * (known.at(6, 1) - known.at(6, 0)),
              1e-12);
  EXPECT_EQ(row.count, 2u);
  EXPECT_NO_THROW(v0_boundary_row(g.n_s(), ThetaWeight::for_step(1), g, kSet1, known));
  EXPECT_THROW(v0_boundary_row(0, ThetaWeight::for_step(1), g, kSet1, known), DomainError);
}

TEST(BoundaryRows, ExtrapolationAndDirichlet) {
  const auto g = small_grid();
  const auto top = vmax_extrapolation_row(3, g);
  EXPECT_EQ(top.coeff(g.index(3, g.n_v())), 1.0);
  EXPECT_EQ(top.coeff(g.index(3, g.n_v() - 1)), -1.0);
  EXPECT_EQ(top.rhs, 0.0);
  const auto left = s0_dirichlet_row(4, g);
  EXPECT_EQ(left.count, 1u);
  EXPECT_EQ(left.coeff(g.index(0, 4)), 1.0);
  EXPECT_EQ(left.rhs, 0.0);
  EXPECT_THROW(s0_dirichlet_row(g.n_v() + 1, g), DomainError);
}
