#include "hestonabc/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hestonabc/errors.hpp"

namespace hestonabc::scheme {

namespace {

StencilRow blank_row(int i, int j, const Grid& grid) {
  StencilRow row;
  row.row = grid.index(i, j);
  row.i = i;
  row.j = j;
  return row;
}

// Turns L into the theta-weighted time-step row for unknown `row.row`.
StencilRow time_step_row(const StencilRow& op, ThetaWeight theta, const Grid& grid,
                         const SolutionField& known) {
  StencilRow row = blank_row(op.i, op.j, grid);
  const double inv_dt = 1.0 / grid.dt();
  row.add(op.row, inv_dt);
  for (std::size_t k = 0; k < op.count; ++k) row.add(op.entries[k].col, -theta.theta * op.entries[k].coeff);
  double explicit_part = 0.0;
  if (theta.theta != 1.0) {
    explicit_part = (1.0 - theta.theta) * op.apply(known.values);
  }
  row.rhs = known.values[op.row] * inv_dt + explicit_part;
  return row;
}

}  // namespace

double samarskii_damping(double v_j, double dv, const HestonParams& params) {
  if (!(v_j > 0.0) || !(params.sigma > 0.0)) {
    throw DomainError("Samarskii damping needs v_j > 0 and sigma > 0");
  }
  return params.kappa * std::abs(params.eta - v_j) * dv / (params.sigma * params.sigma * v_j);
}

double v_diffusion_weight(double v_j, double dv, const HestonParams& params) {
  if (params.sigma == 0.0) return 0.0;
  const double r = samarskii_damping(v_j, dv, params);
  return 0.5 * params.sigma * params.sigma * v_j / (1.0 + r) / (dv * dv);
}

StencilRow interior_operator(int i, int j, const Grid& grid, const HestonParams& params) {
  if (i < 1 || i > grid.n_s() - 1 || j < 1 || j > grid.n_v() - 1) {
    throw DomainError("interior row (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") out of range");
  }
  const double ds = grid.ds();
  const double dv = grid.dv();
  const double s = grid.s(i);
  const double v = grid.v(j);

  const double css = 0.5 * v * s * s / (ds * ds);
  const double cross = params.rho * params.sigma * v * s / (4.0 * ds * dv);
  const double cvv = v_diffusion_weight(v, dv, params);
  const double drift_up = params.kappa * std::max(params.eta - v, 0.0) / dv;
  const double drift_down = params.kappa * std::min(params.eta - v, 0.0) / dv;

  StencilRow op = blank_row(i, j, grid);
  op.add(grid.index(i, j), -2.0 * css - 2.0 * cvv - drift_up + drift_down);
  op.add(grid.index(i + 1, j), css);
  op.add(grid.index(i - 1, j), css);
  op.add(grid.index(i, j + 1), cvv + drift_up);
  op.add(grid.index(i, j - 1), cvv - drift_down);
  if (cross != 0.0) {
    op.add(grid.index(i + 1, j + 1), cross);
    op.add(grid.index(i - 1, j + 1), -cross);
    op.add(grid.index(i - 1, j - 1), cross);
    op.add(grid.index(i + 1, j - 1), -cross);
  }
  return op;
}

StencilRow assemble_interior_row(int i, int j, ThetaWeight theta, const Grid& grid,
                                 const HestonParams& params, const SolutionField& known) {
  return time_step_row(interior_operator(i, j, grid, params), theta, grid, known);
}

StencilRow v0_boundary_row(int i, ThetaWeight theta, const Grid& grid,
                           const HestonParams& params, const SolutionField& known) {
  if (i < 1 || i > grid.n_s()) throw DomainError("v = 0 row index out of range");
  const double c = params.kappa * params.eta / grid.dv();
  StencilRow op = blank_row(i, 0, grid);
  op.add(grid.index(i, 0), -c);
  op.add(grid.index(i, 1), c);
  return time_step_row(op, theta, grid, known);
}

StencilRow vmax_extrapolation_row(int i, const Grid& grid) {
  if (i < 1 || i > grid.n_s()) throw DomainError("v = vmax row index out of range");
  StencilRow row = blank_row(i, grid.n_v(), grid);
  row.add(grid.index(i, grid.n_v()), 1.0);
  row.add(grid.index(i, grid.n_v() - 1), -1.0);
  return row;
}

StencilRow s0_dirichlet_row(int j, const Grid& grid) {
  if (j < 0 || j > grid.n_v()) throw DomainError("S = 0 row index out of range");
  StencilRow row = blank_row(0, j, grid);
  row.add(grid.index(0, j), 1.0);
  return row;
}

}  // namespace hestonabc::scheme
