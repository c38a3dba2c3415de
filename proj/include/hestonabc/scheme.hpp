#pragma once

#include "hestonabc/grid.hpp"
#include "hestonabc/model.hpp"
#include "hestonabc/sparse.hpp"

namespace hestonabc::scheme {

/// Time weight of the implicit half: 1 on the first step, 1/2 afterwards.
struct ThetaWeight {
  double theta = 0.5;

  static ThetaWeight for_step(int n) { return {n == 1 ? 1.0 : 0.5}; }
};

/// R_j = kappa |eta - v_j| dv / (sigma^2 v_j). Requires v_j > 0 and sigma > 0.
double samarskii_damping(double v_j, double dv, const HestonParams& params);

/// Damped v-diffusion weight 1/2 sigma^2 v_j / (1 + R_j) / dv^2; zero when sigma = 0.
double v_diffusion_weight(double v_j, double dv, const HestonParams& params);

/// Spatial operator L applied at interior node (i, j), as column weights:
///   1/2 v S^2 D_SS + rho sigma v S D_Sv + damped 1/2 sigma^2 v D_vv
///   + kappa (eta - v)^+ D_v^+ + kappa (eta - v)^- D_v^-
/// with (eta - v)^- = min(eta - v, 0).
StencilRow interior_operator(int i, int j, const Grid& grid, const HestonParams& params);

/// (V^{n+1} - V^n)/dtau = theta L V^{n+1} + (1 - theta) L V^n.
StencilRow assemble_interior_row(int i, int j, ThetaWeight theta, const Grid& grid,
                                 const HestonParams& params, const SolutionField& known);

/// kappa eta D_v^+ V = V_tau at v = 0, theta-weighted. Valid for 1 <= i <= I.
StencilRow v0_boundary_row(int i, ThetaWeight theta, const Grid& grid,
                           const HestonParams& params, const SolutionField& known);

/// V_{i,J} - V_{i,J-1} = 0.
StencilRow vmax_extrapolation_row(int i, const Grid& grid);

/// V_{0,j} = 0.
StencilRow s0_dirichlet_row(int j, const Grid& grid);

}  // namespace hestonabc::scheme
