#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hestonabc/fit.hpp"
#include "hestonabc/grid.hpp"
#include "hestonabc/model.hpp"
#include "hestonabc/sparse.hpp"

/// Rows at the truncation boundary S~ = S~max.
///
/// ApABC relates the outward slope at S~max to a memory integral of the
/// boundary values with the weakly singular kernel e^{-v u/8}/sqrt(u).
/// MApABC1 and MApABC2 add the source terms I1 and I2, which convolve the
/// kernel
///   K(u) = sqrt(2/(pi v u)) e^{-v u/8} + N(sqrt(v u)/2) - 1
/// with estimates of the dropped v-derivative terms of the operator.
///
/// The memory integrals use the trapezoidal rule on [0, tau_{n-1}] and the
/// substitution s = sqrt(tau_n - tau') on the last panel. The value of Q at
/// the singular endpoint tau' = tau_n is taken from the one-sided Q1 stencil
/// at i = I at the new level, so it enters the row as implicit coefficients.
namespace hestonabc::abc {

enum class BoundaryKind { original, apabc, mapabc1, mapabc2 };

/// Accepts original, apabc, mapabc1, mapabc2 (case-insensitive).
BoundaryKind parse_boundary_kind(const std::string& name);
std::string to_string(BoundaryKind kind);
const std::vector<BoundaryKind>& all_boundary_kinds();

/// Memory of boundary data per time level k = 0..levels()-1. Level 0 is the
/// initial level: V_I = S~max - 1, Q1 = 0 and zero fits.
class BoundaryHistory {
 public:
  BoundaryHistory(const Grid& grid, const SolutionField& initial);

  int levels() const { return static_cast<int>(v_boundary_.size()); }
  int n_v() const { return n_v_; }

  /// Appends one level. `q1` and `fits` may be empty (stored as zeros).
  void append(const SolutionField& field, std::vector<double> q1,
              std::vector<GaussLinFit> fits);
  void append_level(std::vector<double> v_boundary, std::vector<double> v_inner,
                    std::vector<double> q1, std::vector<GaussLinFit> fits);

  double v_boundary(int k, int j) const { return v_boundary_.at(k).at(j); }
  double v_inner(int k, int j) const { return v_inner_.at(k).at(j); }
  double q1(int k, int j) const { return q1_.at(k).at(j); }
  const GaussLinFit& fit(int k, int j) const { return fits_.at(k).at(j); }

  /// Throws DomainError unless levels 0..n-1 are present.
  void require_levels(int n) const;

 private:
  int n_v_;
  std::vector<std::vector<double>> v_boundary_;
  std::vector<std::vector<double>> v_inner_;
  std::vector<std::vector<double>> q1_;
  std::vector<std::vector<GaussLinFit>> fits_;
};

/// int_alpha^beta e^{-v(tau - t)/8} / sqrt(tau - t) dt in closed form.
double kernel_integral(double v, double tau, double alpha, double beta);

/// K(u) above, u > 0, v > 0.
double convolution_kernel(double u, double v);

/// (V_I - V_{I-1}) / dS~ = 1.
StencilRow original_bc_row(int j, const Grid& grid);

/// Diagonal weight of V^n_{I,j} in the ApABC row.
double apabc_diagonal(double v_j, const Grid& grid);

/// Needs history levels 0..n-1.
StencilRow apabc_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                     const HestonParams& params);

/// Q1 at i = I as column weights on the level it is applied to.
StencilRow q1_stencil(int j, const Grid& grid, const HestonParams& params);
/// Zero on the initial level.
double q1_estimate(int j, const SolutionField& field, const Grid& grid,
                   const HestonParams& params);

/// Weight sqrt(2 dtau / (pi v)) of the endpoint value Q(tau_n) in I1 and I2
/// (before the 1/S~max factor).
double endpoint_weight(double v_j, double dt);

/// History part of I1 at (j, tau_n): all levels k < n, including 1/S~max.
double i1_quadrature(int j, int n, const BoundaryHistory& history, const Grid& grid);

StencilRow mapabc1_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                       const HestonParams& params);

/// Central estimate for 1 <= i <= I-1, 1 <= j <= J-1; zero on the initial level.
double q2_estimate(int i, int j, const SolutionField& field, const Grid& grid,
                   const HestonParams& params);
/// q2_estimate for i = 1..I-1.
std::vector<double> q2_profile(int j, const SolutionField& field, const Grid& grid,
                               const HestonParams& params);

struct InnerQuadrature {
  int order = 32;
  /// Truncation of t = (ln S' - x_max) / sqrt(v u); e^{-t^2/2} < 1e-31 beyond.
  double t_max = 12.0;
  int max_panels = 4096;
};

/// G(u) = sqrt(2/(pi a)) e^{-a/8} int_0^inf t e^{-t^2/2 - sqrt(a) t/2} Q(x_max + sqrt(a) t) dt,
/// a = v u, Q the fitted curve in log-price. Reduces to c K(u) for Q = c.
double i2_kernel(double u, double v, const GaussLinFit& fit, double x_max,
                 const InnerQuadrature& quad = {});

/// History part of I2 at (j, tau_n), including 1/S~max.
double i2_quadrature(int j, int n, const BoundaryHistory& history, const Grid& grid,
                     const InnerQuadrature& quad = {});

StencilRow mapabc2_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                       const HestonParams& params, const InnerQuadrature& quad = {});

/// Row at (I, j) for the given treatment, 1 <= j <= J-1.
StencilRow boundary_row(BoundaryKind kind, int j, int n, const BoundaryHistory& history,
                        const Grid& grid, const HestonParams& params,
                        const InnerQuadrature& quad = {});

}  // namespace hestonabc::abc
