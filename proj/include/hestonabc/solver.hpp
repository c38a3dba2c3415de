#pragma once

#include <functional>
#include <vector>

#include "hestonabc/abc.hpp"
#include "hestonabc/fit.hpp"
#include "hestonabc/grid.hpp"
#include "hestonabc/model.hpp"
#include "hestonabc/sparse.hpp"

namespace hestonabc {

/// All rows of step n (theta = 1 for n = 1, 1/2 afterwards), one per unknown,
/// in Grid::index order.
std::vector<StencilRow> assemble_step_rows(int n, abc::BoundaryKind kind, const Grid& grid,
                                           const HestonParams& params,
                                           const SolutionField& known,
                                           const abc::BoundaryHistory& history,
                                           const abc::InnerQuadrature& quad = {});

SparseSystem assemble_step(int n, abc::BoundaryKind kind, const Grid& grid,
                           const HestonParams& params, const SolutionField& known,
                           const abc::BoundaryHistory& history,
                           const abc::InnerQuadrature& quad = {});

struct MarchOptions {
  SolverOptions linear;
  abc::InnerQuadrature quadrature;
  FitOptions fit;
  /// Time levels copied into MarchResult::snapshots.
  std::vector<int> snapshot_levels;
  /// Called after every step with the new level.
  std::function<void(int n, const SolutionField&)> on_step;
};

struct MarchStats {
  int steps = 0;
  long linear_iterations = 0;
  double max_relative_residual = 0.0;
  double wall_seconds = 0.0;
  int fits = 0;
  int unconverged_fits = 0;
  double worst_fit_relative_rms = 0.0;
};

struct MarchResult {
  SolutionField final_field;
  std::vector<SolutionField> snapshots;
  abc::BoundaryHistory history;
  MarchStats stats;
};

/// Backward Euler on step 1, Crank-Nicolson afterwards, from the cell-averaged
/// payoff to tau = T. Only two time levels and the boundary history are kept.
/// Throws InvalidParameter for invalid inputs and SolverError naming the step
/// on a failed solve.
MarchResult march(const Grid& grid, const HestonParams& params, const ContractSpec& contract,
                  abc::BoundaryKind kind, const MarchOptions& options = {});

}  // namespace hestonabc
