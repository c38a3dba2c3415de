#include "hestonabc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "hestonabc/errors.hpp"
#include "hestonabc/scheme.hpp"

namespace hestonabc {

std::vector<StencilRow> assemble_step_rows(int n, abc::BoundaryKind kind, const Grid& grid,
                                           const HestonParams& params,
                                           const SolutionField& known,
                                           const abc::BoundaryHistory& history,
                                           const abc::InnerQuadrature& quad) {
  if (n < 1) throw DomainError("step index must be at least 1");
  const auto theta = scheme::ThetaWeight::for_step(n);
  const int ni = grid.n_s();
  const int nj = grid.n_v();
  std::vector<StencilRow> rows(grid.size());
  auto put = [&](StencilRow row) { rows[row.row] = row; };

  for (int j = 0; j <= nj; ++j) put(scheme::s0_dirichlet_row(j, grid));
  for (int i = 1; i <= ni; ++i) {
    put(scheme::v0_boundary_row(i, theta, grid, params, known));
    put(scheme::vmax_extrapolation_row(i, grid));
  }
  for (int j = 1; j <= nj - 1; ++j) {
    for (int i = 1; i <= ni - 1; ++i) {
      put(scheme::assemble_interior_row(i, j, theta, grid, params, known));
    }
    put(abc::boundary_row(kind, j, n, history, grid, params, quad));
  }
  return rows;
}

SparseSystem assemble_step(int n, abc::BoundaryKind kind, const Grid& grid,
                           const HestonParams& params, const SolutionField& known,
                           const abc::BoundaryHistory& history,
                           const abc::InnerQuadrature& quad) {
  SparseSystem system(grid.size());
  for (const auto& row : assemble_step_rows(n, kind, grid, params, known, history, quad)) {
    system.add_row(row);
  }
  return system;
}

namespace {

std::vector<GaussLinFit> fit_level(const SolutionField& field, const Grid& grid,
                                   const HestonParams& params, const FitOptions& options,
                                   MarchStats& stats) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(grid.n_s() - 1));
  for (int i = 1; i <= grid.n_s() - 1; ++i) x.push_back(std::log(grid.s(i)));
  std::vector<GaussLinFit> fits(static_cast<std::size_t>(grid.n_v() + 1));
  for (int j = 1; j <= grid.n_v() - 1; ++j) {
    const auto result = fit_gauss_linear(x, abc::q2_profile(j, field, grid, params), options);
    fits[static_cast<std::size_t>(j)] = result.fit;
    ++stats.fits;
    if (result.quality == FitQuality::max_iterations || result.quality == FitQuality::stalled) {
      ++stats.unconverged_fits;
    }
    stats.worst_fit_relative_rms = std::max(stats.worst_fit_relative_rms, result.relative_rms);
  }
  return fits;
}

}  // namespace

MarchResult march(const Grid& grid, const HestonParams& params, const ContractSpec& contract,
                  abc::BoundaryKind kind, const MarchOptions& options) {
  require_valid(params, contract);
  if (std::abs(grid.maturity() - contract.maturity) > 1e-12 * contract.maturity) {
    throw InvalidParameter("maturity", "grid and contract maturities differ");
  }
  if (kind == abc::BoundaryKind::mapabc2 && grid.n_s() - 1 < 5) {
    throw InvalidParameter("n_s", "MApABC2 needs at least 6 cells in S~ for the Q2 fit");
  }
  const auto start = std::chrono::steady_clock::now();

  SolutionField field = initial_condition(grid);
  MarchResult result{field, {}, abc::BoundaryHistory(grid, field), {}};
  auto snapshot_wanted = [&](int n) {
    return std::find(options.snapshot_levels.begin(), options.snapshot_levels.end(), n) !=
           options.snapshot_levels.end();
  };
  if (snapshot_wanted(0)) result.snapshots.push_back(field);

  // The step matrix depends only on theta, so it is factorised twice.
  std::optional<StepSolver> first_step;
  std::optional<StepSolver> later_steps;

  for (int n = 1; n <= grid.n_t(); ++n) {
    const SparseSystem system =
        assemble_step(n, kind, grid, params, field, result.history, options.quadrature);
    const std::string label = "step " + std::to_string(n);
    const StepSolver* solver = nullptr;
    if (n == 1) {
      first_step.emplace(system.matrix(), options.linear);
      solver = &*first_step;
    } else {
      if (!later_steps) later_steps.emplace(system.matrix(), options.linear);
      solver = &*later_steps;
    }
    const SolveResult solved = solver->solve(system.rhs, label);
    result.stats.linear_iterations += solved.stats.iterations;
    result.stats.max_relative_residual =
        std::max(result.stats.max_relative_residual, solved.stats.relative_residual);

    SolutionField next(grid, n);
    for (std::size_t k = 0; k < next.values.size(); ++k) {
      next.values[k] = solved.x[static_cast<Eigen::Index>(k)];
      if (!std::isfinite(next.values[k])) throw SolverError(label + ": non-finite solution");
    }

    std::vector<double> q1;
    std::vector<GaussLinFit> fits;
    if (kind == abc::BoundaryKind::mapabc1) {
      q1.assign(static_cast<std::size_t>(grid.n_v() + 1), 0.0);
      for (int j = 1; j <= grid.n_v() - 1; ++j) {
        q1[static_cast<std::size_t>(j)] = abc::q1_estimate(j, next, grid, params);
      }
    } else if (kind == abc::BoundaryKind::mapabc2) {
      fits = fit_level(next, grid, params, options.fit, result.stats);
    }
    result.history.append(next, std::move(q1), std::move(fits));

    field = std::move(next);
    if (snapshot_wanted(n)) result.snapshots.push_back(field);
    if (options.on_step) options.on_step(n, field);
    ++result.stats.steps;
  }
  result.final_field = std::move(field);
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace hestonabc
