#include "hestonabc/sparse.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "hestonabc/errors.hpp"

namespace hestonabc {

void StencilRow::add(std::size_t col, double value) {
  for (std::size_t k = 0; k < count; ++k) {
    if (entries[k].col == col) {
      entries[k].coeff += value;
      return;
    }
  }
  if (count == capacity) throw SolverError("stencil row exceeds 9 entries");
  entries[count++] = {col, value};
}

double StencilRow::coeff(std::size_t col) const {
  for (std::size_t k = 0; k < count; ++k) {
    if (entries[k].col == col) return entries[k].coeff;
  }
  return 0.0;
}

double StencilRow::apply(const std::vector<double>& x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) sum += entries[k].coeff * x[entries[k].col];
  return sum;
}

void SparseSystem::add_row(const StencilRow& row) {
  for (std::size_t k = 0; k < row.count; ++k) {
    triplets.emplace_back(static_cast<int>(row.row), static_cast<int>(row.entries[k].col),
                          row.entries[k].coeff);
  }
  rhs[static_cast<Eigen::Index>(row.row)] = row.rhs;
}

Eigen::SparseMatrix<double> SparseSystem::matrix() const {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

double relative_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double r = (a * x - b).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

struct StepSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> bicg;
};

StepSolver::StepSolver(Eigen::SparseMatrix<double> matrix, const SolverOptions& options)
    : matrix_(std::move(matrix)), options_(options), impl_(std::make_unique<Impl>()) {
  matrix_.makeCompressed();
  if (options_.method == LinearMethod::sparse_lu) {
    impl_->lu.analyzePattern(matrix_);
    impl_->lu.factorize(matrix_);
    if (impl_->lu.info() != Eigen::Success) {
      throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
    }
  } else {
    const long cap = options_.max_iterations > 0 ? options_.max_iterations
                                                 : 10 * static_cast<long>(matrix_.rows());
    impl_->bicg.setTolerance(0.1 * options_.tolerance);
    impl_->bicg.setMaxIterations(cap);
    impl_->bicg.compute(matrix_);
    if (impl_->bicg.info() != Eigen::Success) {
      throw SolverError("BiCGSTAB preconditioner setup failed");
    }
  }
}

StepSolver::~StepSolver() = default;
StepSolver::StepSolver(StepSolver&&) noexcept = default;
StepSolver& StepSolver::operator=(StepSolver&&) noexcept = default;

SolveResult StepSolver::solve(const Eigen::VectorXd& rhs, const std::string& label) const {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  if (rhs.norm() == 0.0) {
    result.x = Eigen::VectorXd::Zero(rhs.size());
  } else if (options_.method == LinearMethod::sparse_lu) {
    result.x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw SolverError(label + ": sparse LU solve failed");
    result.stats.iterations = 1;
  } else {
    result.x = impl_->bicg.solve(rhs);
    result.stats.iterations = impl_->bicg.iterations();
    if (impl_->bicg.info() != Eigen::Success) {
      throw SolverError(label + ": BiCGSTAB did not converge within " +
                        std::to_string(impl_->bicg.maxIterations()) + " iterations");
    }
  }
  result.stats.relative_residual = relative_residual(matrix_, result.x, rhs);
  if (!std::isfinite(result.stats.relative_residual) ||
      result.stats.relative_residual > options_.tolerance) {
    throw SolverError(label + ": relative residual " +
                      std::to_string(result.stats.relative_residual) + " above tolerance");
  }
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult solve_sparse(const SparseSystem& system, const SolverOptions& options) {
  StepSolver solver(system.matrix(), options);
  return solver.solve(system.rhs, "linear solve");
}

}  // namespace hestonabc
