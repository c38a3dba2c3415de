#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace hestonabc {

/// One linear equation: sum_k coeff_k x[col_k] = rhs.
struct StencilRow {
  static constexpr std::size_t capacity = 9;

  struct Entry {
    std::size_t col = 0;
    double coeff = 0.0;
  };

  std::size_t row = 0;
  int i = 0;
  int j = 0;
  std::array<Entry, capacity> entries{};
  std::size_t count = 0;
  double rhs = 0.0;

  /// Adds to an existing column or appends a new one. Throws SolverError past capacity.
  void add(std::size_t col, double coeff);
  /// Coefficient of `col`, zero when absent.
  double coeff(std::size_t col) const;
  /// Sum over entries of coeff * x[col].
  double apply(const std::vector<double>& x) const;
};

struct SparseSystem {
  std::size_t dim = 0;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs;

  explicit SparseSystem(std::size_t dim_ = 0) : dim(dim_), rhs(Eigen::VectorXd::Zero(dim_)) {}

  void add_row(const StencilRow& row);
  Eigen::SparseMatrix<double> matrix() const;
};

enum class LinearMethod { sparse_lu, bicgstab };

struct SolverOptions {
  LinearMethod method = LinearMethod::sparse_lu;
  double tolerance = 1e-10;
  /// Zero selects 10 * dim.
  long max_iterations = 0;
};

struct SolveStats {
  long iterations = 0;
  double relative_residual = 0.0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveStats stats;
};

/// ||A x - b|| / ||b||, or ||A x|| when b = 0.
double relative_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b);

/// Throws SolverError on breakdown, non-convergence or a residual above tolerance.
SolveResult solve_sparse(const SparseSystem& system, const SolverOptions& options = {});

/// A fixed matrix prepared once and reused for many right-hand sides.
class StepSolver {
 public:
  StepSolver(Eigen::SparseMatrix<double> matrix, const SolverOptions& options);
  ~StepSolver();
  StepSolver(StepSolver&&) noexcept;
  StepSolver& operator=(StepSolver&&) noexcept;

  /// `label` names the step in error messages.
  SolveResult solve(const Eigen::VectorXd& rhs, const std::string& label) const;

  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

 private:
  struct Impl;
  Eigen::SparseMatrix<double> matrix_;
  SolverOptions options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hestonabc
