#pragma once

#include <cstddef>
#include <vector>

#include "hestonabc/model.hpp"

namespace hestonabc {

/// Cell counts and truncation bounds of the (S~, v, tau) lattice.
struct GridSpec {
  double s_max = 4.0;
  double v_max = 4.0;
  int n_s = 2;  // I
  int n_v = 2;  // J
  int n_t = 2;  // N

  /// Equal steps dS~ = dv = dtau = h. Throws InvalidParameter when a bound is
  /// not an integer multiple of h (to 1e-9 relative).
  static GridSpec uniform(double h, double s_max, double v_max, double maturity);
};

/// Throws InvalidParameter naming the first bad field.
void validate_grid_spec(const GridSpec& spec, const ContractSpec& contract);

class Grid {
 public:
  Grid(const GridSpec& spec, const ContractSpec& contract);

  int n_s() const { return spec_.n_s; }
  int n_v() const { return spec_.n_v; }
  int n_t() const { return spec_.n_t; }
  double s_max() const { return spec_.s_max; }
  double v_max() const { return spec_.v_max; }
  double maturity() const { return maturity_; }
  double ds() const { return ds_; }
  double dv() const { return dv_; }
  double dt() const { return dt_; }

  double s(int i) const { return i * ds_; }
  double v(int j) const { return j * dv_; }
  double tau(int n) const { return n * dt_; }

  /// Unknown ordering is j-major with i fastest.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec_.n_s + 1) +
           static_cast<std::size_t>(i);
  }
  std::size_t size() const {
    return static_cast<std::size_t>(spec_.n_s + 1) * static_cast<std::size_t>(spec_.n_v + 1);
  }

  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  double maturity_;
  double ds_;
  double dv_;
  double dt_;
};

Grid build_grid(const GridSpec& spec, const ContractSpec& contract);

/// Node values V_{i,j} at one time level, stored in Grid::index order.
struct SolutionField {
  int n_s = 0;
  int n_v = 0;
  int time_index = 0;
  std::vector<double> values;

  SolutionField() = default;
  SolutionField(int n_s_, int n_v_, int time_index_ = 0, double fill = 0.0);
  explicit SolutionField(const Grid& grid, int time_index_ = 0, double fill = 0.0);

  double& at(int i, int j) { return values[idx(i, j)]; }
  double at(int i, int j) const { return values[idx(i, j)]; }
  bool same_shape(const SolutionField& other) const {
    return n_s == other.n_s && n_v == other.n_v;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_s + 1) +
           static_cast<std::size_t>(i);
  }
};

/// Average of (s - 1)^+ over [a, b], exact for the piecewise linear payoff.
double payoff_cell_average(double a, double b);

/// Cell-averaged payoff. Node i = 0 averages over the half cell inside the
/// domain; node i = I averages over the full cell, so it carries S~max - 1
/// like the boundary history does.
SolutionField initial_condition(const Grid& grid);

}  // namespace hestonabc
