#include "hestonabc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hestonabc/errors.hpp"

namespace hestonabc {

namespace {

int cells_for(double length, double h, const char* field) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidParameter(field, std::string(field) + " must be a positive multiple of h");
  }
  return static_cast<int>(rounded);
}

}  // namespace

GridSpec GridSpec::uniform(double h, double s_max, double v_max, double maturity) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParameter("h", "h must be positive");
  GridSpec spec;
  spec.s_max = s_max;
  spec.v_max = v_max;
  spec.n_s = cells_for(s_max, h, "s_max");
  spec.n_v = cells_for(v_max, h, "v_max");
  spec.n_t = cells_for(maturity, h, "maturity");
  return spec;
}

void validate_grid_spec(const GridSpec& spec, const ContractSpec& contract) {
  if (!(spec.s_max > 1.0) || !std::isfinite(spec.s_max)) {
    throw InvalidParameter("s_max", "s_max must exceed 1");
  }
  if (!(spec.v_max > 0.0) || !std::isfinite(spec.v_max)) {
    throw InvalidParameter("v_max", "v_max must be positive");
  }
  if (spec.n_s < 2) throw InvalidParameter("n_s", "n_s must be at least 2");
  if (spec.n_v < 2) throw InvalidParameter("n_v", "n_v must be at least 2");
  if (spec.n_t < 2) throw InvalidParameter("n_t", "n_t must be at least 2");
  if (!(contract.maturity > 0.0)) throw InvalidParameter("maturity", "maturity must be positive");
}

Grid::Grid(const GridSpec& spec, const ContractSpec& contract)
    : spec_(spec), maturity_(contract.maturity) {
  validate_grid_spec(spec, contract);
  ds_ = spec.s_max / spec.n_s;
  dv_ = spec.v_max / spec.n_v;
  dt_ = contract.maturity / spec.n_t;
}

Grid build_grid(const GridSpec& spec, const ContractSpec& contract) {
  return Grid(spec, contract);
}

SolutionField::SolutionField(int n_s_, int n_v_, int time_index_, double fill)
    : n_s(n_s_),
      n_v(n_v_),
      time_index(time_index_),
      values(static_cast<std::size_t>(n_s_ + 1) * static_cast<std::size_t>(n_v_ + 1), fill) {}

SolutionField::SolutionField(const Grid& grid, int time_index_, double fill)
    : SolutionField(grid.n_s(), grid.n_v(), time_index_, fill) {}

double payoff_cell_average(double a, double b) {
  // antiderivative of (s - 1)^+
  auto prim = [](double x) {
    const double e = std::max(x - 1.0, 0.0);
    return 0.5 * e * e;
  };
  return (prim(b) - prim(a)) / (b - a);
}

SolutionField initial_condition(const Grid& grid) {
  SolutionField field(grid, 0);
  const double half = 0.5 * grid.ds();
  std::vector<double> row(static_cast<std::size_t>(grid.n_s() + 1));
  row[0] = payoff_cell_average(0.0, half);
  for (int i = 1; i <= grid.n_s(); ++i) {
    row[static_cast<std::size_t>(i)] = payoff_cell_average(grid.s(i) - half, grid.s(i) + half);
  }
  for (int j = 0; j <= grid.n_v(); ++j) {
    for (int i = 0; i <= grid.n_s(); ++i) field.at(i, j) = row[static_cast<std::size_t>(i)];
  }
  return field;
}

}  // namespace hestonabc
