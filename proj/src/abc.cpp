#include "hestonabc/abc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "hestonabc/errors.hpp"
#include "hestonabc/normal.hpp"

namespace hestonabc::abc {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2 pi)

void check_boundary_j(int j, const Grid& grid) {
  if (j < 1 || j > grid.n_v() - 1) {
    throw DomainError("boundary row index j=" + std::to_string(j) + " out of range");
  }
}

StencilRow blank_boundary_row(int j, const Grid& grid) {
  StencilRow row;
  row.row = grid.index(grid.n_s(), j);
  row.i = grid.n_s();
  row.j = j;
  return row;
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule make_gauss_rule(int order) {
  GaussRule rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(order);
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(order, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
    if (x != 0.0) {
      rule.nodes.push_back(-x);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

const GaussRule& gauss_rule(int order) {
  static const GaussRule rule32 = make_gauss_rule(32);
  static const GaussRule rule64 = make_gauss_rule(64);
  if (order == 32) return rule32;
  if (order == 64) return rule64;
  thread_local int cached_order = 0;
  thread_local GaussRule cached;
  if (cached_order != order) {
    if (order < 2) throw DomainError("Gauss-Legendre order must be at least 2");
    cached = make_gauss_rule(order);
    cached_order = order;
  }
  return cached;
}

// Shared outer rule of I1 and I2: sum_k w_k g(tau_n - tau_k, k) over k < n,
// with the singular endpoint k = n excluded.
template <typename Term>
double outer_history_sum(int n, double dt, Term term) {
  if (n == 1) return dt * term(dt, 0);
  double sum = 0.5 * dt * term(n * dt, 0);
  for (int k = 1; k <= n - 2; ++k) sum += dt * term((n - k) * dt, k);
  sum += 1.5 * dt * term(dt, n - 1);
  return sum;
}

}  // namespace

BoundaryKind parse_boundary_kind(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "original") return BoundaryKind::original;
  if (lower == "apabc") return BoundaryKind::apabc;
  if (lower == "mapabc1") return BoundaryKind::mapabc1;
  if (lower == "mapabc2") return BoundaryKind::mapabc2;
  throw InvalidParameter("bc", "unknown boundary kind '" + name + "'");
}

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::original:
      return "original";
    case BoundaryKind::apabc:
      return "apabc";
    case BoundaryKind::mapabc1:
      return "mapabc1";
    case BoundaryKind::mapabc2:
      return "mapabc2";
  }
  return "unknown";
}

const std::vector<BoundaryKind>& all_boundary_kinds() {
  static const std::vector<BoundaryKind> kinds{BoundaryKind::original, BoundaryKind::apabc,
                                               BoundaryKind::mapabc1, BoundaryKind::mapabc2};
  return kinds;
}

BoundaryHistory::BoundaryHistory(const Grid& grid, const SolutionField& initial)
    : n_v_(grid.n_v()) {
  const auto width = static_cast<std::size_t>(n_v_ + 1);
  std::vector<double> inner(width);
  for (int j = 0; j <= n_v_; ++j) inner[static_cast<std::size_t>(j)] = initial.at(grid.n_s() - 1, j);
  append_level(std::vector<double>(width, grid.s_max() - 1.0), std::move(inner), {}, {});
}

void BoundaryHistory::append(const SolutionField& field, std::vector<double> q1,
                             std::vector<GaussLinFit> fits) {
  const auto width = static_cast<std::size_t>(n_v_ + 1);
  std::vector<double> outer(width);
  std::vector<double> inner(width);
  for (int j = 0; j <= n_v_; ++j) {
    outer[static_cast<std::size_t>(j)] = field.at(field.n_s, j);
    inner[static_cast<std::size_t>(j)] = field.at(field.n_s - 1, j);
  }
  append_level(std::move(outer), std::move(inner), std::move(q1), std::move(fits));
}

void BoundaryHistory::append_level(std::vector<double> v_boundary, std::vector<double> v_inner,
                                   std::vector<double> q1, std::vector<GaussLinFit> fits) {
  const auto width = static_cast<std::size_t>(n_v_ + 1);
  if (q1.empty()) q1.assign(width, 0.0);
  if (fits.empty()) fits.assign(width, GaussLinFit{});
  if (v_boundary.size() != width || v_inner.size() != width || q1.size() != width ||
      fits.size() != width) {
    throw DomainError("boundary history level has the wrong width");
  }
  v_boundary_.push_back(std::move(v_boundary));
  v_inner_.push_back(std::move(v_inner));
  q1_.push_back(std::move(q1));
  fits_.push_back(std::move(fits));
}

void BoundaryHistory::require_levels(int n) const {
  if (levels() < n) {
    throw DomainError("boundary history holds " + std::to_string(levels()) +
                      " levels, need " + std::to_string(n));
  }
}

double kernel_integral(double v, double tau, double alpha, double beta) {
  if (!(v > 0.0) || !(alpha >= 0.0) || !(alpha <= beta) || !(beta <= tau)) {
    throw DomainError("kernel_integral requires v > 0 and 0 <= alpha <= beta <= tau");
  }
  return 4.0 * kSqrt2Pi / std::sqrt(v) *
         (normal_cdf(0.5 * std::sqrt(v * (tau - alpha))) -
          normal_cdf(0.5 * std::sqrt(v * (tau - beta))));
}

double convolution_kernel(double u, double v) {
  if (!(u > 0.0) || !(v > 0.0)) throw DomainError("convolution kernel needs u > 0, v > 0");
  const double a = v * u;
  return std::sqrt(2.0 / (std::numbers::pi * a)) * std::exp(-a / 8.0) +
         normal_cdf(0.5 * std::sqrt(a)) - 1.0;
}

StencilRow original_bc_row(int j, const Grid& grid) {
  check_boundary_j(j, grid);
  StencilRow row = blank_boundary_row(j, grid);
  row.add(grid.index(grid.n_s(), j), 1.0);
  row.add(grid.index(grid.n_s() - 1, j), -1.0);
  row.rhs = grid.ds();
  return row;
}

double apabc_diagonal(double v_j, const Grid& grid) {
  const double sv = std::sqrt(v_j * grid.dt());
  return 1.0 + grid.ds() / grid.s_max() * ((0.25 * sv + 2.0 / sv) / kSqrt2Pi - 0.5);
}

StencilRow apabc_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                     const HestonParams& /*params*/) {
  check_boundary_j(j, grid);
  if (n < 1) throw DomainError("ApABC row needs n >= 1");
  history.require_levels(n);
  const double v = grid.v(j);
  const double dt = grid.dt();
  const double ds = grid.ds();
  const double s_max = grid.s_max();
  const double sv = std::sqrt(v * dt);
  const double a = 0.25 * sv + 2.0 / sv;
  const double b = 2.0 / sv;
  auto decay = [&](int m) { return std::exp(-v * m * dt / 8.0); };
  auto level = [&](int k) { return history.v_boundary(k, j); };
  auto combo = [&](int k) { return a * level(k) - b * level(k - 1); };

  // Memory sum in units of sqrt(dtau); the known part of the newest panel
  // (-b V^{n-1}) is included, the unknown part (a V^n) sits on the diagonal.
  double sum = 0.0;
  if (n == 1) {
    sum += decay(1) * 0.25 * level(0) * sv;
  } else {
    sum += 0.5 * decay(n) * 0.25 * level(0) * sv / std::sqrt(static_cast<double>(n));
    for (int k = 1; k <= n - 2; ++k) {
      sum += decay(n - k) * combo(k) / std::sqrt(static_cast<double>(n - k));
    }
    sum += 1.5 * decay(1) * combo(n - 1);
  }
  sum -= b * level(n - 1);

  StencilRow row = blank_boundary_row(j, grid);
  row.add(grid.index(grid.n_s(), j), apabc_diagonal(v, grid));
  row.add(grid.index(grid.n_s() - 1, j), -1.0);
  row.rhs = -ds / s_max / kSqrt2Pi * sum + ds / s_max +
            ds * (s_max - 1.0) / s_max * normal_cdf(0.5 * std::sqrt(v * n * dt));
  return row;
}

StencilRow q1_stencil(int j, const Grid& grid, const HestonParams& params) {
  check_boundary_j(j, grid);
  const int i = grid.n_s();
  const double v = grid.v(j);
  const double dv = grid.dv();
  const double cx = params.rho * params.sigma * v * grid.s_max() / (grid.ds() * dv);
  const double cvv = 0.5 * params.sigma * params.sigma * v / (dv * dv);
  const double up = params.kappa * std::max(params.eta - v, 0.0) / dv;
  const double down = params.kappa * std::min(params.eta - v, 0.0) / dv;
  StencilRow row = blank_boundary_row(j, grid);
  row.add(grid.index(i, j + 1), cx + cvv + up);
  row.add(grid.index(i - 1, j + 1), -cx);
  row.add(grid.index(i, j), -cx - 2.0 * cvv - up + down);
  row.add(grid.index(i - 1, j), cx);
  row.add(grid.index(i, j - 1), cvv - down);
  return row;
}

double q1_estimate(int j, const SolutionField& field, const Grid& grid,
                   const HestonParams& params) {
  if (field.time_index == 0) return 0.0;
  return q1_stencil(j, grid, params).apply(field.values);
}

double endpoint_weight(double v_j, double dt) {
  return std::sqrt(2.0 * dt / (std::numbers::pi * v_j));
}

double i1_quadrature(int j, int n, const BoundaryHistory& history, const Grid& grid) {
  check_boundary_j(j, grid);
  if (n < 1) throw DomainError("I1 needs n >= 1");
  history.require_levels(n);
  const double v = grid.v(j);
  const double sum = outer_history_sum(n, grid.dt(), [&](double u, int k) {
    const double q = history.q1(k, j);
    return q == 0.0 ? 0.0 : convolution_kernel(u, v) * q;
  });
  return sum / grid.s_max();
}

namespace {

// Adds the implicit endpoint Q(tau_n) ~ Q1 stencil at level n to a row.
void add_implicit_endpoint(StencilRow& row, int j, const Grid& grid, const HestonParams& params) {
  const double scale = -grid.ds() / grid.s_max() * endpoint_weight(grid.v(j), grid.dt());
  const StencilRow stencil = q1_stencil(j, grid, params);
  for (std::size_t k = 0; k < stencil.count; ++k) {
    row.add(stencil.entries[k].col, scale * stencil.entries[k].coeff);
  }
}

}  // namespace

StencilRow mapabc1_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                       const HestonParams& params) {
  StencilRow row = apabc_row(j, n, history, grid, params);
  add_implicit_endpoint(row, j, grid, params);
  row.rhs += grid.ds() * i1_quadrature(j, n, history, grid);
  return row;
}

double q2_estimate(int i, int j, const SolutionField& field, const Grid& grid,
                   const HestonParams& params) {
  if (i < 1 || i > grid.n_s() - 1 || j < 1 || j > grid.n_v() - 1) {
    throw DomainError("Q2 index out of range");
  }
  if (field.time_index == 0) return 0.0;
  const double v = grid.v(j);
  const double ds = grid.ds();
  const double dv = grid.dv();
  const double cross = field.at(i + 1, j + 1) - field.at(i - 1, j + 1) -
                       field.at(i + 1, j - 1) + field.at(i - 1, j - 1);
  const double vv = field.at(i, j + 1) - 2.0 * field.at(i, j) + field.at(i, j - 1);
  const double first = field.at(i, j + 1) - field.at(i, j - 1);
  return params.rho * params.sigma * v * grid.s(i) * cross / (4.0 * ds * dv) +
         0.5 * params.sigma * params.sigma * v * vv / (dv * dv) +
         params.kappa * (params.eta - v) * first / (2.0 * dv);
}

std::vector<double> q2_profile(int j, const SolutionField& field, const Grid& grid,
                               const HestonParams& params) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.n_s() - 1));
  for (int i = 1; i <= grid.n_s() - 1; ++i) out.push_back(q2_estimate(i, j, field, grid, params));
  return out;
}

double i2_kernel(double u, double v, const GaussLinFit& fit, double x_max,
                 const InnerQuadrature& quad) {
  if (!(u > 0.0) || !(v > 0.0)) throw DomainError("I2 kernel needs u > 0, v > 0");
  if (fit.is_zero()) return 0.0;
  const double a = v * u;
  const double sa = std::sqrt(a);
  // Integrate where both e^{-t^2/2} and the fitted Gaussian are non-negligible.
  const double lo = std::max(0.0, (fit.mu_f - 8.0 * fit.sigma_f - x_max) / sa);
  const double hi = std::min(quad.t_max, (fit.mu_f + 8.0 * fit.sigma_f - x_max) / sa);
  if (!(hi > lo)) return 0.0;
  const double width = std::min(2.0, 2.0 * fit.sigma_f / sa);
  const int panels =
      std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, quad.max_panels);
  const GaussRule& rule = gauss_rule(quad.order);
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    double panel = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = mid + 0.5 * h * rule.nodes[q];
      panel += rule.weights[q] * t * std::exp(-0.5 * t * t - 0.5 * sa * t) *
               fit.at_log(x_max + sa * t);
    }
    total += 0.5 * h * panel;
  }
  return std::sqrt(2.0 / (std::numbers::pi * a)) * std::exp(-a / 8.0) * total;
}

double i2_quadrature(int j, int n, const BoundaryHistory& history, const Grid& grid,
                     const InnerQuadrature& quad) {
  check_boundary_j(j, grid);
  if (n < 1) throw DomainError("I2 needs n >= 1");
  history.require_levels(n);
  const double v = grid.v(j);
  const double x_max = std::log(grid.s_max());
  const double sum = outer_history_sum(n, grid.dt(), [&](double u, int k) {
    return i2_kernel(u, v, history.fit(k, j), x_max, quad);
  });
  return sum / grid.s_max();
}

StencilRow mapabc2_row(int j, int n, const BoundaryHistory& history, const Grid& grid,
                       const HestonParams& params, const InnerQuadrature& quad) {
  StencilRow row = apabc_row(j, n, history, grid, params);
  add_implicit_endpoint(row, j, grid, params);
  row.rhs += grid.ds() * i2_quadrature(j, n, history, grid, quad);
  return row;
}

StencilRow boundary_row(BoundaryKind kind, int j, int n, const BoundaryHistory& history,
                        const Grid& grid, const HestonParams& params,
                        const InnerQuadrature& quad) {
  switch (kind) {
    case BoundaryKind::original:
      return original_bc_row(j, grid);
    case BoundaryKind::apabc:
      return apabc_row(j, n, history, grid, params);
    case BoundaryKind::mapabc1:
      return mapabc1_row(j, n, history, grid, params);
    case BoundaryKind::mapabc2:
      return mapabc2_row(j, n, history, grid, params, quad);
  }
  throw DomainError("unknown boundary kind");
}

}  // namespace hestonabc::abc
