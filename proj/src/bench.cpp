#include "hestonabc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "hestonabc/errors.hpp"

namespace hestonabc::bench {

namespace {

const std::vector<double> kStandardSteps{0.4, 0.2, 0.1, 0.05, 0.025};

const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> all{
      {"set1", {4.0, 0.1, 0.1, -0.5, 0.0}, {1.0, 2.0}, 4.0, 4.0, kStandardSteps},
      {"set2", {0.005, 0.5, 0.01, 0.5, 0.0}, {1.0, 2.0}, 4.0, 4.0, kStandardSteps},
      {"set3", {2.0, 0.3, 0.05, 0.0, 0.0}, {1.0, 2.0}, 8.0, 4.0, kStandardSteps},
  };
  return all;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Index of `value` on a uniform axis with the given step, or -1.
int on_grid(double value, double step, int cells) {
  const double r = value / step;
  const double k = std::round(r);
  if (k < 0 || k > cells || std::abs(r - k) > 1e-9 * std::max(1.0, r)) return -1;
  return static_cast<int>(k);
}

double d1(const SolutionField& f, int i, int j, bool along_s, double h, int cells) {
  auto at = [&](int k) { return along_s ? f.at(k, j) : f.at(i, k); };
  const int p = along_s ? i : j;
  if (p == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (p == cells) return (3.0 * at(cells) - 4.0 * at(cells - 1) + at(cells - 2)) / (2.0 * h);
  return (at(p + 1) - at(p - 1)) / (2.0 * h);
}

double d2_s(const SolutionField& f, int i, int j, double h, int cells) {
  if (i == 0) return (2.0 * f.at(0, j) - 5.0 * f.at(1, j) + 4.0 * f.at(2, j) - f.at(3, j)) / (h * h);
  if (i == cells) {
    return (2.0 * f.at(cells, j) - 5.0 * f.at(cells - 1, j) + 4.0 * f.at(cells - 2, j) -
            f.at(cells - 3, j)) /
           (h * h);
  }
  return (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / (h * h);
}

GreekSlice greek_slice(const SolutionField& num, const SolutionField& ref, const Grid& grid) {
  GreekSlice slice;
  const int i = grid.n_s();
  double total = 0.0;
  for (int j = 0; j <= grid.n_v(); ++j) {
    slice.v.push_back(grid.v(j));
    slice.num.push_back(num.at(i, j));
    slice.ref.push_back(ref.at(i, j));
    slice.abs_error.push_back(std::abs(num.at(i, j) - ref.at(i, j)));
    total += slice.abs_error.back();
  }
  slice.mean_abs_error = total / static_cast<double>(slice.v.size());
  return slice;
}

}  // namespace

const ExperimentPreset& preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidParameter("preset", "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  return names;
}

double relative_error(const SolutionField& numeric, const SolutionField& reference) {
  if (!numeric.same_shape(reference) || numeric.values.size() != reference.values.size()) {
    throw DomainError("relative_error: fields have different shapes");
  }
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t k = 0; k < numeric.values.size(); ++k) {
    const double d = numeric.values[k] - reference.values[k];
    diff += d * d;
    norm += reference.values[k] * reference.values[k];
  }
  if (norm == 0.0) throw DomainError("relative_error: reference field is zero");
  return std::sqrt(diff) / std::sqrt(norm);
}

double relative_error_window(const SolutionField& numeric, const SolutionField& reference,
                             const Grid& grid, double s_limit, double v_limit) {
  if (!numeric.same_shape(reference) || numeric.n_s != grid.n_s() || numeric.n_v != grid.n_v()) {
    throw DomainError("relative_error_window: fields do not match the grid");
  }
  const double s_tol = 1e-9 * grid.ds();
  const double v_tol = 1e-9 * grid.dv();
  double diff = 0.0;
  double norm = 0.0;
  for (int j = 0; j <= grid.n_v() && grid.v(j) <= v_limit + v_tol; ++j) {
    for (int i = 0; i <= grid.n_s() && grid.s(i) <= s_limit + s_tol; ++i) {
      const double d = numeric.at(i, j) - reference.at(i, j);
      diff += d * d;
      norm += reference.at(i, j) * reference.at(i, j);
    }
  }
  if (norm == 0.0) throw DomainError("relative_error_window: reference is zero on the window");
  return std::sqrt(diff) / std::sqrt(norm);
}

SolutionField asymptotic_reference(const Grid& grid, const HestonParams& params,
                                   asymptotics::AsymptoticOrder order) {
  SolutionField field(grid, grid.n_t());
  const double tau = grid.maturity();
  for (int j = 0; j <= grid.n_v(); ++j) {
    for (int i = 0; i <= grid.n_s(); ++i) {
      field.at(i, j) = asymptotics::asymptotic_price(grid.s(i), grid.v(j), tau, params, order);
    }
  }
  return field;
}

GreekFields greeks(const SolutionField& field, const Grid& grid, const ContractSpec& contract,
                   const HestonParams& params) {
  if (grid.n_s() < 3 || grid.n_v() < 3) throw DomainError("greeks need I, J >= 3");
  if (field.n_s != grid.n_s() || field.n_v != grid.n_v()) {
    throw DomainError("greeks: field does not match grid");
  }
  const double tau = grid.maturity();
  const double growth = std::exp(params.r * tau);
  GreekFields out{SolutionField(grid, field.time_index), SolutionField(grid, field.time_index),
                  SolutionField(grid, field.time_index)};
  for (int j = 0; j <= grid.n_v(); ++j) {
    for (int i = 0; i <= grid.n_s(); ++i) {
      out.delta.at(i, j) = d1(field, i, j, true, grid.ds(), grid.n_s());
      out.gamma.at(i, j) = d2_s(field, i, j, grid.ds(), grid.n_s()) * growth / contract.strike;
      out.vega.at(i, j) =
          contract.strike / growth * d1(field, i, j, false, grid.dv(), grid.n_v());
    }
  }
  return out;
}

const ErrorEntry& ErrorReport::find(abc::BoundaryKind kind, double h) const {
  for (const auto& e : entries) {
    if (e.kind == kind && close(e.h, h)) return e;
  }
  throw DomainError("no entry for " + abc::to_string(kind) + " at h=" + format_g6(h));
}

const ErrorEntry& ErrorReport::find(abc::BoundaryKind kind, double s_max, double v_max) const {
  for (const auto& e : entries) {
    if (e.kind == kind && close(e.s_max, s_max) && close(e.v_max, v_max)) return e;
  }
  throw DomainError("no entry for " + abc::to_string(kind) + " on domain (" + format_g6(s_max) +
                    ", " + format_g6(v_max) + ")");
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ErrorEntry run_case(const ExperimentPreset& preset, abc::BoundaryKind kind, double h,
                    double s_max, double v_max, const MarchOptions& options,
                    const std::optional<Domain>& window) {
  const Grid grid(GridSpec::uniform(h, s_max, v_max, preset.contract.maturity), preset.contract);
  const MarchResult result = march(grid, preset.params, preset.contract, kind, options);
  const SolutionField reference = asymptotic_reference(grid, preset.params);
  const double error =
      window ? relative_error_window(result.final_field, reference, grid, window->s_max,
                                     window->v_max)
             : relative_error(result.final_field, reference);
  return {kind, h, s_max, v_max, error, result.stats};
}

ErrorReport run_table(const ExperimentPreset& preset, const std::vector<abc::BoundaryKind>& kinds,
                      const std::vector<double>& h_list, const RunOptions& options) {
  ErrorReport report;
  report.preset = preset.name;
  report.entries.resize(kinds.size() * h_list.size());
  const int count = static_cast<int>(report.entries.size());
  // Finest grids first so the longest marches start early.
  std::vector<int> order(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return h_list[static_cast<std::size_t>(a) % h_list.size()] <
           h_list[static_cast<std::size_t>(b) % h_list.size()];
  });
  parallel_for(count, options.threads, [&](int slot) {
    const auto k = static_cast<std::size_t>(order[static_cast<std::size_t>(slot)]);
    const auto kind = kinds[k / h_list.size()];
    const double h = h_list[k % h_list.size()];
    report.entries[k] = run_case(preset, kind, h, preset.s_max, preset.v_max, options.march);
  });
  return report;
}

const std::vector<Domain>& default_domains() {
  static const std::vector<Domain> domains{{4.0, 4.0}, {40.0, 4.0}, {4.0, 40.0}};
  return domains;
}

ErrorReport run_domain_study(const ExperimentPreset& preset,
                             const std::vector<abc::BoundaryKind>& kinds,
                             const std::vector<Domain>& domains, double h,
                             const RunOptions& options) {
  ErrorReport report;
  report.preset = preset.name;
  report.entries.resize(kinds.size() * domains.size());
  parallel_for(static_cast<int>(report.entries.size()), options.threads, [&](int slot) {
    const auto k = static_cast<std::size_t>(slot);
    const auto& d = domains[k % domains.size()];
    report.entries[k] = run_case(preset, kinds[k / domains.size()], h, d.s_max, d.v_max,
                                 options.march, Domain{preset.s_max, preset.v_max});
  });
  return report;
}

SliceAxis parse_slice_axis(const std::string& name) {
  if (name == "s") return SliceAxis::s;
  if (name == "v") return SliceAxis::v;
  throw InvalidParameter("axis", "axis must be s or v");
}

std::string to_string(SliceAxis axis) { return axis == SliceAxis::s ? "s" : "v"; }

SliceProfile boundary_slice(const SolutionField& numeric, const SolutionField& reference,
                            const Grid& grid, SliceAxis fixed_axis, double value) {
  if (!numeric.same_shape(reference)) throw DomainError("boundary_slice: shape mismatch");
  SliceProfile profile;
  if (fixed_axis == SliceAxis::s) {
    const int i = on_grid(value, grid.ds(), grid.n_s());
    if (i < 0) throw DomainError("S~ = " + format_g6(value) + " is not a grid line");
    profile.axis = SliceAxis::v;
    for (int j = 0; j <= grid.n_v(); ++j) {
      profile.coord.push_back(grid.v(j));
      profile.value_ref.push_back(reference.at(i, j));
      profile.value_num.push_back(numeric.at(i, j));
    }
  } else {
    const int j = on_grid(value, grid.dv(), grid.n_v());
    if (j < 0) throw DomainError("v = " + format_g6(value) + " is not a grid line");
    profile.axis = SliceAxis::s;
    for (int i = 0; i <= grid.n_s(); ++i) {
      profile.coord.push_back(grid.s(i));
      profile.value_ref.push_back(reference.at(i, j));
      profile.value_num.push_back(numeric.at(i, j));
    }
  }
  for (std::size_t k = 0; k < profile.coord.size(); ++k) {
    profile.abs_error.push_back(std::abs(profile.value_num[k] - profile.value_ref[k]));
  }
  return profile;
}

std::vector<GreeksEntry> run_greeks_study(const ExperimentPreset& preset,
                                          const std::vector<abc::BoundaryKind>& kinds, double h,
                                          const RunOptions& options) {
  const Grid grid(GridSpec::uniform(h, preset.s_max, preset.v_max, preset.contract.maturity),
                  preset.contract);
  const GreekFields ref =
      greeks(asymptotic_reference(grid, preset.params), grid, preset.contract, preset.params);
  std::vector<GreeksEntry> out(kinds.size());
  parallel_for(static_cast<int>(kinds.size()), options.threads, [&](int k) {
    const auto idx = static_cast<std::size_t>(k);
    const auto result = march(grid, preset.params, preset.contract, kinds[idx], options.march);
    const GreekFields num = greeks(result.final_field, grid, preset.contract, preset.params);
    out[idx] = {kinds[idx], greek_slice(num.delta, ref.delta, grid),
                greek_slice(num.gamma, ref.gamma, grid), greek_slice(num.vega, ref.vega, grid)};
  });
  return out;
}

std::string format_g6(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void write_error_csv(const ErrorReport& report, std::ostream& out) {
  out << "kind,h,error\n";
  for (const auto& e : report.entries) {
    out << abc::to_string(e.kind) << ',' << format_g6(e.h) << ',' << format_g6(e.error) << '\n';
  }
}

void write_domain_csv(const ErrorReport& report, std::ostream& out) {
  out << "kind,s_max,v_max,h,error\n";
  for (const auto& e : report.entries) {
    out << abc::to_string(e.kind) << ',' << format_g6(e.s_max) << ',' << format_g6(e.v_max)
        << ',' << format_g6(e.h) << ',' << format_g6(e.error) << '\n';
  }
}

void write_slice_csv(const SliceProfile& profile, std::ostream& out) {
  out << "axis,coord,value_ref,value_num,abs_error\n";
  const std::string axis = to_string(profile.axis);
  for (std::size_t k = 0; k < profile.coord.size(); ++k) {
    out << axis << ',' << format_g6(profile.coord[k]) << ',' << format_g6(profile.value_ref[k])
        << ',' << format_g6(profile.value_num[k]) << ',' << format_g6(profile.abs_error[k])
        << '\n';
  }
}

void write_greek_csv(const GreekSlice& slice, const std::string& name, std::ostream& out) {
  out << "v," << name << "_num," << name << "_ref,abs_error\n";
  for (std::size_t k = 0; k < slice.v.size(); ++k) {
    out << format_g6(slice.v[k]) << ',' << format_g6(slice.num[k]) << ','
        << format_g6(slice.ref[k]) << ',' << format_g6(slice.abs_error[k]) << '\n';
  }
}

void write_field_csv(const SolutionField& field, const Grid& grid, std::ostream& out) {
  out << "i,j,s,v,value\n";
  for (int j = 0; j <= field.n_v; ++j) {
    for (int i = 0; i <= field.n_s; ++i) {
      out << i << ',' << j << ',' << format_g6(grid.s(i)) << ',' << format_g6(grid.v(j)) << ','
          << format_g6(field.at(i, j)) << '\n';
    }
  }
}

}  // namespace hestonabc::bench
