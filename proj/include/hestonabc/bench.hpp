#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hestonabc/abc.hpp"
#include "hestonabc/asymptotics.hpp"
#include "hestonabc/grid.hpp"
#include "hestonabc/model.hpp"
#include "hestonabc/solver.hpp"

namespace hestonabc::bench {

struct ExperimentPreset {
  std::string name;
  HestonParams params;
  ContractSpec contract;
  double s_max = 4.0;
  double v_max = 4.0;
  std::vector<double> h_list;
};

/// set1, set2, set3. Throws InvalidParameter("preset") otherwise.
const ExperimentPreset& preset(const std::string& name);
std::vector<std::string> preset_names();

/// ||numeric - reference||_2 / ||reference||_2 over all nodes. Throws DomainError
/// on a shape mismatch or a zero reference.
double relative_error(const SolutionField& numeric, const SolutionField& reference);

/// relative_error over the nodes with S~ <= s_limit and v <= v_limit only.
double relative_error_window(const SolutionField& numeric, const SolutionField& reference,
                             const Grid& grid, double s_limit, double v_limit);

/// Asymptotic price at every node at tau = T.
SolutionField asymptotic_reference(const Grid& grid, const HestonParams& params,
                                   asymptotics::AsymptoticOrder order =
                                       asymptotics::AsymptoticOrder::second);

/// Physical Delta, Gamma and Vega at t = 0 from a transformed field at tau = T.
/// Central differences inside, second-order one-sided differences on the edges.
struct GreekFields {
  SolutionField delta;
  SolutionField gamma;
  SolutionField vega;
};
GreekFields greeks(const SolutionField& field, const Grid& grid, const ContractSpec& contract,
                   const HestonParams& params);

struct RunOptions {
  /// Zero selects the hardware concurrency.
  int threads = 0;
  MarchOptions march;
};

struct ErrorEntry {
  abc::BoundaryKind kind = abc::BoundaryKind::original;
  double h = 0.0;
  double s_max = 0.0;
  double v_max = 0.0;
  double error = 0.0;
  MarchStats stats;
};

struct ErrorReport {
  std::string preset;
  std::vector<ErrorEntry> entries;

  /// Throws DomainError when absent.
  const ErrorEntry& find(abc::BoundaryKind kind, double h) const;
  const ErrorEntry& find(abc::BoundaryKind kind, double s_max, double v_max) const;
};

/// Runs fn(0..count-1) on up to `threads` workers; results must be written by index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct Domain {
  double s_max = 4.0;
  double v_max = 4.0;
};

/// Relative error of one march at step h on the given domain, measured over
/// `window` when given and over the whole grid otherwise.
ErrorEntry run_case(const ExperimentPreset& preset, abc::BoundaryKind kind, double h,
                    double s_max, double v_max, const MarchOptions& options = {},
                    const std::optional<Domain>& window = std::nullopt);

/// One march per (kind, h) on the preset's domain. Entries are ordered kind-major.
ErrorReport run_table(const ExperimentPreset& preset, const std::vector<abc::BoundaryKind>& kinds,
                      const std::vector<double>& h_list, const RunOptions& options = {});

const std::vector<Domain>& default_domains();

/// Every domain is measured on the preset's own box [0, S~max] x [0, vmax], so
/// enlarged domains are compared on the region they share.

ErrorReport run_domain_study(const ExperimentPreset& preset,
                             const std::vector<abc::BoundaryKind>& kinds,
                             const std::vector<Domain>& domains, double h = 0.1,
                             const RunOptions& options = {});

enum class SliceAxis { s, v };
SliceAxis parse_slice_axis(const std::string& name);
std::string to_string(SliceAxis axis);

/// Profile along the other axis at `fixed_axis` = value. `axis` names the
/// coordinate that varies along the profile.
struct SliceProfile {
  SliceAxis axis = SliceAxis::v;
  std::vector<double> coord;
  std::vector<double> value_ref;
  std::vector<double> value_num;
  std::vector<double> abs_error;
};

/// Throws DomainError when value is not a grid coordinate.
SliceProfile boundary_slice(const SolutionField& numeric, const SolutionField& reference,
                            const Grid& grid, SliceAxis fixed_axis, double value);

struct GreekSlice {
  std::vector<double> v;
  std::vector<double> num;
  std::vector<double> ref;
  std::vector<double> abs_error;
  double mean_abs_error = 0.0;
};

struct GreeksEntry {
  abc::BoundaryKind kind = abc::BoundaryKind::original;
  GreekSlice delta;
  GreekSlice gamma;
  GreekSlice vega;
};

/// Greeks of each kind and of the reference along S~ = S~max at step h.
std::vector<GreeksEntry> run_greeks_study(const ExperimentPreset& preset,
                                          const std::vector<abc::BoundaryKind>& kinds, double h,
                                          const RunOptions& options = {});

/// printf("%.6g").
std::string format_g6(double x);

void write_error_csv(const ErrorReport& report, std::ostream& out);
void write_domain_csv(const ErrorReport& report, std::ostream& out);
void write_slice_csv(const SliceProfile& profile, std::ostream& out);
/// `name` is delta, gamma or vega; header v,<name>_num,<name>_ref,abs_error.
void write_greek_csv(const GreekSlice& slice, const std::string& name, std::ostream& out);
/// i, j, s, v, value.
void write_field_csv(const SolutionField& field, const Grid& grid, std::ostream& out);

}  // namespace hestonabc::bench
