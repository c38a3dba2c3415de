#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hestonabc/bench.hpp"
#include "hestonabc/errors.hpp"
#include "reference_tables.hpp"

namespace hestonabc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using abc::BoundaryKind;

struct RunConfig {
  std::optional<std::string> preset;
  std::vector<std::string> bc;
  std::vector<double> h;
  std::optional<double> s_max;
  std::optional<double> v_max;
  std::string out = "out";
  bool check = false;
  std::optional<double> tol_rel;
  int threads = 0;
  std::optional<double> solver_tol;
  std::string solver = "lu";
  // explicit overrides of the preset's model
  std::optional<double> kappa, eta, sigma, rho, r, strike, maturity;
  // slice
  std::string axis = "s";
  std::optional<double> at;
};

// Usage error carrying the offending flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::get("heston_abc");
  if (!logger) logger = spdlog::stderr_color_mt("heston_abc");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HESTON_ABC_LOG"); env != nullptr) {
    const std::string level(env);
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "warn") spdlog::set_level(spdlog::level::warn);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("ignoring HESTON_ABC_LOG={} (expected error, warn, info or debug)", level);
  }
}

std::vector<BoundaryKind> kinds_of(const RunConfig& cfg, bool default_all) {
  std::vector<std::string> names = cfg.bc;
  if (names.empty()) names.push_back(default_all ? "all" : "mapabc2");
  std::vector<BoundaryKind> kinds;
  for (const auto& name : names) {
    if (name == "all") {
      for (auto k : abc::all_boundary_kinds()) kinds.push_back(k);
      continue;
    }
    try {
      kinds.push_back(abc::parse_boundary_kind(name));
    } catch (const InvalidParameter&) {
      throw UsageError("--bc: unknown boundary kind '" + name + "'");
    }
  }
  std::vector<BoundaryKind> unique;
  for (auto k : kinds) {
    if (std::find(unique.begin(), unique.end(), k) == unique.end()) unique.push_back(k);
  }
  return unique;
}

bench::ExperimentPreset resolve_preset(const RunConfig& cfg, const std::string& fallback) {
  const std::string name = cfg.preset.value_or(fallback);
  bench::ExperimentPreset p;
  try {
    p = bench::preset(name);
  } catch (const InvalidParameter&) {
    throw UsageError("--preset: unknown preset '" + name + "'");
  }
  if (cfg.kappa) p.params.kappa = *cfg.kappa;
  if (cfg.eta) p.params.eta = *cfg.eta;
  if (cfg.sigma) p.params.sigma = *cfg.sigma;
  if (cfg.rho) p.params.rho = *cfg.rho;
  if (cfg.r) p.params.r = *cfg.r;
  if (cfg.strike) p.contract.strike = *cfg.strike;
  if (cfg.maturity) p.contract.maturity = *cfg.maturity;
  if (cfg.s_max) p.s_max = *cfg.s_max;
  if (cfg.v_max) p.v_max = *cfg.v_max;
  const auto report = validate(p.params, p.contract);
  if (!report.ok()) {
    const auto& e = report.errors.front();
    throw UsageError("--" + e.field + ": " + e.message);
  }
  for (const auto& w : report.warnings) spdlog::warn("{}: {}", w.field, w.message);
  return p;
}

std::vector<double> steps_of(const RunConfig& cfg, const std::vector<double>& fallback) {
  const std::vector<double>& h = cfg.h.empty() ? fallback : cfg.h;
  for (double x : h) {
    if (!(x > 0.0) || !std::isfinite(x)) throw UsageError("--h: step must be positive");
  }
  return h;
}

// Checks that every step fits the domain before any march starts.
void check_grid(double h, double s_max, double v_max, double maturity) {
  try {
    (void)GridSpec::uniform(h, s_max, v_max, maturity);
  } catch (const InvalidParameter& e) {
    const std::string flag = e.field() == "s_max" ? "--smax"
                             : e.field() == "v_max" ? "--vmax"
                                                    : "--h";
    throw UsageError(flag + ": " + e.what() + " (h=" + bench::format_g6(h) + ")");
  }
  if (s_max <= 1.0) throw UsageError("--smax: s_max must exceed 1");
}

bench::RunOptions run_options(const RunConfig& cfg) {
  bench::RunOptions options;
  options.threads = cfg.threads;
  if (cfg.solver_tol) options.march.linear.tolerance = *cfg.solver_tol;
  options.march.linear.method =
      cfg.solver == "bicgstab" ? LinearMethod::bicgstab : LinearMethod::sparse_lu;
  return options;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  spdlog::info("wrote {}", path.string());
}

json params_json(const bench::ExperimentPreset& p) {
  return {{"preset", p.name},
          {"kappa", p.params.kappa},
          {"eta", p.params.eta},
          {"sigma", p.params.sigma},
          {"rho", p.params.rho},
          {"r", p.params.r},
          {"strike", p.contract.strike},
          {"maturity", p.contract.maturity},
          {"feller_ok", p.params.feller_ok()}};
}

json stats_json(const MarchStats& s) {
  return {{"steps", s.steps},
          {"max_relative_residual", s.max_relative_residual},
          {"wall_seconds", s.wall_seconds},
          {"fits", s.fits},
          {"unconverged_fits", s.unconverged_fits},
          {"worst_fit_relative_rms", s.worst_fit_relative_rms}};
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string tag(double x) {
  std::string s = bench::format_g6(x);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

// Compares computed cells with the reference file; prints one line per cell.
bool check_against_reference(const bench::ErrorReport& report, const RunConfig& cfg,
                             bool domain_cells) {
  const auto cells = load_default_reference_tables();
  bool ok = true;
  int compared = 0;
  for (const auto& e : report.entries) {
    for (const auto& c : cells) {
      const bool same_cell = c.preset == report.preset && c.kind == e.kind &&
                             std::abs(c.h - e.h) < 1e-12 &&
                             std::abs(c.s_max - e.s_max) < 1e-12 &&
                             std::abs(c.v_max - e.v_max) < 1e-12;
      const bool domain_table = c.table.rfind("domains", 0) == 0;
      if (!same_cell || domain_table != domain_cells) continue;
      const double tol = cfg.tol_rel.value_or(c.tol_rel);
      const double rel = std::abs(e.error - c.value) / c.value;
      const bool pass = rel <= tol;
      ok = ok && pass;
      ++compared;
      std::cout << (pass ? "ok   " : "FAIL ") << abc::to_string(e.kind) << " h=" << bench::format_g6(e.h)
                << " domain=(" << bench::format_g6(e.s_max) << "," << bench::format_g6(e.v_max)
                << ") error=" << bench::format_g6(e.error) << " reference=" << bench::format_g6(c.value)
                << " rel_diff=" << bench::format_g6(rel) << " tol=" << bench::format_g6(tol) << '\n';
    }
  }
  if (compared == 0) std::cout << "no reference cells match this run\n";
  return ok;
}

int cmd_price(const RunConfig& cfg) {
  const auto p = resolve_preset(cfg, "set1");
  const auto kinds = kinds_of(cfg, false);
  const auto steps = steps_of(cfg, {0.1});
  for (double h : steps) check_grid(h, p.s_max, p.v_max, p.contract.maturity);
  const auto dir = output_dir(cfg);
  const auto options = run_options(cfg);
  for (double h : steps) {
    const Grid grid(GridSpec::uniform(h, p.s_max, p.v_max, p.contract.maturity), p.contract);
    for (auto kind : kinds) {
      const auto result = march(grid, p.params, p.contract, kind, options.march);
      const double err = bench::relative_error(result.final_field,
                                               bench::asymptotic_reference(grid, p.params));
      const std::string stem = "price_" + p.name + "_" + abc::to_string(kind) + "_h" + tag(h);
      std::ostringstream csv;
      bench::write_field_csv(result.final_field, grid, csv);
      write_text(dir / (stem + ".csv"), csv.str());
      json meta = {{"command", "price"},
                   {"params", params_json(p)},
                   {"boundary", abc::to_string(kind)},
                   {"grid",
                    {{"h", h},
                     {"s_max", grid.s_max()},
                     {"v_max", grid.v_max()},
                     {"n_s", grid.n_s()},
                     {"n_v", grid.n_v()},
                     {"n_t", grid.n_t()}}},
                   {"relative_error", err},
                   {"stats", stats_json(result.stats)},
                   {"timestamp", timestamp()}};
      write_text(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
      std::cout << abc::to_string(kind) << " h=" << bench::format_g6(h)
                << " relative_error=" << bench::format_g6(err) << '\n';
    }
  }
  return 0;
}

json report_meta(const bench::ErrorReport& report, const bench::ExperimentPreset& p,
                 const std::string& command) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"boundary", abc::to_string(e.kind)},
                       {"h", e.h},
                       {"s_max", e.s_max},
                       {"v_max", e.v_max},
                       {"error", e.error},
                       {"stats", stats_json(e.stats)}});
  }
  return {{"command", command},
          {"params", params_json(p)},
          {"runs", entries},
          {"timestamp", timestamp()}};
}

int cmd_table(const RunConfig& cfg) {
  const auto p = resolve_preset(cfg, "set1");
  const auto kinds = kinds_of(cfg, true);
  const auto steps = steps_of(cfg, p.h_list);
  for (double h : steps) check_grid(h, p.s_max, p.v_max, p.contract.maturity);
  const auto dir = output_dir(cfg);
  const auto report = bench::run_table(p, kinds, steps, run_options(cfg));
  std::ostringstream csv;
  bench::write_error_csv(report, csv);
  write_text(dir / ("table_" + p.name + ".csv"), csv.str());
  write_text(dir / ("table_" + p.name + ".meta.json"), report_meta(report, p, "table").dump(2) + "\n");
  std::cout << csv.str();
  if (cfg.check && !check_against_reference(report, cfg, false)) return 1;
  return 0;
}

int cmd_domain_study(const RunConfig& cfg) {
  auto p = resolve_preset(cfg, "set2");
  const auto kinds = kinds_of(cfg, true);
  const auto steps = steps_of(cfg, {0.1});
  if (steps.size() != 1) throw UsageError("--h: domain-study takes a single step");
  std::vector<bench::Domain> domains = bench::default_domains();
  if (cfg.s_max || cfg.v_max) {
    // one custom domain, still measured on the preset's own box
    domains = {{p.s_max, p.v_max}};
    p.s_max = bench::preset(p.name).s_max;
    p.v_max = bench::preset(p.name).v_max;
  }
  for (const auto& d : domains) check_grid(steps[0], d.s_max, d.v_max, p.contract.maturity);
  const auto dir = output_dir(cfg);
  const auto report = bench::run_domain_study(p, kinds, domains, steps[0], run_options(cfg));
  std::ostringstream csv;
  bench::write_domain_csv(report, csv);
  write_text(dir / ("domain_" + p.name + ".csv"), csv.str());
  write_text(dir / ("domain_" + p.name + ".meta.json"),
             report_meta(report, p, "domain-study").dump(2) + "\n");
  std::cout << csv.str();
  if (cfg.check && !check_against_reference(report, cfg, true)) return 1;
  return 0;
}

int cmd_greeks(const RunConfig& cfg) {
  const auto p = resolve_preset(cfg, "set3");
  const auto kinds = kinds_of(cfg, true);
  const auto steps = steps_of(cfg, {0.1});
  if (steps.size() != 1) throw UsageError("--h: greeks takes a single step");
  check_grid(steps[0], p.s_max, p.v_max, p.contract.maturity);
  const auto dir = output_dir(cfg);
  const auto study = bench::run_greeks_study(p, kinds, steps[0], run_options(cfg));
  std::cout << "kind,delta_mae,gamma_mae,vega_mae\n";
  for (const auto& e : study) {
    const std::string stem = "greeks_" + p.name + "_" + abc::to_string(e.kind) + "_";
    const std::pair<const bench::GreekSlice*, std::string> files[] = {
        {&e.delta, "delta"}, {&e.gamma, "gamma"}, {&e.vega, "vega"}};
    for (const auto& [slice, name] : files) {
      std::ostringstream csv;
      bench::write_greek_csv(*slice, name, csv);
      write_text(dir / (stem + name + ".csv"), csv.str());
    }
    std::cout << abc::to_string(e.kind) << ',' << bench::format_g6(e.delta.mean_abs_error) << ','
              << bench::format_g6(e.gamma.mean_abs_error) << ','
              << bench::format_g6(e.vega.mean_abs_error) << '\n';
  }
  return 0;
}

int cmd_slice(const RunConfig& cfg) {
  const auto p = resolve_preset(cfg, "set1");
  const auto kinds = kinds_of(cfg, true);
  const auto steps = steps_of(cfg, {0.1});
  if (steps.size() != 1) throw UsageError("--h: slice takes a single step");
  check_grid(steps[0], p.s_max, p.v_max, p.contract.maturity);
  bench::SliceAxis axis;
  try {
    axis = bench::parse_slice_axis(cfg.axis);
  } catch (const InvalidParameter&) {
    throw UsageError("--axis: must be s or v");
  }
  const double at = cfg.at.value_or(axis == bench::SliceAxis::s ? p.s_max : p.v_max);
  const Grid grid(GridSpec::uniform(steps[0], p.s_max, p.v_max, p.contract.maturity), p.contract);
  const auto reference = bench::asymptotic_reference(grid, p.params);
  {
    // validate --at before marching
    try {
      (void)bench::boundary_slice(reference, reference, grid, axis, at);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--at: ") + e.what());
    }
  }
  const auto dir = output_dir(cfg);
  const auto options = run_options(cfg);
  std::vector<bench::SliceProfile> profiles(kinds.size());
  bench::parallel_for(static_cast<int>(kinds.size()), options.threads, [&](int k) {
    const auto idx = static_cast<std::size_t>(k);
    const auto result = march(grid, p.params, p.contract, kinds[idx], options.march);
    profiles[idx] = bench::boundary_slice(result.final_field, reference, grid, axis, at);
  });
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    std::ostringstream csv;
    bench::write_slice_csv(profiles[k], csv);
    write_text(dir / ("slice_" + p.name + "_" + abc::to_string(kinds[k]) + "_" + cfg.axis +
                      tag(at) + ".csv"),
               csv.str());
    double total = 0.0;
    for (double e : profiles[k].abs_error) total += e;
    std::cout << abc::to_string(kinds[k]) << " mean_abs_error="
              << bench::format_g6(total / static_cast<double>(profiles[k].abs_error.size()))
              << '\n';
  }
  return 0;
}

void add_shared_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--preset", cfg.preset, "Parameter preset: set1, set2 or set3 (default set1; set2 for domain-study, set3 for greeks)");
  app.add_option("--bc", cfg.bc, "Boundary kinds: original, apabc, mapabc1, mapabc2, all")
      ->delimiter(',');
  app.add_option("--h", cfg.h, "Grid step(s) h = dtau = dS = dv")->delimiter(',');
  app.add_option("--smax", cfg.s_max, "Truncation S~max (overrides the preset)");
  app.add_option("--vmax", cfg.v_max, "Truncation vmax (overrides the preset)");
  app.add_option("--out", cfg.out, "Output directory");
  app.add_flag("--check", cfg.check, "Compare with the reference error file");
  app.add_option("--tol-rel", cfg.tol_rel, "Relative tolerance for --check (overrides the file)");
  app.add_option("--threads", cfg.threads, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--solver-tol", cfg.solver_tol, "Linear solver relative residual tolerance");
  app.add_option("--solver", cfg.solver, "Linear solver: lu or bicgstab")
      ->check(CLI::IsMember({"lu", "bicgstab"}));
  app.add_option("--kappa", cfg.kappa, "Override kappa");
  app.add_option("--eta", cfg.eta, "Override eta");
  app.add_option("--sigma", cfg.sigma, "Override sigma");
  app.add_option("--rho", cfg.rho, "Override rho");
  app.add_option("--r", cfg.r, "Override the risk-free rate");
  app.add_option("--strike", cfg.strike, "Override the strike");
  app.add_option("--maturity", cfg.maturity, "Override the maturity");
  app.add_option("--axis", cfg.axis, "slice: fixed axis, s or v");
  app.add_option("--at", cfg.at, "slice: value of the fixed axis (default: its upper bound)");
}

}  // namespace

int run_cli(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Heston European call pricing with artificial boundary conditions"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; flags win on conflict");
  RunConfig cfg;
  add_shared_options(app, cfg);

  auto* price = app.add_subcommand("price", "Run one march per kind and write the final field");
  auto* table = app.add_subcommand("table", "Relative errors over the preset's step list");
  auto* domain = app.add_subcommand("domain-study", "Relative errors on enlarged domains");
  auto* greeks = app.add_subcommand("greeks", "Greeks on the slice S~ = S~max");
  auto* slice = app.add_subcommand("slice", "Solution profile along a grid line");
  for (auto* sub : {price, table, domain, greeks, slice}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    if (app.got_subcommand(price)) return cmd_price(cfg);
    if (app.got_subcommand(table)) return cmd_table(cfg);
    if (app.got_subcommand(domain)) return cmd_domain_study(cfg);
    if (app.got_subcommand(greeks)) return cmd_greeks(cfg);
    return cmd_slice(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: --" << e.field() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("heston_abc");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hestonabc::cli
