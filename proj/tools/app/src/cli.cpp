#include "sdfir_app/cli.hpp"

#include "sdfir_app/config.hpp"
#include "sdfir_app/run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace sdfir::app {

namespace {

void report(std::ostream& err, std::string_view code, const std::string& subject,
            const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "error code=" << code << " subject=" << (subject.empty() ? "-" : subject)
      << " message=" << flat << '\n';
}

struct Overrides {
  std::string out;
  int grid = 0;
  int norm_grid = 0;
  double gap_tol = 0.0;
};

DesignConfig load_with_overrides(const std::string& path, const Overrides& o) {
  DesignConfig cfg = load_design_config(path);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.grid != 0) cfg.grid_points = o.grid;
  if (o.norm_grid != 0) cfg.spec.norm_grid = o.norm_grid;
  if (o.gap_tol != 0.0) cfg.spec.solver.gap_tol = o.gap_tol;
  if (cfg.grid_points < 2) throw ConfigError("grid must be at least 2", "grid");
  validate_spec(cfg.spec);
  return cfg;
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
      return kExitConfig;
    case ErrorCode::Solver:
    case ErrorCode::Numeric:
    case ErrorCode::Invariant:
      return kExitSolver;
    default:
      return kExitValidation;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampled-data H-infinity FIR filter design"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  auto* design = app.add_subcommand("design", "design a filter and write all artifacts");
  design->add_option("config", config_path, "design configuration (JSON)")->required();
  design->add_option("--out", ov.out, "output directory (overrides output_dir)");
  design->add_option("--grid", ov.grid, "frequency grid points of the CSV artifacts");
  design->add_option("--norm-grid", ov.norm_grid, "grid points of the H-infinity norm search");
  design->add_option("--solver-gap-tol", ov.gap_tol, "barrier gap tolerance");

  std::string iir_path;
  std::string coeff_out;
  int taps = 0;
  auto* truncate = app.add_subcommand("truncate", "truncate a discrete IIR filter to an FIR");
  truncate->add_option("iir", iir_path, "discrete IIR filter (JSON)")->required();
  truncate->add_option("--taps", taps, "number of taps")->required();
  truncate->add_option("--out", coeff_out, "coefficient file (default: stdout)");

  std::string compare_path;
  Overrides cov;
  auto* compare = app.add_subcommand("compare", "error gains of the designed filter vs the baseline");
  compare->add_option("config", compare_path, "design configuration (JSON)")->required();
  compare->add_option("--out", cov.out, "output directory (overrides output_dir)");
  compare->add_option("--grid", cov.grid, "frequency grid points");
  compare->add_option("--solver-gap-tol", cov.gap_tol, "barrier gap tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "ConfigError", "arguments", e.what());
    return kExitConfig;
  }

  try {
    if (*design) {
      const DesignConfig cfg = load_with_overrides(config_path, ov);
      const DesignRun run = run_design(cfg);
      write_artifacts(run.files, cfg.output_dir);
      out << "gamma " << run.result.gamma << " verified_norm " << run.result.verified_norm
          << " iterations " << run.result.diagnostics.iterations << '\n';
    } else if (*truncate) {
      const FirFilter k = truncate_baseline(load_discrete_system(iir_path), taps);
      const std::string text = render_coefficients(k, {"truncated impulse response of " + iir_path});
      if (coeff_out.empty()) {
        out << text;
      } else {
        std::ofstream f(coeff_out, std::ios::binary);
        f << text;
        if (!f) throw ConfigError("cannot write '" + coeff_out + "'", coeff_out);
      }
    } else if (*compare) {
      const DesignConfig cfg = load_with_overrides(compare_path, cov);
      const Baseline b = make_baseline(cfg);
      const DesignResult r = design_fir(cfg.spec);
      const ErrorGainComparison c = compare_error_gains(cfg.spec, r.filter, b.filter, cfg.grid_points);
      write_artifacts({{"compare.csv", render_comparison_csv(c)}}, cfg.output_dir);
      out << "designed_peak " << c.designed_peak << " baseline_peak " << c.baseline_peak
          << " baseline " << b.source << '\n';
    }
  } catch (const Error& e) {
    report(err, to_string(e.code()), e.subject(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report(err, "InternalError", "", e.what());
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace sdfir::app
