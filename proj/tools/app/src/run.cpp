#include "sdfir_app/run.hpp"

#include <sdfir/errors.hpp>
#include <sdfir/lifting.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sdfir::app {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

double grid_theta(int k, int grid_points) {
  return kPi * static_cast<double>(k) / static_cast<double>(grid_points - 1);
}

double phase_deg(Complex z) { return std::arg(z) * 180.0 / kPi; }

// sigma_max of the error system over the slow-rate grid.
std::vector<double> error_gains(const AffineErrorSystem& e, const FirFilter& k, int grid_points) {
  const ResponseEvaluator eval(e.realize(k));
  std::vector<double> out(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    out[static_cast<std::size_t>(i)] = eval.sigma_max_on_circle(grid_theta(i, grid_points));
  }
  return out;
}

std::string render_gains(const std::vector<double>& gains) {
  std::ostringstream os;
  os << "theta,gain_db\n";
  const int n = static_cast<int>(gains.size());
  for (int i = 0; i < n; ++i) {
    os << fmt(grid_theta(i, n)) << ',' << fmt(to_db(gains[static_cast<std::size_t>(i)])) << '\n';
  }
  return os.str();
}

std::vector<std::string> filter_header(const char* what, const FirFilter& k) {
  return {what, "taps " + std::to_string(k.taps()), "tap_period " + fmt(k.tap_period())};
}

}  // namespace

double to_db(double magnitude) {
  return magnitude < 1e-12 ? -240.0 : 20.0 * std::log10(magnitude);
}

FirFilter truncate_baseline(const StateSpace& iir, int taps) {
  if (!iir.is_discrete()) throw DomainError("baseline IIR filter must be discrete-time", "baseline");
  if (!iir.is_stable()) throw DomainError("baseline IIR filter is unstable", "baseline");
  if (iir.inputs() != 1 || iir.outputs() != 1) {
    throw DimensionError("baseline IIR filter must be SISO", "baseline");
  }
  if (taps < 1) throw ParameterError("tap count must be >= 1", "taps");
  std::vector<double> a(static_cast<std::size_t>(taps));
  a[0] = iir.D()(0, 0);
  Vector x = iir.B().col(0);
  for (int k = 1; k < taps; ++k) {
    a[static_cast<std::size_t>(k)] = iir.C().row(0).dot(x);
    x = iir.A() * x;
  }
  return FirFilter(std::move(a), *iir.sample_period());
}

FirFilter builtin_baseline(const DesignSpec& spec) {
  validate_spec(spec);
  const double fast = spec.h / spec.L;
  const FirFilter g = truncate_baseline(zoh_discretize(spec.target, fast), spec.M);
  const std::size_t taps = static_cast<std::size_t>(spec.M);
  const std::size_t shift = static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(spec.L);
  std::vector<double> a(taps, 0.0);
  for (std::size_t k = shift; k < taps; ++k) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(spec.L) && j + shift <= k; ++j) {
      a[k] += g[k - shift - j];
    }
  }
  return FirFilter(std::move(a), fast);
}

Baseline make_baseline(const DesignConfig& cfg) {
  if (!cfg.baseline) return {builtin_baseline(cfg.spec), "builtin:step-invariant-truncation"};
  const StateSpace iir = load_discrete_system(*cfg.baseline);
  const double fast = cfg.spec.h / cfg.spec.L;
  if (std::abs(*iir.sample_period() - fast) > 1e-12 * fast) {
    throw ConfigError("baseline sample_period must equal h / L", "baseline");
  }
  return {truncate_baseline(iir, cfg.spec.M), cfg.baseline->string()};
}

ErrorGainComparison compare_error_gains(const DesignSpec& spec, const FirFilter& designed,
                                        const FirFilter& baseline, int grid_points) {
  if (grid_points < 2) throw ParameterError("grid_points must be at least 2", "grid_points");
  const AffineErrorSystem e = build_error_system(spec);
  ErrorGainComparison c;
  c.designed = error_gains(e, designed, grid_points);
  c.baseline = error_gains(e, baseline, grid_points);
  for (int i = 0; i < grid_points; ++i) c.theta.push_back(grid_theta(i, grid_points));
  c.designed_peak = *std::max_element(c.designed.begin(), c.designed.end());
  c.baseline_peak = *std::max_element(c.baseline.begin(), c.baseline.end());
  return c;
}

std::string render_comparison_csv(const ErrorGainComparison& c) {
  std::ostringstream os;
  os << "theta,designed,baseline\n";
  for (std::size_t i = 0; i < c.theta.size(); ++i) {
    os << fmt(c.theta[i]) << ',' << fmt(c.designed[i]) << ',' << fmt(c.baseline[i]) << '\n';
  }
  os << "peak," << fmt(c.designed_peak) << ',' << fmt(c.baseline_peak) << '\n';
  return os.str();
}

std::string render_filter_response(const FirFilter& k, int upsampling, int grid_points) {
  std::ostringstream os;
  os << "theta,magnitude_db,phase_deg\n";
  for (int i = 0; i < grid_points; ++i) {
    const double theta = grid_theta(i, grid_points);
    // The filter runs L times faster than the slow-rate theta axis.
    const Complex r = k.response(theta / upsampling);
    os << fmt(theta) << ',' << fmt(to_db(std::abs(r))) << ',' << fmt(phase_deg(r)) << '\n';
  }
  return os.str();
}

std::string render_error_gain(const DesignSpec& spec, const FirFilter& k, int grid_points) {
  return render_gains(error_gains(build_error_system(spec), k, grid_points));
}

std::string render_impulse(const FirFilter& k) {
  std::ostringstream os;
  os << "k,time,coefficient\n";
  for (std::size_t i = 0; i < k.taps(); ++i) {
    os << i << ',' << fmt(static_cast<double>(i) * k.tap_period()) << ',' << fmt(k[i]) << '\n';
  }
  return os.str();
}

std::string render_analog_response(const DesignSpec& spec, int grid_points) {
  std::ostringstream os;
  os << "theta,omega,magnitude_db,phase_deg\n";
  for (int i = 0; i < grid_points; ++i) {
    const double theta = grid_theta(i, grid_points);
    const double omega = theta / spec.h;
    const CMatrix r = freq_response(spec.target, Complex(0.0, omega));
    os << fmt(theta) << ',' << fmt(omega) << ',' << fmt(to_db(sigma_max(r))) << ','
       << fmt(phase_deg(r(0, 0))) << '\n';
  }
  return os.str();
}

std::string render_coefficients(const FirFilter& k, const std::vector<std::string>& header) {
  std::ostringstream os;
  write_coefficients(os, k, header);
  return os.str();
}

DesignRun run_design(const DesignConfig& cfg) {
  const DesignSpec& spec = cfg.spec;
  const int grid = cfg.grid_points;
  // Resolved before the (slow) synthesis so a bad baseline path fails fast.
  const Baseline baseline = make_baseline(cfg);

  DesignRun run{design_fir(spec), {}};
  const DesignResult& r = run.result;
  Artifacts& f = run.files;

  nlohmann::ordered_json g;
  g["gamma"] = r.gamma;
  g["verified_norm"] = r.verified_norm;
  g["iterations"] = r.diagnostics.iterations;
  g["baseline"] = baseline.source;

  f["coefficients.txt"] = render_coefficients(r.filter, filter_header("designed FIR filter", r.filter));
  f["gamma.json"] = g.dump(2) + "\n";
  f["filter_response.csv"] = render_filter_response(r.filter, spec.L, grid);
  f["error_gain.csv"] = render_error_gain(spec, r.filter, grid);
  f["impulse.csv"] = render_impulse(r.filter);
  f["analog_response.csv"] = render_analog_response(spec, grid);

  const FirFilter& b = baseline.filter;
  f["coefficients_baseline.txt"] =
      render_coefficients(b, filter_header(("baseline " + baseline.source).c_str(), b));
  f["filter_response_baseline.csv"] = render_filter_response(b, spec.L, grid);
  f["error_gain_baseline.csv"] = render_error_gain(spec, b, grid);
  f["impulse_baseline.csv"] = render_impulse(b);
  return run;
}

void write_artifacts(const Artifacts& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'", name);
  }
}

}  // namespace sdfir::app
