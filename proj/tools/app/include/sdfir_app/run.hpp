#pragma once

#include "sdfir_app/config.hpp"

#include <sdfir/fir.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sdfir::app {

/// File name -> contents. Everything is rendered in memory first so a failed
/// run leaves no partial output behind.
using Artifacts = std::map<std::string, std::string>;

struct Baseline {
  FirFilter filter;
  std::string source;  // "builtin:step-invariant-truncation" or the file path
};

/// First M samples of the impulse response: D, CB, CAB, ..., CA^{M-2}B.
FirFilter truncate_baseline(const StateSpace& iir, int taps);

/// Built-in comparator: delay the step-invariant (ZOH) discretization of the
/// target at h/L by mL taps, spread each slow sample over L fast taps, and
/// truncate to M taps.
FirFilter builtin_baseline(const DesignSpec& spec);

/// Baseline from config.baseline when given, otherwise the built-in one.
Baseline make_baseline(const DesignConfig& cfg);

struct ErrorGainComparison {
  std::vector<double> theta;
  std::vector<double> designed;  // sigma_max of the error system, linear
  std::vector<double> baseline;
  double designed_peak = 0.0;
  double baseline_peak = 0.0;
};

/// Per-frequency error gains of two filters on the same error system.
ErrorGainComparison compare_error_gains(const DesignSpec& spec, const FirFilter& designed,
                                        const FirFilter& baseline, int grid_points);

std::string render_comparison_csv(const ErrorGainComparison& c);

struct DesignRun {
  DesignResult result;
  Artifacts files;
};

/// Synthesis plus every artifact: coefficients.txt, gamma.json,
/// filter_response.csv, error_gain.csv, impulse.csv, analog_response.csv and
/// the matching *_baseline files (configured or built-in baseline).
DesignRun run_design(const DesignConfig& cfg);

/// CSV renderers (header row, %.12e values, theta in radians per slow sample).
std::string render_filter_response(const FirFilter& k, int upsampling, int grid_points);
std::string render_error_gain(const DesignSpec& spec, const FirFilter& k, int grid_points);
std::string render_impulse(const FirFilter& k);
std::string render_analog_response(const DesignSpec& spec, int grid_points);
std::string render_coefficients(const FirFilter& k, const std::vector<std::string>& header);

/// 20 log10(x), clamped to -240 dB below 1e-12.
double to_db(double magnitude);

/// Creates `dir` and writes every artifact.
void write_artifacts(const Artifacts& files, const std::filesystem::path& dir);

}  // namespace sdfir::app
