#pragma once

#include <sdfir/state_space.hpp>
#include <sdfir/synth.hpp>

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace sdfir::app {

/// Parsed design configuration. JSON schema (see README):
///   target, characteristic: {"num": [...], "den": [...]} in descending
///     powers of s, or {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}
///   h, m, M, N (required), L (default 1), grid_points (default 512),
///   norm_grid (default 2048), solver {gap_tol, max_newton, barrier_mult,
///   epsilon_margin}, baseline (path to a discrete IIR json), output_dir.
struct DesignConfig {
  DesignSpec spec;
  int grid_points = 512;
  std::optional<std::filesystem::path> baseline;
  std::filesystem::path output_dir = ".";
};

/// Throws ConfigError for missing or malformed fields; StabilityError /
/// ParameterError (subject "target", "characteristic", ...) for systems or
/// parameters that parse but cannot be used.
DesignConfig parse_design_config(const nlohmann::json& j);
DesignConfig load_design_config(const std::filesystem::path& path);

/// Discrete-time IIR description: {"A","B","C","D","sample_period"} or
/// {"num","den","sample_period"} in powers of z. sample_period defaults to 1.
StateSpace parse_discrete_system(const nlohmann::json& j, const std::string& subject);
StateSpace load_discrete_system(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace sdfir::app
