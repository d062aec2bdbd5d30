#include "sdfir_app/config.hpp"

#include <sdfir/errors.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace sdfir::app {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& where = {}) {
  const std::string name = where.empty() ? key : where + "." + key;
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + name + "'", name);
  return j.at(key);
}

double as_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("field '" + name + "' must be a number", name);
  return v.get<double>();
}

int as_count(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("field '" + name + "' must be an integer", name);
  return v.get<int>();
}

std::vector<double> as_vector(const json& v, const std::string& name) {
  if (!v.is_array()) throw ConfigError("field '" + name + "' must be an array of numbers", name);
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_number(x, name));
  return out;
}

// Rows of numbers; `cols_if_empty` fixes the shape of an empty matrix.
Matrix as_matrix(const json& v, const std::string& name, Index rows_if_empty, Index cols_if_empty) {
  if (!v.is_array()) throw ConfigError("field '" + name + "' must be an array of rows", name);
  if (v.empty()) return Matrix::Zero(rows_if_empty, cols_if_empty);
  const Index rows = static_cast<Index>(v.size());
  Index cols = -1;
  Matrix m;
  for (Index i = 0; i < rows; ++i) {
    const std::vector<double> row = as_vector(v[static_cast<std::size_t>(i)], name);
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      throw ConfigError("field '" + name + "' has rows of unequal length", name);
    }
    for (Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

struct Realization {
  Matrix a, b, c, d;
};

Realization parse_abcd(const json& j, const std::string& subject) {
  const Matrix d = as_matrix(require(j, "D", subject), subject + ".D", 0, 0);
  const Matrix a = as_matrix(require(j, "A", subject), subject + ".A", 0, 0);
  const Index n = a.rows();
  if (a.cols() != n) throw ConfigError("field '" + subject + ".A' must be square", subject + ".A");
  const Matrix b = as_matrix(require(j, "B", subject), subject + ".B", n, d.cols());
  const Matrix c = as_matrix(require(j, "C", subject), subject + ".C", d.rows(), n);
  if (b.rows() != n || c.cols() != n || c.rows() != d.rows() || b.cols() != d.cols()) {
    throw ConfigError("realization of '" + subject + "' has inconsistent dimensions", subject);
  }
  return {a, b, c, d};
}

StateSpace parse_continuous_system(const json& j, const std::string& subject) {
  if (!j.is_object()) throw ConfigError("field '" + subject + "' must be an object", subject);
  try {
    if (j.contains("num") || j.contains("den")) {
      const auto num = as_vector(require(j, "num", subject), subject + ".num");
      const auto den = as_vector(require(j, "den", subject), subject + ".den");
      return from_transfer_function(num, den);
    }
    const Realization r = parse_abcd(j, subject);
    return StateSpace::continuous(r.a, r.b, r.c, r.d);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), subject + ": " + e.what(), subject);
  }
}

}  // namespace

StateSpace parse_discrete_system(const json& j, const std::string& subject) {
  if (!j.is_object()) throw ConfigError("field '" + subject + "' must be an object", subject);
  const double period =
      j.contains("sample_period") ? as_number(j.at("sample_period"), subject + ".sample_period") : 1.0;
  if (!(period > 0.0)) {
    throw ConfigError("field '" + subject + ".sample_period' must be positive", subject);
  }
  try {
    if (j.contains("num") || j.contains("den")) {
      const auto num = as_vector(require(j, "num", subject), subject + ".num");
      const auto den = as_vector(require(j, "den", subject), subject + ".den");
      return from_transfer_function(num, den, period);
    }
    const Realization r = parse_abcd(j, subject);
    return StateSpace::discrete(r.a, r.b, r.c, r.d, period);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), subject + ": " + e.what(), subject);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'", path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what(), path.string());
  }
}

DesignConfig parse_design_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  StateSpace target = parse_continuous_system(require(j, "target"), "target");
  StateSpace characteristic = parse_continuous_system(require(j, "characteristic"), "characteristic");
  DesignConfig cfg{DesignSpec{std::move(target), std::move(characteristic), 1.0, 0, 1, 1, 1, {}}, 512, {}, "."};
  DesignSpec& s = cfg.spec;
  s.h = as_number(require(j, "h"), "h");
  s.m = as_count(require(j, "m"), "m");
  s.M = as_count(require(j, "M"), "M");
  s.N = as_count(require(j, "N"), "N");
  if (j.contains("L")) s.L = as_count(j.at("L"), "L");
  if (j.contains("grid_points")) cfg.grid_points = as_count(j.at("grid_points"), "grid_points");
  if (j.contains("norm_grid")) s.norm_grid = as_count(j.at("norm_grid"), "norm_grid");
  if (j.contains("solver")) {
    const json& o = j.at("solver");
    if (!o.is_object()) throw ConfigError("field 'solver' must be an object", "solver");
    for (const auto& [key, value] : o.items()) {
      const std::string name = "solver." + key;
      if (key == "gap_tol") s.solver.gap_tol = as_number(value, name);
      else if (key == "max_newton") s.solver.max_newton = as_count(value, name);
      else if (key == "barrier_mult") s.solver.barrier_mult = as_number(value, name);
      else if (key == "epsilon_margin") s.solver.epsilon_margin = as_number(value, name);
      else if (key == "newton_tol") s.solver.newton_tol = as_number(value, name);
      else throw ConfigError("unknown field '" + name + "'", name);
    }
  }
  if (j.contains("baseline")) {
    if (!j.at("baseline").is_string()) throw ConfigError("field 'baseline' must be a path", "baseline");
    cfg.baseline = j.at("baseline").get<std::string>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) {
      throw ConfigError("field 'output_dir' must be a path", "output_dir");
    }
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (cfg.grid_points < 2) throw ConfigError("grid_points must be at least 2", "grid_points");
  validate_spec(s);
  return cfg;
}

DesignConfig load_design_config(const std::filesystem::path& path) {
  DesignConfig cfg = parse_design_config(read_json_file(path));
  // Relative baseline paths are resolved against the config file.
  if (cfg.baseline && cfg.baseline->is_relative()) cfg.baseline = path.parent_path() / *cfg.baseline;
  return cfg;
}

StateSpace load_discrete_system(const std::filesystem::path& path) {
  return parse_discrete_system(read_json_file(path), "baseline");
}

}  // namespace sdfir::app
