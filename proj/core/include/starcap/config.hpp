#pragma once

// Experiment configuration: flat `key = value` text grouped under `[section]`
// headers, `#` comments, arrays as comma lists. See docs/config.md.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "starcap/analysis.hpp"
#include "starcap/domains.hpp"
#include "starcap/geometry.hpp"
#include "starcap/solver.hpp"

namespace starcap {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parsed sections of a config file; keys keep their order of appearance.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);

  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;
  std::vector<std::string> sections() const;

 private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

std::vector<std::string> split_list(const std::string& value);
double parse_double(const std::string& value, const std::string& what);
int parse_int(const std::string& value, const std::string& what);
/// "MxK" -> (M, K).
std::pair<int, int> parse_grid(const std::string& value);

struct FactorSpec {
  std::string kind = "euclidean";
  double lambda = 1.0;
  double radius = 1.0;
  std::filesystem::path table;

  RadialConformalFactor build() const;
  /// "kind:param", e.g. "sphere:1"; custom tables are "custom:<path>".
  static FactorSpec parse_short(const std::string& text);
  std::string label() const;
};

struct RadialSpec {
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  std::vector<double> samples;
  int resolution = 256;

  RadialFunction build() const;
};

struct RhsConfig {
  /// zero | separable (F = coefficient * s^exponent)
  std::string kind = "zero";
  double coefficient = 1.0;
  double exponent = 1.0;

  RhsSpec build() const;
  std::string label() const;
};

struct AnalysisConfig {
  /// Empty means "auto": 10 x measured refinement error, floored at 1e-6.
  std::optional<double> tol;
  std::vector<double> levels{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// none | offcenter_bump
  std::string diagnostic = "none";
  ConditionSamples condition;
  double condition_tol = 1e-12;
  int oracle_points = 101;
};

struct SweepConfig {
  std::vector<double> q;
  std::vector<FactorSpec> factors;
  std::vector<std::pair<int, int>> grids;

  bool empty() const { return q.empty() && factors.empty() && grids.empty(); }
};

struct ExperimentConfig {
  std::string name = "experiment";
  FactorSpec factor;
  RadialSpec outer;
  RadialSpec inner;
  SolverConfig solver;
  int m = 128;
  int k = 256;
  DirichletData bc;
  bool has_rhs_section = false;
  RhsConfig rhs;
  AnalysisConfig analysis;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  bool has_sweep_section = false;
  SweepConfig sweep;
  /// Original text, hashed into the run manifest.
  std::string source;

  StarshapedRing ring() const;
  /// Checks every module invariant; throws ConfigError naming the violated one.
  void validate() const;
};

/// Relative table paths resolve against `base_dir`.
ExperimentConfig parse_experiment(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_experiment(const std::filesystem::path& path);

}  // namespace starcap
