#include "starcap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace starcap {
namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<double> parse_doubles(const std::string& value, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(item, what));
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    auto& entries = cfg.sections_[section];
    auto existing = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
    if (existing != entries.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + section + "]");
    }
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  for (const auto& [k, v] : it->second)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& entry : sections_) out.push_back(entry.first);
  return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  if (auto it = sections_.find(section); it != sections_.end())
    for (const auto& entry : it->second) out.push_back(entry.first);
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& value, const std::string& what) {
  const std::string v = trim(value);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& value, const std::string& what) {
  const std::string v = trim(value);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(what + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::pair<int, int> parse_grid(const std::string& value) {
  const std::string v = trim(value);
  const auto x = v.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("grid must be written MxK, got '" + v + "'");
  return {parse_int(v.substr(0, x), "grid angular count"), parse_int(v.substr(x + 1), "grid radial count")};
}

RadialConformalFactor FactorSpec::build() const {
  if (kind == "euclidean") return RadialConformalFactor::euclidean(lambda);
  if (kind == "sphere") return RadialConformalFactor::sphere(radius);
  if (kind == "hyperbolic") return RadialConformalFactor::hyperbolic(radius);
  if (kind == "custom") {
    std::ifstream in(table);
    if (!in) throw ConfigError("cannot open factor table '" + table.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    return RadialConformalFactor::from_table_text(text.str());
  }
  throw ConfigError("unknown factor kind '" + kind + "' (euclidean, sphere, hyperbolic, custom)");
}

FactorSpec FactorSpec::parse_short(const std::string& text) {
  FactorSpec spec;
  const auto colon = text.find(':');
  spec.kind = trim(text.substr(0, colon));
  if (spec.kind != "euclidean" && spec.kind != "sphere" && spec.kind != "hyperbolic" && spec.kind != "custom") {
    throw ConfigError("unknown factor kind '" + spec.kind + "'");
  }
  if (colon == std::string::npos) return spec;
  const std::string param = trim(text.substr(colon + 1));
  if (spec.kind == "custom") spec.table = param;
  else if (spec.kind == "euclidean") spec.lambda = parse_double(param, "factor lambda");
  else spec.radius = parse_double(param, "factor radius");
  return spec;
}

std::string FactorSpec::label() const {
  std::ostringstream out;
  out.precision(17);
  if (kind == "euclidean") out << kind << ':' << lambda;
  else if (kind == "custom") out << kind << ':' << table.string();
  else out << kind << ':' << radius;
  return out.str();
}

RadialFunction RadialSpec::build() const {
  if (!samples.empty()) return RadialFunction(samples);
  if (cos_coeffs.empty()) throw ConfigError("radial function needs either samples or cos coefficients");
  return RadialFunction::from_fourier(cos_coeffs, sin_coeffs, resolution);
}

RhsSpec RhsConfig::build() const {
  if (kind == "zero") return RhsSpec::zero();
  if (kind == "separable") {
    const double c = coefficient, p = exponent;
    return RhsSpec::separable([c](Vec2) { return c; }, [p](double s) { return std::pow(std::max(s, 0.0), p); });
  }
  throw ConfigError("unknown rhs kind '" + kind + "' (zero, separable)");
}

std::string RhsConfig::label() const {
  if (kind == "zero") return "zero";
  std::ostringstream out;
  out.precision(17);
  out << "separable:" << coefficient << "*s^" << exponent;
  return out.str();
}

StarshapedRing ExperimentConfig::ring() const {
  return StarshapedRing(outer.build(), inner.build(), factor.build());
}

void ExperimentConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (m < 8 || k < 3) throw ConfigError("grid must have at least 8 angular and 3 radial nodes");
  if (rhs.kind != "zero") {
    if (!(rhs.coefficient >= 0.0)) throw ConfigError("rhs coefficient must be non-negative (F >= 0)");
    if (!(rhs.exponent >= 0.0)) throw ConfigError("rhs exponent must be non-negative (F non-decreasing in s)");
  }
  if (analysis.diagnostic != "none" && analysis.diagnostic != "offcenter_bump") {
    throw ConfigError("unknown diagnostic '" + analysis.diagnostic + "' (none, offcenter_bump)");
  }
  for (double level : analysis.levels) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("analysis levels must lie in (0, 1)");
  }
  if (analysis.tol && !(*analysis.tol > 0.0)) throw ConfigError("analysis tolerance must be positive");
  if (analysis.oracle_points < 2) throw ConfigError("oracle_points must be at least 2");
  try {
    (void)ring();
    (void)rhs.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

namespace {

void check_known_keys(const ConfigFile& file) {
  static const std::map<std::string, std::set<std::string>> known{
      {"run", {"name", "seed"}},
      {"output", {"dir"}},
      {"factor", {"kind", "lambda", "radius", "table"}},
      {"ring", {"outer_radius", "outer_cos", "outer_sin", "outer_samples", "inner_radius", "inner_cos", "inner_sin",
                "inner_samples", "resolution"}},
      {"solver", {"q", "grid", "epsilon", "picard_tol", "max_picard", "linear_tol", "inner_value", "outer_value"}},
      {"rhs", {"kind", "coefficient", "exponent"}},
      {"analysis", {"tol", "levels", "diagnostic", "condition_tol", "oracle_points", "condition_samples"}},
      {"sweep", {"q", "factors", "grids"}},
  };
  for (const std::string& section : file.sections()) {
    const auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown section [" + section + "]");
    for (const std::string& key : file.keys(section)) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text, const std::filesystem::path& base_dir) {
  const ConfigFile file = ConfigFile::parse(text);
  check_known_keys(file);
  ExperimentConfig cfg;
  cfg.source = text;
  auto get = [&](const char* section, const char* key) { return file.get(section, key); };

  if (auto v = get("run", "name")) cfg.name = *v;
  if (auto v = get("run", "seed")) cfg.seed = static_cast<std::uint64_t>(parse_int(*v, "run.seed"));
  if (auto v = get("output", "dir")) cfg.output_dir = *v;

  if (auto v = get("factor", "kind")) cfg.factor.kind = *v;
  if (auto v = get("factor", "lambda")) cfg.factor.lambda = parse_double(*v, "factor.lambda");
  if (auto v = get("factor", "radius")) cfg.factor.radius = parse_double(*v, "factor.radius");
  if (auto v = get("factor", "table")) cfg.factor.table = base_dir / *v;

  auto radial = [&](const std::string& prefix, RadialSpec& spec) {
    if (auto v = file.get("ring", prefix + "_radius")) spec.cos_coeffs = {parse_double(*v, "ring." + prefix + "_radius")};
    if (auto v = file.get("ring", prefix + "_cos")) spec.cos_coeffs = parse_doubles(*v, "ring." + prefix + "_cos");
    if (auto v = file.get("ring", prefix + "_sin")) spec.sin_coeffs = parse_doubles(*v, "ring." + prefix + "_sin");
    if (auto v = file.get("ring", prefix + "_samples")) spec.samples = parse_doubles(*v, "ring." + prefix + "_samples");
    if (auto v = file.get("ring", "resolution")) spec.resolution = parse_int(*v, "ring.resolution");
  };
  if (!file.has_section("ring")) throw ConfigError("missing [ring] section");
  radial("outer", cfg.outer);
  radial("inner", cfg.inner);

  if (auto v = get("solver", "q")) cfg.solver.q = parse_double(*v, "solver.q");
  if (auto v = get("solver", "grid")) std::tie(cfg.m, cfg.k) = parse_grid(*v);
  if (auto v = get("solver", "epsilon")) cfg.solver.epsilon = parse_double(*v, "solver.epsilon");
  if (auto v = get("solver", "picard_tol")) cfg.solver.picard_tol = parse_double(*v, "solver.picard_tol");
  if (auto v = get("solver", "max_picard")) cfg.solver.max_picard = parse_int(*v, "solver.max_picard");
  if (auto v = get("solver", "linear_tol")) cfg.solver.linear_tol = parse_double(*v, "solver.linear_tol");
  if (auto v = get("solver", "inner_value")) cfg.bc.inner = parse_double(*v, "solver.inner_value");
  if (auto v = get("solver", "outer_value")) cfg.bc.outer = parse_double(*v, "solver.outer_value");

  cfg.has_rhs_section = file.has_section("rhs");
  if (auto v = get("rhs", "kind")) cfg.rhs.kind = *v;
  if (auto v = get("rhs", "coefficient")) cfg.rhs.coefficient = parse_double(*v, "rhs.coefficient");
  if (auto v = get("rhs", "exponent")) cfg.rhs.exponent = parse_double(*v, "rhs.exponent");

  if (auto v = get("analysis", "tol"); v && *v != "auto") cfg.analysis.tol = parse_double(*v, "analysis.tol");
  if (auto v = get("analysis", "levels")) cfg.analysis.levels = parse_doubles(*v, "analysis.levels");
  if (auto v = get("analysis", "diagnostic")) cfg.analysis.diagnostic = *v;
  if (auto v = get("analysis", "condition_tol")) cfg.analysis.condition_tol = parse_double(*v, "analysis.condition_tol");
  if (auto v = get("analysis", "oracle_points")) cfg.analysis.oracle_points = parse_int(*v, "analysis.oracle_points");
  if (auto v = get("analysis", "condition_samples")) {
    const auto counts = split_list(*v);
    if (counts.size() != 4) throw ConfigError("analysis.condition_samples needs four counts (x, tau, s, v)");
    cfg.analysis.condition = {parse_int(counts[0], "x count"), parse_int(counts[1], "tau count"),
                              parse_int(counts[2], "s count"), parse_int(counts[3], "v count")};
  }

  cfg.has_sweep_section = file.has_section("sweep");
  if (auto v = get("sweep", "q")) cfg.sweep.q = parse_doubles(*v, "sweep.q");
  if (auto v = get("sweep", "factors")) {
    for (const auto& item : split_list(*v)) {
      FactorSpec spec = FactorSpec::parse_short(item);
      if (spec.kind == "custom") spec.table = base_dir / spec.table;
      cfg.sweep.factors.push_back(spec);
    }
  }
  if (auto v = get("sweep", "grids"))
    for (const auto& item : split_list(*v)) cfg.sweep.grids.push_back(parse_grid(item));
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_experiment(text.str(), path.parent_path());
}

}  // namespace starcap
