#include "fkv/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fkv/errors.hpp"

namespace fkv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_real(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(line, "key '" + key + "': expected a real number, got '" + value + "'");
  }
}

long parse_int(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(line, "key '" + key + "': expected an integer, got '" + value + "'");
  }
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(line, "key '" + key + "': expected true/false, got '" + value + "'");
}

struct Assignment {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

void apply(ExperimentConfig& c, const Assignment& a) {
  const std::string& s = a.section;
  const std::string& k = a.key;
  const std::string& v = a.value;
  const int line = a.line;

  auto unknown = [&]() {
    fail(line, "unknown key '" + k + "' in section [" + s + "]");
  };

  if (s.empty()) {
    if (k == "seed") c.seed = static_cast<unsigned>(parse_int(line, k, v));
    else unknown();
  } else if (s == "model") {
    if (k == "type") {
      try {
        c.model.model = model_from_string(v);
      } catch (const DomainError& e) {
        fail(line, e.what());
      }
    } else if (k == "a") c.model.a = parse_real(line, k, v);
    else if (k == "b") c.model.b = parse_real(line, k, v);
    else if (k == "L") c.model.L = parse_real(line, k, v);
    else if (k == "l0") c.model.l0 = parse_real(line, k, v);
    else if (k == "l1") c.model.l1 = parse_real(line, k, v);
    else if (k == "d0") c.model.d0 = parse_real(line, k, v);
    else unknown();
  } else if (s == "fractional") {
    if (k == "alpha") c.alpha = parse_real(line, k, v);
    else if (k == "eta") c.eta = parse_real(line, k, v);
    else unknown();
  } else if (s == "discretization") {
    if (k == "n_left") c.n_left = static_cast<int>(parse_int(line, k, v));
    else if (k == "n_right") c.n_right = static_cast<int>(parse_int(line, k, v));
    else if (k == "n_xi") c.n_xi = static_cast<int>(parse_int(line, k, v));
    else if (k == "xi_max") c.xi_max = parse_real(line, k, v);
    else if (k == "quad_tol") c.quad_tol = parse_real(line, k, v);
    else unknown();
  } else if (s == "evolution") {
    if (k == "T") c.T = parse_real(line, k, v);
    else if (k == "dt") c.dt = parse_real(line, k, v);
    else if (k == "sample_every") c.sample_every = static_cast<int>(parse_int(line, k, v));
    else if (k == "tail_fraction") c.tail_fraction = parse_real(line, k, v);
    else if (k == "profile") {
      try {
        c.profile = profile_from_string(v);
      } catch (const DomainError& e) {
        fail(line, e.what());
      }
    } else unknown();
  } else if (s == "sweep") {
    if (k == "lambda_min") c.lambda_min = parse_real(line, k, v);
    else if (k == "lambda_max") c.lambda_max = parse_real(line, k, v);
    else if (k == "n_points") c.n_points = static_cast<int>(parse_int(line, k, v));
    else if (k == "refine_peaks") c.refine_peaks = parse_bool(line, k, v);
    else if (k == "mesh_refine") c.mesh_refine = parse_real(line, k, v);
    else unknown();
  } else if (s == "output") {
    if (k == "dir") c.out_dir = v;
    else if (k == "format") {
      if (v != "csv") fail(line, "key 'format': only 'csv' is supported");
      c.format = v;
    } else unknown();
  } else {
    fail(line, "unknown section [" + s + "]");
  }
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError("config: " + message);
  };
  require(c.alpha > 0.0 && c.alpha < 1.0,
          "alpha = " + std::to_string(c.alpha) + " violates 0 < alpha < 1");
  require(c.eta >= 0.0, "eta must be >= 0");
  require(c.model.a > 0.0, "a must be > 0");
  require(c.model.b > 0.0, "b must be > 0");
  require(c.model.L > 0.0, "L must be > 0");
  require(c.model.d0 > 0.0, "d0 must be > 0");
  require(c.model.l0 > 0.0 && c.model.l0 < c.model.l1 && c.model.l1 < c.model.L,
          "damping interval violates 0 < l0 < l1 < L");
  require(c.quad_tol > 0.0, "quad_tol must be > 0");
  require(c.n_left >= 0 && c.n_right >= 0 && c.n_xi >= 0,
          "element and node counts must be non-negative");
  require(c.T >= 0.0 && c.dt >= 0.0, "T and dt must be non-negative");
  require(c.tail_fraction > 0.0 && c.tail_fraction <= 1.0,
          "tail_fraction must lie in (0, 1]");
  require(c.lambda_min >= 0.0 && c.lambda_max >= 0.0,
          "sweep bounds must be non-negative");
  require(c.lambda_max == 0.0 || c.lambda_min < c.lambda_max,
          "sweep requires lambda_min < lambda_max");
  require(c.n_points >= 8, "sweep n_points must be >= 8");
  require(c.mesh_refine > 1.0, "mesh_refine must be > 1");
  require(!c.out_dir.empty(), "output dir must not be empty");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    Assignment a{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                 line_no};
    if (a.key.empty()) fail(line_no, "empty key");
    apply(config, a);
  }
  validate(config);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = path.find('.');
  Assignment a;
  a.line = 0;
  a.value = value;
  if (dot == std::string::npos) {
    a.section = "";
    a.key = path;
  } else {
    a.section = path.substr(0, dot);
    a.key = path.substr(dot + 1);
  }
  apply(config, a);
  validate(config);
}

void resolve_defaults(ExperimentConfig& c) {
  // Mesh defaults sized so the sweep's validity window spans about a decade:
  // the wave band limit grows like n, the beam one like n^2, so wave sides
  // need many more elements.
  const bool wave_damped = !ModelSpec{c.model}.damped_is_beam();
  switch (c.model.model) {
    case Model::EBBW:
      if (c.n_left == 0) c.n_left = 48;
      if (c.n_right == 0) c.n_right = 288;
      break;
    case Model::WW:
      if (c.n_left == 0) c.n_left = 288;
      if (c.n_right == 0) c.n_right = 288;
      break;
    case Model::WEBB:
      if (c.n_left == 0) c.n_left = 288;
      if (c.n_right == 0) c.n_right = 48;
      break;
    case Model::EBB:
      if (c.n_right == 0) c.n_right = 72;
      break;
    case Model::EBBEBB:
      if (c.n_left == 0) c.n_left = 48;
      if (c.n_right == 0) c.n_right = 48;
      break;
  }
  if (c.n_xi == 0) c.n_xi = 48;
  if (c.T == 0.0) c.T = wave_damped ? 120.0 : 60.0;
  if (c.dt == 0.0) c.dt = 1e-3;
  if (c.sample_every == 0) {
    const long steps = std::lround(c.T / c.dt);
    c.sample_every = std::max(1L, steps / 4000);
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& c) {
  auto real = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  return {
      {"seed", std::to_string(c.seed)},
      {"model.type", to_string(c.model.model)},
      {"model.a", real(c.model.a)},
      {"model.b", real(c.model.b)},
      {"model.L", real(c.model.L)},
      {"model.l0", real(c.model.l0)},
      {"model.l1", real(c.model.l1)},
      {"model.d0", real(c.model.d0)},
      {"fractional.alpha", real(c.alpha)},
      {"fractional.eta", real(c.eta)},
      {"discretization.n_left", std::to_string(c.n_left)},
      {"discretization.n_right", std::to_string(c.n_right)},
      {"discretization.n_xi", std::to_string(c.n_xi)},
      {"discretization.xi_max", real(c.xi_max)},
      {"discretization.quad_tol", real(c.quad_tol)},
      {"evolution.T", real(c.T)},
      {"evolution.dt", real(c.dt)},
      {"evolution.sample_every", std::to_string(c.sample_every)},
      {"evolution.tail_fraction", real(c.tail_fraction)},
      {"evolution.profile", to_string(c.profile)},
      {"sweep.lambda_min", real(c.lambda_min)},
      {"sweep.lambda_max", real(c.lambda_max)},
      {"sweep.n_points", std::to_string(c.n_points)},
      {"sweep.refine_peaks", c.refine_peaks ? "true" : "false"},
      {"sweep.mesh_refine", real(c.mesh_refine)},
      {"output.dir", c.out_dir},
      {"output.format", c.format},
  };
}

}  // namespace fkv
