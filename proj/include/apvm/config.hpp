#pragma once

#include <cstdlib>
#include <string>
#include <string_view>

#include "apvm/errors.hpp"
#include "apvm/fourier.hpp"
#include "apvm/maxwell.hpp"

namespace apvm {

enum class scenario_kind { landau, weibel };
enum class split_order { first, strang };

struct run_config {
  scenario_kind scenario = scenario_kind::landau;
  bool relativistic = false;
  double c = 1.0;
  double dt = 0.1;
  double t_final = 45.0;
  std::size_t nx = 64, np1 = 256, np2 = 256;
  maxwell_method method = maxwell_method::radau_iia3;
  split_order order = split_order::strang;
  std::size_t sample_every = 1;
  std::string out = "apvm_out.csv";

  void validate() const {
    if (dt <= 0.0) throw config_error("dt must be positive");
    if (t_final < 0.0) throw config_error("t_final must be nonnegative");
    if (!is_power_of_two(nx) || !is_power_of_two(np1) || !is_power_of_two(np2))
      throw config_error("nx, np1, np2 must be powers of two");
    if (sample_every == 0) throw config_error("sample_every must be at least 1");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_double(std::string_view v, int line) {
  const std::string tmp(v);
  char* end = nullptr;
  const double x = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || tmp.empty())
    throw parse_error(line, "malformed number '" + tmp + "'");
  return x;
}

inline std::size_t parse_count(std::string_view v, int line) {
  const double x = parse_double(v, line);
  if (x < 1.0 || x != static_cast<double>(static_cast<std::size_t>(x)))
    throw parse_error(line, "expected a positive integer, got '" + std::string(v) + "'");
  return static_cast<std::size_t>(x);
}

inline bool parse_flag(std::string_view v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw parse_error(line, "expected a boolean, got '" + std::string(v) + "'");
}

inline maxwell_method parse_method(std::string_view v, int line) {
  if (v == "exact") return maxwell_method::exact;
  if (v == "cranknicolson" || v == "cn") return maxwell_method::crank_nicolson;
  if (v == "euler" || v == "implicit_euler") return maxwell_method::implicit_euler;
  if (v == "radau3" || v == "radau") return maxwell_method::radau_iia3;
  if (v == "sdirk2" || v == "sdirk") return maxwell_method::sdirk2;
  throw parse_error(line, "unknown method '" + std::string(v) + "'");
}

inline scenario_kind parse_scenario(std::string_view v, int line) {
  if (v == "landau") return scenario_kind::landau;
  if (v == "weibel") return scenario_kind::weibel;
  throw parse_error(line, "unknown scenario '" + std::string(v) + "'");
}

inline split_order parse_order(std::string_view v, int line) {
  if (v == "first") return split_order::first;
  if (v == "strang") return split_order::strang;
  throw parse_error(line, "unknown order '" + std::string(v) + "'");
}

inline void apply_key(run_config& cfg, std::string_view key, std::string_view value, int line,
                      bool& have_scenario) {
  if (key == "scenario") {
    cfg.scenario = parse_scenario(value, line);
    have_scenario = true;
  } else if (key == "relativistic") {
    cfg.relativistic = parse_flag(value, line);
  } else if (key == "c") {
    cfg.c = parse_double(value, line);
  } else if (key == "dt") {
    cfg.dt = parse_double(value, line);
  } else if (key == "t_final") {
    cfg.t_final = parse_double(value, line);
  } else if (key == "nx") {
    cfg.nx = parse_count(value, line);
  } else if (key == "np1") {
    cfg.np1 = parse_count(value, line);
  } else if (key == "np2") {
    cfg.np2 = parse_count(value, line);
  } else if (key == "method") {
    cfg.method = parse_method(value, line);
  } else if (key == "order") {
    cfg.order = parse_order(value, line);
  } else if (key == "sample_every") {
    cfg.sample_every = parse_count(value, line);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else {
    throw parse_error(line, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace detail

// Plain key=value per line, '#' comments; unknown keys are rejected and the
// scenario is required. Everything else has the documented defaults.
inline run_config parse_config(std::string_view text) {
  run_config cfg;
  bool have_scenario = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw parse_error(line_no, "expected key=value");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    detail::apply_key(cfg, key, value, line_no, have_scenario);
  }
  if (!have_scenario) throw parse_error(line_no, "missing required key 'scenario'");
  cfg.validate();
  return cfg;
}

}  // namespace apvm
