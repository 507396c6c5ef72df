#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace apvm {

// Invalid grid sizes, scenario parameters, mismatched grids, bad run setups.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computed quantity violated an internal invariant (e.g. Hermitian symmetry).
struct internal_error : std::runtime_error {
  explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested outside the valid domain of a function.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Config-file syntax problems; carries the 1-based line number.
struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Newton iteration failed to converge; keeps the last iterate for inspection.
struct no_root_error : std::runtime_error {
  std::complex<double> last_iterate;
  double last_residual;
  no_root_error(std::complex<double> it, double res)
      : std::runtime_error("root finding did not converge"), last_iterate(it), last_residual(res) {}
};

// NaN/Inf detected during a time loop; keeps the last valid time.
struct run_aborted_error : std::runtime_error {
  double last_valid_time;
  explicit run_aborted_error(double t)
      : std::runtime_error("run aborted: non-finite state at t > " + std::to_string(t)),
        last_valid_time(t) {}
};

}  // namespace apvm
