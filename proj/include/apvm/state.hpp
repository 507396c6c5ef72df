#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "apvm/errors.hpp"
#include "apvm/fourier.hpp"

namespace apvm {

// gamma = sqrt(1 + |p|^2/c^2); identically 1 in the semi-relativistic model.
inline double lorentz_gamma(double p1, double p2, double c, bool relativistic) {
  if (!relativistic) return 1.0;
  return std::sqrt(1.0 + (p1 * p1 + p2 * p2) / (c * c));
}

// Uniform tensor grid over (x, p1, p2): periodic x on [0, L), momentum box
// [-pmax, pmax) with the endpoint excluded (f is negligible there).
struct phase_grid {
  std::size_t nx = 0, np1 = 0, np2 = 0;
  double length = 0.0;  // x period
  double pmax = 0.0;

  phase_grid() = default;
  phase_grid(std::size_t nx_, std::size_t np1_, std::size_t np2_, double length_, double pmax_)
      : nx(nx_), np1(np1_), np2(np2_), length(length_), pmax(pmax_) {
    if (length <= 0.0) throw config_error("x period must be positive");
    if (pmax <= 0.0) throw config_error("pmax must be positive");
    if (nx < 4 || np1 < 4 || np2 < 4)
      throw config_error("grid needs at least 4 cells per direction");
    if (!is_power_of_two(nx)) throw config_error("nx must be a power of two");
  }

  double dx() const { return length / static_cast<double>(nx); }
  double dp1() const { return 2.0 * pmax / static_cast<double>(np1); }
  double dp2() const { return 2.0 * pmax / static_cast<double>(np2); }
  double x(std::size_t m) const { return static_cast<double>(m) * dx(); }
  double p1(std::size_t i) const { return -pmax + static_cast<double>(i) * dp1(); }
  double p2(std::size_t i) const { return -pmax + static_cast<double>(i) * dp2(); }
  std::size_t plane_size() const { return np1 * np2; }
  std::size_t size() const { return nx * plane_size(); }

  bool operator==(const phase_grid& o) const {
    return nx == o.nx && np1 == o.np1 && np2 == o.np2 && length == o.length && pmax == o.pmax;
  }
};

// f on the phase grid; the momentum plane of each x column is contiguous.
struct distribution {
  phase_grid grid;
  std::vector<double> values;

  distribution() = default;
  explicit distribution(const phase_grid& g) : grid(g), values(g.size(), 0.0) {}

  double& operator()(std::size_t m, std::size_t i1, std::size_t i2) {
    return values[(m * grid.np1 + i1) * grid.np2 + i2];
  }
  double operator()(std::size_t m, std::size_t i1, std::size_t i2) const {
    return values[(m * grid.np1 + i1) * grid.np2 + i2];
  }
  double* plane(std::size_t m) { return values.data() + m * grid.plane_size(); }
  const double* plane(std::size_t m) const { return values.data() + m * grid.plane_size(); }

  // int f dp at column m (rectangle rule; f vanishes at the box edge)
  double column_density(std::size_t m) const {
    const double* p = plane(m);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.plane_size(); ++i) s += p[i];
    return s * grid.dp1() * grid.dp2();
  }

  double total_mass() const {
    double s = 0.0;
    for (std::size_t m = 0; m < grid.nx; ++m) s += column_density(m);
    return s * grid.dx();
  }
};

// E1, E2, B sampled on the x grid; all of zero average.
struct field_state {
  std::vector<double> e1, e2, b;

  field_state() = default;
  explicit field_state(std::size_t nx) : e1(nx, 0.0), e2(nx, 0.0), b(nx, 0.0) {}
  std::size_t size() const { return e1.size(); }
};

struct sim_state {
  distribution f;
  field_state fields;
  double t = 0.0;
  double c = 1.0;
  bool relativistic = false;

  const phase_grid& grid() const { return f.grid; }
};

namespace detail {

// E1 from the discrete Gauss law ik*E1_hat(k) = rho_hat(k), rho = int f dp - 1,
// with the k = 0 mode pinned to zero.
inline std::vector<double> gauss_electric_field(const distribution& f) {
  const auto& g = f.grid;
  std::vector<double> rho(g.nx);
  for (std::size_t m = 0; m < g.nx; ++m) rho[m] = f.column_density(m) - 1.0;
  spectral_line line = forward_x(rho, g.length);
  line.coeff(0) = 0.0;
  const long half = static_cast<long>(g.nx) / 2;
  for (long j = 1; j < half; ++j) {
    const cdouble ik(0.0, wavenumber(j, g.length));
    line.coeff(j) /= ik;
    line.coeff(-j) /= std::conj(ik);  // ik at mode -j
  }
  line.coeff(half) = 0.0;
  return inverse_x(line);
}

}  // namespace detail

// Landau configuration: f0 = (1/2pi) exp(-|p|^2/2) (1 + alpha cos kx), with
// E1 solving the discrete Gauss law and B = E1/c so that the initial plane
// wave stores equal energy in the electric and magnetic fields.
inline sim_state init_landau(const phase_grid& g, double alpha, double k, double c,
                             bool relativistic = false) {
  if (c <= 0.0) throw config_error("light speed parameter must be positive");
  if (std::abs(k * g.length - 2.0 * std::numbers::pi) > 1e-9 * 2.0 * std::numbers::pi)
    throw config_error("landau wavenumber must be the fundamental mode 2*pi/L");
  sim_state s;
  s.f = distribution(g);
  s.fields = field_state(g.nx);
  s.c = c;
  s.relativistic = relativistic;
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  for (std::size_t m = 0; m < g.nx; ++m) {
    const double envelope = 1.0 + alpha * std::cos(k * g.x(m));
    double* plane = s.f.plane(m);
    for (std::size_t i1 = 0; i1 < g.np1; ++i1) {
      const double q1 = g.p1(i1);
      for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
        const double q2 = g.p2(i2);
        plane[i1 * g.np2 + i2] = norm * std::exp(-0.5 * (q1 * q1 + q2 * q2)) * envelope;
      }
    }
  }
  s.fields.e1 = detail::gauss_electric_field(s.f);
  for (std::size_t m = 0; m < g.nx; ++m) s.fields.b[m] = s.fields.e1[m] / c;
  return s;
}

// Weibel configuration: anisotropic Maxwellian with temperature ratio T_r,
// B = (alpha/(c k)) cos kx taken literally.
inline sim_state init_weibel(const phase_grid& g, double alpha, double k, double t_ratio,
                             double p_th, double c, bool relativistic = false) {
  if (c <= 0.0) throw config_error("light speed parameter must be positive");
  if (t_ratio <= 0.0) throw config_error("temperature ratio must be positive");
  if (p_th <= 0.0) throw config_error("thermal momentum must be positive");
  if (std::abs(k * g.length - 2.0 * std::numbers::pi) > 1e-9 * 2.0 * std::numbers::pi)
    throw config_error("weibel wavenumber must be the fundamental mode 2*pi/L");
  sim_state s;
  s.f = distribution(g);
  s.fields = field_state(g.nx);
  s.c = c;
  s.relativistic = relativistic;
  const double norm = 1.0 / (std::numbers::pi * p_th * p_th * std::sqrt(t_ratio));
  const double inv_pth2 = 1.0 / (p_th * p_th);
  for (std::size_t m = 0; m < g.nx; ++m) {
    const double envelope = 1.0 + alpha * std::cos(k * g.x(m));
    double* plane = s.f.plane(m);
    for (std::size_t i1 = 0; i1 < g.np1; ++i1) {
      const double q1 = g.p1(i1);
      for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
        const double q2 = g.p2(i2);
        plane[i1 * g.np2 + i2] =
            norm * std::exp(-(q1 * q1 + q2 * q2 / t_ratio) * inv_pth2) * envelope;
      }
    }
  }
  s.fields.e1 = detail::gauss_electric_field(s.f);
  for (std::size_t m = 0; m < g.nx; ++m)
    s.fields.b[m] = alpha / (c * k) * std::cos(k * g.x(m));
  return s;
}

}  // namespace apvm
