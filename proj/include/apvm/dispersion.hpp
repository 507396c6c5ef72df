#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "apvm/errors.hpp"

namespace apvm {

// Bi-Maxwellian equilibrium f0 = g(p_x) h(p_y) with thermal momentum v_th,
// anisotropy ratio t_ratio in p_y, drift offsets (a, b), plus the wave and
// discretization parameters of the linearized problem.
struct dispersion_params {
  double v_th = 0.02;
  double t_ratio = 12.0;
  double a = 0.0, b = 0.0;
  double k = 1.25;
  double c = 1.0;
  double dt = 0.0;  // semidiscrete relation only

  void validate() const {
    if (v_th <= 0.0) throw config_error("v_th must be positive");
    if (t_ratio <= 0.0) throw config_error("t_ratio must be positive");
    if (k == 0.0) throw config_error("k must be nonzero");
    if (c <= 0.0) throw config_error("c must be positive");
  }
};

namespace detail {

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) by the midpoint rule on the
// contour Im t = -2: w(z) = (i/pi) int e^{-(s-2i)^2} / (z-s+2i) ds. The pole
// stays at least 1.5 away from the contour for Im z >= -1/2, making the
// trapezoidal error ~1e-20; the lower half-plane uses w(z) = 2e^{-z^2}-w(-z).
inline std::complex<double> faddeeva_w(std::complex<double> z) {
  using cd = std::complex<double>;
  const double sigma = 2.0, h = 0.2, S = 7.0;
  if (z.imag() < -0.5) {
    const cd mz2 = -z * z;
    if (mz2.real() > 700.0) throw domain_error("faddeeva: exp overflow");
    return 2.0 * std::exp(mz2) - faddeeva_w(-z);
  }
  cd acc(0.0, 0.0);
  const int n = static_cast<int>(2.0 * S / h);
  for (int i = 0; i < n; ++i) {
    const double s = -S + (i + 0.5) * h;
    // e^{-(s - i sigma)^2} = e^{sigma^2 - s^2} (cos(2 s sigma) + i sin(2 s sigma))
    const double mag = std::exp(sigma * sigma - s * s);
    const cd num(mag * std::cos(2.0 * s * sigma), mag * std::sin(2.0 * s * sigma));
    acc += num / (z - s + cd(0.0, sigma));
  }
  return cd(0.0, h / std::numbers::pi) * acc;
}

}  // namespace detail

// Z(xi) = sqrt(pi) e^{-xi^2} (i - erfi(xi)), entire; equals i sqrt(pi) w(xi).
inline std::complex<double> plasma_z(std::complex<double> xi) {
  if (std::abs(xi) >= 700.0) throw domain_error("plasma_z: argument too large");
  if (xi.imag() * xi.imag() - xi.real() * xi.real() > 700.0)
    throw domain_error("plasma_z: exp overflow");
  return std::complex<double>(0.0, std::sqrt(std::numbers::pi)) * detail::faddeeva_w(xi);
}

// L1(k, omega, c) = (T_r + 2 b^2 / v_th^2) [1 + xi Z(xi)], xi = (omega/k - a)/v_th
inline std::complex<double> l1_closed(const dispersion_params& p, std::complex<double> omega) {
  p.validate();
  const std::complex<double> xi = (omega / p.k - p.a) / p.v_th;
  return (p.t_ratio + 2.0 * p.b * p.b / (p.v_th * p.v_th)) * (1.0 + xi * plasma_z(xi));
}

// D(omega, k) = -1 + omega^2 - k^2 c^2 + T_r [1 + xi Z(xi)]  (a = b = 0)
inline std::complex<double> continuous_d(const dispersion_params& p, std::complex<double> omega) {
  p.validate();
  const std::complex<double> xi = omega / (p.k * p.v_th);
  return -1.0 + omega * omega - p.k * p.k * p.c * p.c +
         p.t_ratio * (1.0 + xi * plasma_z(xi));
}

namespace detail {

// int p_y d/dp_y h dp_y (equals -1 for any normalized h) and int p_y^2 h dp_y,
// by midpoint quadrature of the p_y Maxwellian.
struct py_moments {
  double m0;  // int p_y h' dp_y
  double m2;  // int p_y^2 h dp_y
};

inline py_moments py_moments_quadrature(const dispersion_params& p) {
  const double w = p.v_th * std::sqrt(p.t_ratio);
  const double lo = p.b - 12.0 * w, hi = p.b + 12.0 * w;
  const int n = 4096;
  const double d = (hi - lo) / n;
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * w);
  double m0 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = lo + (i + 0.5) * d;
    const double h = norm * std::exp(-(y - p.b) * (y - p.b) / (w * w));
    m0 += y * (-2.0 * (y - p.b) / (w * w)) * h;
    m2 += y * y * h;
  }
  return {m0 * d, m2 * d};
}

// The three p_x Landau integrals against the pole 1/(p - zeta):
//   k0 = int g/(p-zeta), k1 = int g'/(p-zeta), kp = int p g/(p-zeta).
struct px_kernels {
  std::complex<double> k0, k1, kp;
};

inline px_kernels px_kernels_quadrature(const dispersion_params& p, std::complex<double> zeta) {
  const double dist = std::abs(zeta.imag());
  if (dist < 1e-10) throw domain_error("dispersion quadrature: pole on the integration axis");
  const double v = p.v_th;
  const double lo = p.a - 12.0 * v, hi = p.a + 12.0 * v;
  const double step = std::min(v / 8.0, dist / 5.0);
  const long n = std::clamp(static_cast<long>(std::ceil((hi - lo) / step)), 512L, 4000000L);
  const double d = (hi - lo) / static_cast<double>(n);
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * v);
  std::complex<double> k0(0.0), k1(0.0), kp(0.0);
  for (long i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) * d;
    const double g = norm * std::exp(-(x - p.a) * (x - p.a) / (v * v));
    const std::complex<double> inv = 1.0 / (x - zeta);
    k0 += g * inv;
    k1 += (-2.0 * (x - p.a) / (v * v)) * g * inv;
    kp += x * g * inv;
  }
  return {k0 * d, k1 * d, kp * d};
}

// L1 = int p_y f0_{p_y} / (p_x - zeta) dp,  L2 = int (p_y^2 f0_{p_x} -
// p_x p_y f0_{p_y}) / (p_x - zeta) dp: the current-response kernels of the
// matrix dispersion relations, reduced to 1-d quadratures by separability.
struct response_pair {
  std::complex<double> l1, l2;
};

inline response_pair response_kernels(const dispersion_params& p, std::complex<double> zeta) {
  const py_moments my = py_moments_quadrature(p);
  const px_kernels kx = px_kernels_quadrature(p, zeta);
  return {my.m0 * kx.k0, my.m2 * kx.k1 - my.m0 * kx.kp};
}

}  // namespace detail

// int p_y d/dp_y f0 dp evaluated by quadrature; -1 for any normalized f0.
inline double weibel_l2_moment(const dispersion_params& p) {
  p.validate();
  return detail::py_moments_quadrature(p).m0;
}

using mat3 = std::array<std::array<std::complex<double>, 3>, 3>;

inline std::complex<double> det3(const mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Continuous 3x3 dispersion matrix for U = (dJ2, dE2, dB).
inline mat3 continuous_matrix(const dispersion_params& p, std::complex<double> omega) {
  p.validate();
  using cd = std::complex<double>;
  const auto resp = detail::response_kernels(p, omega / p.k);
  const cd i_over_k(0.0, 1.0 / p.k);
  const cd ik(0.0, p.k);
  mat3 m;
  m[0] = {cd(1.0), -i_over_k * resp.l1, -i_over_k * resp.l2};
  m[1] = {cd(1.0), cd(0.0, -1.0) * omega, p.c * p.c * ik};
  m[2] = {cd(0.0), ik, cd(0.0, -1.0) * omega};
  return m;
}

// Semi-discrete counterpart A^dt, with the pole at
// zeta = (1 - e^{-i omega dt}) / (i dt k) and the entries as printed.
inline mat3 semidiscrete_matrix(const dispersion_params& p, std::complex<double> omega) {
  p.validate();
  if (p.dt <= 0.0) throw config_error("semidiscrete relation needs dt > 0");
  using cd = std::complex<double>;
  const cd phase = std::exp(cd(0.0, -1.0) * omega * p.dt);
  const cd zeta = (1.0 - phase) / (cd(0.0, 1.0) * p.dt * p.k);
  const auto resp = detail::response_kernels(p, zeta);
  const cd i_over_k(0.0, 1.0 / p.k);
  const cd ik(0.0, p.k);
  const double denom = 1.0 + p.dt * p.dt * p.c * p.c * p.k * p.k;
  const cd diag = (phase - 1.0 / denom) / p.dt;
  mat3 m;
  m[0] = {cd(1.0), -i_over_k * phase * resp.l1, -i_over_k * phase * resp.l2};
  m[1] = {cd(1.0), diag, p.c * p.c * ik};
  m[2] = {p.dt * p.dt * ik, ik, diag};
  return m;
}

inline std::complex<double> continuous_det(const dispersion_params& p,
                                           std::complex<double> omega) {
  return det3(continuous_matrix(p, omega));
}

inline std::complex<double> semidiscrete_det(const dispersion_params& p,
                                             std::complex<double> omega) {
  return det3(semidiscrete_matrix(p, omega));
}

// Damped complex Newton with a forward-difference derivative. Stops at
// |relation| <= 1e-10; halves the step up to 20 times when the residual
// refuses to decrease (D has exponentially flat regions).
inline std::complex<double> find_root(const std::function<std::complex<double>(std::complex<double>)>& relation,
                                      std::complex<double> guess, double tol = 1e-10,
                                      int max_iter = 100) {
  using cd = std::complex<double>;
  cd w = guess;
  cd fw = relation(w);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fw) <= tol) return w;
    const double h = 1e-7 * std::max(1.0, std::abs(w));
    const cd df = (relation(w + h) - fw) / h;
    if (!(std::abs(df) > 0.0)) throw no_root_error(w, std::abs(fw));
    const cd full_step = fw / df;
    double damping = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 20; ++halvings) {
      const cd trial = w - damping * full_step;
      const cd ft = relation(trial);
      if (std::abs(ft) < std::abs(fw)) {
        w = trial;
        fw = ft;
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    if (!accepted) throw no_root_error(w, std::abs(fw));
  }
  if (std::abs(fw) <= tol) return w;
  throw no_root_error(w, std::abs(fw));
}

enum class relation_kind { continuous, semidiscrete };

struct scan_row {
  double c = 0.0;
  std::complex<double> omega{0.0, 0.0};
  bool unstable = false;
};

// For each c, chase roots from a ladder of imaginary-axis guesses and keep
// the most unstable one. Growth means |e^{-i omega t}| > 1, i.e. Im omega > 0
// for the closed-form Z used here.
inline std::vector<scan_row> growth_rate_scan(dispersion_params base,
                              std::span<const double> c_values, relation_kind kind) {
  using cd = std::complex<double>;
  static constexpr double ladder[] = {1e-3, 2e-3, 5e-3, 0.01, 0.015, 0.02,
                                      0.03, 0.05, 0.08, 0.12, 0.2, 0.3};
  std::vector<scan_row> rows;
  rows.reserve(c_values.size());
  for (double c : c_values) {
    dispersion_params p = base;
    p.c = c;
    auto rel = [&](cd w) {
      return kind == relation_kind::continuous ? continuous_d(p, w) : semidiscrete_det(p, w);
    };
    scan_row row;
    row.c = c;
    bool found = false;
    for (double g : ladder) {
      cd root;
      try {
        root = find_root(rel, cd(0.0, g));
      } catch (const no_root_error&) {
        continue;
      } catch (const domain_error&) {
        continue;  // quadrature pole hit while iterating
      }
      if (!found || root.imag() > row.omega.imag()) {
        row.omega = root;
        found = true;
      }
    }
    row.unstable = found && row.omega.imag() > 1e-8;
    if (!found) row.omega = cd(0.0, 0.0);
    rows.push_back(row);
  }
  return rows;
}

inline void write_scan_csv(std::ostream& os, const std::vector<scan_row>& rows) {
  os << "c,re_omega,im_omega,status\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.11e,%.11e,%.11e,%s\n", r.c, r.omega.real(),
                  r.omega.imag(), r.unstable ? "unstable" : "stable");
    os << buf;
  }
}

}  // namespace apvm
