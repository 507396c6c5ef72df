#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "apvm/errors.hpp"

namespace apvm {

// Integrators for the linear Maxwell mode system
//   d/dt (E2_hat, B_hat) = M (E2_hat, B_hat),  M = [[0, -i c^2 k], [-i k, 0]].
// Exact and Crank--Nicolson keep |phi(i y)| = 1; the other three are L-stable,
// which is what produces the correct large-c limit.
enum class maxwell_method { exact, crank_nicolson, implicit_euler, radau_iia3, sdirk2 };

struct mode_pair {
  std::complex<double> e2{0.0, 0.0};
  std::complex<double> b{0.0, 0.0};
};

inline std::complex<double> stability_function(maxwell_method method, std::complex<double> z) {
  using cd = std::complex<double>;
  const double pole_tol = 1e-300;
  switch (method) {
    case maxwell_method::exact:
      return std::exp(z);
    case maxwell_method::crank_nicolson: {
      const cd den = 1.0 - 0.5 * z;
      if (std::abs(den) < pole_tol) throw domain_error("stability function pole");
      return (1.0 + 0.5 * z) / den;
    }
    case maxwell_method::implicit_euler: {
      const cd den = 1.0 - z;
      if (std::abs(den) < pole_tol) throw domain_error("stability function pole");
      return 1.0 / den;
    }
    case maxwell_method::radau_iia3: {
      const cd den = 1.0 - (2.0 / 3.0) * z + z * z / 6.0;
      if (std::abs(den) < pole_tol) throw domain_error("stability function pole");
      return (1.0 + z / 3.0) / den;
    }
    case maxwell_method::sdirk2: {
      const double a = std::sqrt(2.0) / 2.0 - 1.0;
      const cd den = (1.0 + a * z) * (1.0 + a * z);
      if (std::abs(den) < pole_tol) throw domain_error("stability function pole");
      return (1.0 + (std::sqrt(2.0) - 1.0) * z) / den;
    }
  }
  throw domain_error("unknown maxwell method");
}

namespace detail {

struct butcher_tableau {
  int stages;
  std::array<std::array<double, 2>, 2> a;
  std::array<double, 2> b;
};

inline butcher_tableau tableau(maxwell_method method) {
  if (method == maxwell_method::radau_iia3)
    return {2, {{{5.0 / 12.0, -1.0 / 12.0}, {3.0 / 4.0, 1.0 / 4.0}}}, {3.0 / 4.0, 1.0 / 4.0}};
  if (method == maxwell_method::sdirk2) {
    const double g = 1.0 - 1.0 / std::sqrt(2.0);
    return {2, {{{g, 0.0}, {1.0 - 2.0 * g, g}}}, {0.5, 0.5}};
  }
  throw domain_error("no tableau for this method");
}

// Gaussian elimination with partial pivoting on an n x n complex system.
template <int N>
inline void solve_dense(std::complex<double> a[N][N], std::complex<double> rhs[N]) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (piv != col) {
      for (int cidx = 0; cidx < N; ++cidx) std::swap(a[col][cidx], a[piv][cidx]);
      std::swap(rhs[col], rhs[piv]);
    }
    const std::complex<double> d = a[col][col];
    for (int r = col + 1; r < N; ++r) {
      const std::complex<double> m = a[r][col] / d;
      if (m == std::complex<double>(0.0, 0.0)) continue;
      for (int cidx = col; cidx < N; ++cidx) a[r][cidx] -= m * a[col][cidx];
      rhs[r] -= m * rhs[col];
    }
  }
  for (int r = N - 1; r >= 0; --r) {
    std::complex<double> s = rhs[r];
    for (int cidx = r + 1; cidx < N; ++cidx) s -= a[r][cidx] * rhs[cidx];
    rhs[r] = s / a[r][r];
  }
}

// Two-stage implicit RK step for y' = M y: one complex 4x4 stage system per
// mode, solved directly, then the b-weighted update.
inline mode_pair rk_stage_step(const butcher_tableau& tb, mode_pair y, double k, double c,
                               double dt) {
  using cd = std::complex<double>;
  const cd m01(0.0, -c * c * k);  // M(0,1)
  const cd m10(0.0, -k);         // M(1,0)
  // unknowns: (Y1_e2, Y1_b, Y2_e2, Y2_b); Y_i = y + dt sum_j a_ij M Y_j
  cd a[4][4] = {};
  cd rhs[4] = {y.e2, y.b, y.e2, y.b};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double aij = tb.a[i][j];
      a[2 * i + 0][2 * j + 1] -= dt * aij * m01;
      a[2 * i + 1][2 * j + 0] -= dt * aij * m10;
    }
    a[2 * i + 0][2 * i + 0] += 1.0;
    a[2 * i + 1][2 * i + 1] += 1.0;
  }
  solve_dense<4>(a, rhs);
  if (tb.a[1][0] == tb.b[0] && tb.a[1][1] == tb.b[1])  // stiffly accurate: y+ = Y2
    return {rhs[2], rhs[3]};
  mode_pair out = y;
  for (int i = 0; i < 2; ++i) {
    out.e2 += dt * tb.b[i] * m01 * rhs[2 * i + 1];
    out.b += dt * tb.b[i] * m10 * rhs[2 * i + 0];
  }
  return out;
}

}  // namespace detail

// One step of the chosen method on a single Fourier mode.
inline mode_pair advance_mode(maxwell_method method, mode_pair y, double k, double c, double dt) {
  using cd = std::complex<double>;
  if (k == 0.0) return y;
  switch (method) {
    case maxwell_method::exact: {
      // M^2 = -(ck)^2 I, so exp(dt M) = cos(ck dt) I + sin(ck dt)/(ck) M
      const double w = c * k * dt;
      const double cs = std::cos(w), sn = std::sin(w) / (c * k);
      return {cs * y.e2 + sn * cd(0.0, -c * c * k) * y.b,
              cs * y.b + sn * cd(0.0, -k) * y.e2};
    }
    case maxwell_method::crank_nicolson: {
      // (I - dt M/2)^{-1} (I + dt M/2)
      const double h = 0.5 * dt;
      const cd me2 = y.e2 + h * cd(0.0, -c * c * k) * y.b;
      const cd mb = y.b + h * cd(0.0, -k) * y.e2;
      const double den = 1.0 + h * h * c * c * k * k;
      return {(me2 + h * cd(0.0, -c * c * k) * mb) / den,
              (mb + h * cd(0.0, -k) * me2) / den};
    }
    case maxwell_method::implicit_euler: {
      const double den = 1.0 + dt * dt * c * c * k * k;
      return {(y.e2 + dt * cd(0.0, -c * c * k) * y.b) / den,
              (y.b + dt * cd(0.0, -k) * y.e2) / den};
    }
    case maxwell_method::radau_iia3:
    case maxwell_method::sdirk2:
      return detail::rk_stage_step(detail::tableau(method), y, k, c, dt);
  }
  throw domain_error("unknown maxwell method");
}

// max over the two mode eigenvalues +-ick of |phi(lambda dt)|
inline double eigen_amplification(maxwell_method method, double k, double c, double dt) {
  const std::complex<double> z(0.0, c * k * dt);
  return std::max(std::abs(stability_function(method, z)),
                  std::abs(stability_function(method, -z)));
}

inline std::string method_name(maxwell_method m) {
  switch (m) {
    case maxwell_method::exact: return "exact";
    case maxwell_method::crank_nicolson: return "cranknicolson";
    case maxwell_method::implicit_euler: return "euler";
    case maxwell_method::radau_iia3: return "radau3";
    case maxwell_method::sdirk2: return "sdirk2";
  }
  return "?";
}

}  // namespace apvm
