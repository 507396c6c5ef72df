#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace apvm {

// Cubic Lagrange weights for the 4-point stencil {-1, 0, 1, 2} in units of
// the grid spacing; s is the offset from the stencil's second node.
inline void lagrange3_weights(double s, double w[4]) {
  const double s1 = s - 1.0, s2 = s - 2.0, sp = s + 1.0;
  w[0] = -s * s1 * s2 / 6.0;
  w[1] = sp * s1 * s2 / 2.0;
  w[2] = -sp * s * s2 / 2.0;
  w[3] = sp * s * s1 / 6.0;
}

namespace detail {

// Stencil base and weights along one axis. Targets outside [node 0, node n-1]
// evaluate to zero; inside, the window is clamped near the edges so the
// interpolant stays a 4-node cubic through existing nodes.
inline bool axis_stencil(double t, std::size_t n, std::size_t& base, double w[4]) {
  const double tol = 1e-6;  // in cells; sub-tolerance shifts keep edge nodes inside
  if (t < -tol || t > static_cast<double>(n - 1) + tol) return false;
  long i = static_cast<long>(std::floor(t));
  if (i < 1) i = 1;
  const long imax = static_cast<long>(n) - 3;
  if (i > imax) i = imax;
  lagrange3_weights(t - static_cast<double>(i), w);
  base = static_cast<std::size_t>(i - 1);
  return true;
}

struct axis_table {
  std::vector<std::size_t> base;
  std::vector<std::array<double, 4>> w;
  std::vector<unsigned char> inside;

  // node targets t_i = i - shift_in_cells
  axis_table(std::size_t n, double shift_cells) : base(n), w(n), inside(n) {
    for (std::size_t i = 0; i < n; ++i)
      inside[i] = axis_stencil(static_cast<double>(i) - shift_cells, n, base[i], w[i].data());
  }
};

}  // namespace detail

// Values of one x column on the momentum grid, with enough geometry to
// evaluate the degree-3 tensor Lagrange interpolant anywhere.
struct momentum_plane {
  const double* data = nullptr;
  std::size_t n1 = 0, n2 = 0;
  double origin1 = 0.0, origin2 = 0.0;
  double d1 = 0.0, d2 = 0.0;

  double at(std::size_t i1, std::size_t i2) const { return data[i1 * n2 + i2]; }
};

inline double sample_plane(const momentum_plane& plane, double q1, double q2) {
  double w1[4], w2[4];
  std::size_t b1, b2;
  if (!detail::axis_stencil((q1 - plane.origin1) / plane.d1, plane.n1, b1, w1)) return 0.0;
  if (!detail::axis_stencil((q2 - plane.origin2) / plane.d2, plane.n2, b2, w2)) return 0.0;
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double* row = plane.data + (b1 + a) * plane.n2 + b2;
    acc += w1[a] * (w2[0] * row[0] + w2[1] * row[1] + w2[2] * row[2] + w2[3] * row[3]);
  }
  return acc;
}

inline std::vector<double> sample_plane(const momentum_plane& plane,
                                        std::span<const std::array<double, 2>> targets) {
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i)
    out[i] = sample_plane(plane, targets[i][0], targets[i][1]);
  return out;
}

// out(p) = plane(p - (delta1, delta2)); an exact index shift when the
// displacement is a whole number of cells.
inline void shift_plane(const momentum_plane& plane, double delta1, double delta2, double* out) {
  const detail::axis_table t1(plane.n1, delta1 / plane.d1);
  const detail::axis_table t2(plane.n2, delta2 / plane.d2);
  for (std::size_t i1 = 0; i1 < plane.n1; ++i1) {
    double* orow = out + i1 * plane.n2;
    if (!t1.inside[i1]) {
      for (std::size_t i2 = 0; i2 < plane.n2; ++i2) orow[i2] = 0.0;
      continue;
    }
    const double* w1 = t1.w[i1].data();
    const std::size_t b1 = t1.base[i1];
    for (std::size_t i2 = 0; i2 < plane.n2; ++i2) {
      if (!t2.inside[i2]) {
        orow[i2] = 0.0;
        continue;
      }
      const double* w2 = t2.w[i2].data();
      const std::size_t off = b1 * plane.n2 + t2.base[i2];
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) {
        const double* row = plane.data + off + static_cast<std::size_t>(a) * plane.n2;
        acc += w1[a] * (w2[0] * row[0] + w2[1] * row[1] + w2[2] * row[2] + w2[3] * row[3]);
      }
      orow[i2] = acc;
    }
  }
}

}  // namespace apvm
