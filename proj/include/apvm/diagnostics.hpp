#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "apvm/errors.hpp"
#include "apvm/fourier.hpp"
#include "apvm/state.hpp"

namespace apvm {

struct energy_triple {
  double h_e = 0.0, h_b = 0.0, h_f = 0.0;
  double total() const { return h_e + h_b + h_f; }
};

// H_E = 1/2 int E1^2+E2^2 dx, H_B = c^2/2 int B^2 dx,
// H_f = c^2 int (gamma - 1) f  (or int |p|^2/2 f when gamma = 1).
inline energy_triple energies(const sim_state& s) {
  const phase_grid& g = s.grid();
  energy_triple out;
  for (std::size_t m = 0; m < g.nx; ++m) {
    out.h_e += s.fields.e1[m] * s.fields.e1[m] + s.fields.e2[m] * s.fields.e2[m];
    out.h_b += s.fields.b[m] * s.fields.b[m];
  }
  out.h_e *= 0.5 * g.dx();
  out.h_b *= 0.5 * s.c * s.c * g.dx();
  double hf = 0.0;
  for (std::size_t m = 0; m < g.nx; ++m) {
    const double* plane = s.f.plane(m);
    for (std::size_t i1 = 0; i1 < g.np1; ++i1) {
      const double q1 = g.p1(i1);
      for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
        const double q2 = g.p2(i2);
        const double p2 = q1 * q1 + q2 * q2;
        if (s.relativistic) {
          // c^2 (gamma - 1) = |p|^2 / (gamma + 1), avoiding cancellation
          const double gamma = std::sqrt(1.0 + p2 / (s.c * s.c));
          hf += p2 / (gamma + 1.0) * plane[i1 * g.np2 + i2];
        } else {
          hf += 0.5 * p2 * plane[i1 * g.np2 + i2];
        }
      }
    }
  }
  out.h_f = hf * g.dx() * g.dp1() * g.dp2();
  return out;
}

inline double l2_norm(const distribution& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid.dx() * f.grid.dp1() * f.grid.dp2());
}

inline double l2_distance(const distribution& a, const distribution& b) {
  if (!(a.grid == b.grid)) throw config_error("l2_distance: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s * a.grid.dx() * a.grid.dp1() * a.grid.dp2());
}

// max over modes k != 0 of |ik E1_hat(k) - rho_hat(k)|, rho = int f dp - 1
inline double gauss_residual(const sim_state& s) {
  const phase_grid& g = s.grid();
  std::vector<double> rho(g.nx);
  for (std::size_t m = 0; m < g.nx; ++m) rho[m] = s.f.column_density(m) - 1.0;
  const spectral_line rho_hat = forward_x(rho, g.length);
  const spectral_line e1_hat = forward_x(s.fields.e1, g.length);
  double worst = 0.0;
  for (std::size_t m = 1; m < g.nx; ++m) {
    const cdouble ik(0.0, rho_hat.wavenumber_at(m));
    worst = std::max(worst, std::abs(ik * e1_hat.coeffs[m] - rho_hat.coeffs[m]));
  }
  return worst;
}

// Least-squares slope of ln y against t restricted to [t0, t1].
inline double fit_exponential_rate(std::span<const double> t, std::span<const double> y,
                                   double t0, double t1) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(y[i] > 0.0)) throw domain_error("fit_exponential_rate: y must be positive");
    const double ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
    ++n;
  }
  if (n < 10) throw domain_error("fit_exponential_rate: need at least 10 samples in window");
  const double nd = static_cast<double>(n);
  return (nd * sty - st * sy) / (nd * stt - st * st);
}

// Rate of the oscillation envelope: keep local maxima of y, then fit.
// Landau-damped amplitudes pass through near-zeros where ln y is useless.
inline double fit_peak_decay(std::span<const double> t, std::span<const double> y, double t0,
                             double t1) {
  std::vector<double> tp, yp;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
      tp.push_back(t[i]);
      yp.push_back(y[i]);
    }
  }
  return fit_exponential_rate(tp, yp, t0, t1);
}

struct growth_fit {
  double rate = 0.0;
  double t_begin = 0.0, t_end = 0.0;
};

// Fit of the linear instability phase: the longest run of consecutive
// segments whose local slopes of ln y stay within 5% of their median.
inline growth_fit fit_growth_window(std::span<const double> t, std::span<const double> y,
                                    double segment_width = 8.0) {
  if (t.size() < 20) throw domain_error("fit_growth_window: series too short");
  const double t_lo = t.front(), t_hi = t.back();
  const std::size_t nseg = static_cast<std::size_t>((t_hi - t_lo) / segment_width);
  if (nseg < 3) throw domain_error("fit_growth_window: series too short");
  std::vector<double> slope(nseg);
  std::vector<unsigned char> valid(nseg, 0);
  for (std::size_t s = 0; s < nseg; ++s) {
    try {
      slope[s] =
          fit_exponential_rate(t, y, t_lo + s * segment_width, t_lo + (s + 1) * segment_width);
      valid[s] = 1;
    } catch (const domain_error&) {
      // nonpositive samples or too few points; segment unusable
    }
  }
  std::size_t best_a = 0, best_b = 0;
  for (std::size_t a = 0; a < nseg; ++a) {
    if (!valid[a]) continue;
    for (std::size_t b = a; b < nseg && valid[b]; ++b) {
      std::vector<double> run(slope.begin() + a, slope.begin() + b + 1);
      std::nth_element(run.begin(), run.begin() + run.size() / 2, run.end());
      const double med = run[run.size() / 2];
      bool ok = med != 0.0;
      for (std::size_t s = a; s <= b && ok; ++s)
        ok = std::abs(slope[s] - med) <= 0.05 * std::abs(med);
      if (ok && b - a > best_b - best_a) {
        best_a = a;
        best_b = b;
      }
    }
  }
  growth_fit out;
  out.t_begin = t_lo + best_a * segment_width;
  out.t_end = t_lo + (best_b + 1) * segment_width;
  out.rate = fit_exponential_rate(t, y, out.t_begin, out.t_end);
  return out;
}

struct limit_error_set {
  double e1 = 0.0, e2 = 0.0, b = 0.0, f = 0.0;
};

// L-infinity distances to the asymptotic model (whose E2 and B vanish).
inline limit_error_set limit_errors(const sim_state& full, const sim_state& limit) {
  if (!(full.grid() == limit.grid())) throw config_error("limit_errors: grid mismatch");
  limit_error_set out;
  for (std::size_t m = 0; m < full.grid().nx; ++m) {
    out.e1 = std::max(out.e1, std::abs(full.fields.e1[m] - limit.fields.e1[m]));
    out.e2 = std::max(out.e2, std::abs(full.fields.e2[m]));
    out.b = std::max(out.b, std::abs(full.fields.b[m]));
  }
  for (std::size_t i = 0; i < full.f.values.size(); ++i)
    out.f = std::max(out.f, std::abs(full.f.values[i] - limit.f.values[i]));
  return out;
}

struct series_row {
  double t, h_e, h_b, h_f, energy_error, l2_error, amp_e1_k0, amp_e2_k0, amp_b_k0,
      gauss_residual;
};

struct time_series {
  std::vector<series_row> rows;

  std::vector<double> column_t() const { return column(&series_row::t); }
  std::vector<double> column(double series_row::* field) const {
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i].*field;
    return v;
  }

  void write_csv(std::ostream& os) const {
    os << "t,H_E,H_B,H_f,energy_error,l2_error,abs_E1_k0,abs_E2_k0,abs_B_k0,gauss_residual\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf,
                    "%.11e,%.11e,%.11e,%.11e,%.11e,%.11e,%.11e,%.11e,%.11e,%.11e\n", r.t, r.h_e,
                    r.h_b, r.h_f, r.energy_error, r.l2_error, r.amp_e1_k0, r.amp_e2_k0,
                    r.amp_b_k0, r.gauss_residual);
      os << buf;
    }
  }
};

// One sampled diagnostics row. energy0/l2 reference values come from t = 0.
inline series_row sample_diagnostics(const sim_state& s, const distribution& f0, double energy0) {
  const phase_grid& g = s.grid();
  const auto en = energies(s);
  const spectral_line e1_hat = forward_x(s.fields.e1, g.length);
  const spectral_line e2_hat = forward_x(s.fields.e2, g.length);
  const spectral_line b_hat = forward_x(s.fields.b, g.length);
  series_row r{};
  r.t = s.t;
  r.h_e = en.h_e;
  r.h_b = en.h_b;
  r.h_f = en.h_f;
  r.energy_error = std::abs(en.total() - energy0);
  const double n0 = l2_norm(f0);
  r.l2_error = n0 > 0.0 ? l2_distance(s.f, f0) / n0 : 0.0;
  r.amp_e1_k0 = std::abs(e1_hat.coeff(1));
  r.amp_e2_k0 = std::abs(e2_hat.coeff(1));
  r.amp_b_k0 = std::abs(b_hat.coeff(1));
  r.gauss_residual = gauss_residual(s);
  return r;
}

}  // namespace apvm
