#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "apvm/fourier.hpp"
#include "apvm/interp.hpp"
#include "apvm/maxwell.hpp"
#include "apvm/parallel.hpp"
#include "apvm/state.hpp"

namespace apvm {

// State in the x-spectral representation: f_hat is row-major with one row per
// Fourier mode (FFT order) and the momentum plane contiguous within a row.
// Invariants: all four arrays Hermitian in the mode index, field modes 0 and
// Nyquist pinned to zero (the zero-average constraint and the J-bar shift).
struct spectral_state {
  phase_grid grid;
  std::vector<cdouble> f_hat;
  std::vector<cdouble> e1_hat, e2_hat, b_hat;
};

namespace detail {

constexpr std::size_t transport_chunk = 2048;

// Per-momentum-node tables for the exact transport flow of one step size.
struct transport_tables {
  double dt = 0.0, c = 0.0;
  bool relativistic = false;
  bool valid = false;
  std::vector<double> inv_gamma;      // 1/gamma
  std::vector<cdouble> unit;          // exp(-i kappa p1 dt / gamma)
  std::vector<double> theta1;         // kappa p1 dt / gamma
  std::vector<double> p2_over_gamma;  // p2 / gamma
  std::vector<double> p2_over_p1;     // 0 at the p1 = 0 node (series branch)
};

inline void build_transport_tables(const phase_grid& g, double dt, double c, bool relativistic,
                                   transport_tables& tb) {
  if (tb.valid && tb.dt == dt && tb.c == c && tb.relativistic == relativistic) return;
  const std::size_t np = g.plane_size();
  tb.inv_gamma.resize(np);
  tb.unit.resize(np);
  tb.theta1.resize(np);
  tb.p2_over_gamma.resize(np);
  tb.p2_over_p1.resize(np);
  const double kappa = wavenumber(1, g.length);
  parallel_for((g.np1 + 7) / 8, [&](std::size_t task) {
    const std::size_t lo = task * 8, hi = std::min(g.np1, lo + 8);
    for (std::size_t i1 = lo; i1 < hi; ++i1) {
      const double q1 = g.p1(i1);
      for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
        const double q2 = g.p2(i2);
        const std::size_t idx = i1 * g.np2 + i2;
        const double inv_g = 1.0 / lorentz_gamma(q1, q2, c, relativistic);
        tb.inv_gamma[idx] = inv_g;
        const double th = kappa * q1 * dt * inv_g;
        tb.theta1[idx] = th;
        tb.unit[idx] = {std::cos(th), -std::sin(th)};
        tb.p2_over_gamma[idx] = q2 * inv_g;
        tb.p2_over_p1[idx] = q1 != 0.0 ? q2 / q1 : 0.0;
      }
    }
  });
  tb.dt = dt;
  tb.c = c;
  tb.relativistic = relativistic;
  tb.valid = true;
}

// Exact flow of the transport + Ampere sub-step in Fourier space:
//   f_hat <- f_hat exp(-i k p1 dt / gamma)
//   E1_hat(k) += (1/(ik)) int (f_hat* - f_hat^n) dp            (k != 0)
//   E2_hat(k) += (1/(ik)) int (p2/p1) f_hat^n (e^{-i phi}-1) dp (k != 0)
// The E2 kernel switches to its series for |phi| < 1e-4, which also covers
// the p1 = 0 node. Mode 0 is untouched; the Nyquist row is zeroed.
inline void transport_ampere_inplace(spectral_state& s, double dt, double c, bool relativistic,
                                     transport_tables& tb, bool update_e2) {
  const phase_grid& g = s.grid;
  build_transport_tables(g, dt, c, relativistic, tb);
  const std::size_t np = g.plane_size();
  const std::size_t half = g.nx / 2;
  const std::size_t nchunks = (np + transport_chunk - 1) / transport_chunk;
  const double series_cut = 1e-4;

  // per (chunk, row) partial sums: s1+, s1-, direct2+, direct2-, series2+, series2-
  std::vector<cdouble> slots(nchunks * half * 6, cdouble(0.0, 0.0));

  parallel_for(nchunks, [&](std::size_t chunk) {
    const std::size_t b = chunk * transport_chunk;
    const std::size_t e = std::min(np, b + transport_chunk);
    const std::size_t w = e - b;
    std::vector<cdouble> cur(tb.unit.begin() + b, tb.unit.begin() + e);
    auto* curd = reinterpret_cast<double*>(cur.data());
    const auto* unitd = reinterpret_cast<const double*>(tb.unit.data()) + 2 * b;
    const double* th1 = tb.theta1.data() + b;
    const double* p2g = tb.p2_over_gamma.data() + b;
    const double* r21 = tb.p2_over_p1.data() + b;
    for (std::size_t j = 1; j < half; ++j) {
      auto* fp = reinterpret_cast<double*>(s.f_hat.data() + j * np + b);
      auto* fm = reinterpret_cast<double*>(s.f_hat.data() + (g.nx - j) * np + b);
      double s1p_re = 0, s1p_im = 0, s1m_re = 0, s1m_im = 0;
      double a2p_re = 0, a2p_im = 0, a2m_re = 0, a2m_im = 0;
      double q2p_re = 0, q2p_im = 0, q2m_re = 0, q2m_im = 0;
      const double jd = static_cast<double>(j);
      for (std::size_t i = 0; i < w; ++i) {
        const double cr = curd[2 * i], ci = curd[2 * i + 1];
        const double fr = fp[2 * i], fi = fp[2 * i + 1];
        const double gr = fm[2 * i], gi = fm[2 * i + 1];
        // advance both rows by the exact phase
        fp[2 * i] = fr * cr - fi * ci;
        fp[2 * i + 1] = fr * ci + fi * cr;
        fm[2 * i] = gr * cr + gi * ci;  // conjugate phase
        fm[2 * i + 1] = -gr * ci + gi * cr;
        // charge kernels: f^n (e^{-i phi} - 1)
        const double dr = cr - 1.0, di = ci;
        const double e1p_re = fr * dr - fi * di, e1p_im = fr * di + fi * dr;
        const double e1m_re = gr * dr + gi * di, e1m_im = -gr * di + gi * dr;
        s1p_re += e1p_re;
        s1p_im += e1p_im;
        s1m_re += e1m_re;
        s1m_im += e1m_im;
        if (update_e2) {
          const double phi = jd * th1[i];
          if (std::abs(phi) < series_cut) {
            // (p2/p1)(e^{-i phi}-1)/(ik) -> -dt (p2/g)(1 - i phi/2 - phi^2/6 + i phi^3/24)
            const double pr = 1.0 - phi * phi / 6.0;
            const double pim = -0.5 * phi + phi * phi * phi / 24.0;
            const double wgt = p2g[i];
            q2p_re += wgt * (fr * pr - fi * pim);
            q2p_im += wgt * (fr * pim + fi * pr);
            q2m_re += wgt * (gr * pr + gi * pim);
            q2m_im += wgt * (-gr * pim + gi * pr);
          } else {
            const double wgt = r21[i];
            a2p_re += wgt * e1p_re;
            a2p_im += wgt * e1p_im;
            a2m_re += wgt * e1m_re;
            a2m_im += wgt * e1m_im;
          }
        }
        // cur <- cur * unit (next mode's phase)
        const double ur = unitd[2 * i], ui = unitd[2 * i + 1];
        curd[2 * i] = cr * ur - ci * ui;
        curd[2 * i + 1] = cr * ui + ci * ur;
      }
      cdouble* slot = slots.data() + (chunk * half + j) * 6;
      slot[0] = {s1p_re, s1p_im};
      slot[1] = {s1m_re, s1m_im};
      slot[2] = {a2p_re, a2p_im};
      slot[3] = {a2m_re, a2m_im};
      slot[4] = {q2p_re, q2p_im};
      slot[5] = {q2m_re, q2m_im};
    }
  });

  const double dp2 = g.dp1() * g.dp2();
  const double kappa = wavenumber(1, g.length);
  for (std::size_t j = 1; j < half; ++j) {
    cdouble s1p(0.0), s1m(0.0), a2p(0.0), a2m(0.0), q2p(0.0), q2m(0.0);
    for (std::size_t chunk = 0; chunk < nchunks; ++chunk) {
      const cdouble* slot = slots.data() + (chunk * half + j) * 6;
      s1p += slot[0];
      s1m += slot[1];
      a2p += slot[2];
      a2m += slot[3];
      q2p += slot[4];
      q2m += slot[5];
    }
    const double kj = kappa * static_cast<double>(j);
    const cdouble inv_ik(0.0, -1.0 / kj);
    s.e1_hat[j] += inv_ik * dp2 * s1p;
    s.e1_hat[g.nx - j] += std::conj(inv_ik) * dp2 * s1m;
    if (update_e2) {
      s.e2_hat[j] += inv_ik * dp2 * a2p - dt * dp2 * q2p;
      s.e2_hat[g.nx - j] += std::conj(inv_ik) * dp2 * a2m - dt * dp2 * q2m;
    }
  }
  // Nyquist carries no conjugate partner; drop it to keep f real
  for (std::size_t i = 0; i < np; ++i) s.f_hat[half * np + i] = 0.0;
  for (auto* v : {&s.e1_hat, &s.e2_hat, &s.b_hat}) {
    (*v)[0] = 0.0;
    (*v)[half] = 0.0;
  }
}

inline void maxwell_modes_inplace(spectral_state& s, double dt, double c, maxwell_method method) {
  const std::size_t half = s.grid.nx / 2;
  for (std::size_t j = 1; j < half; ++j) {
    const double kj = wavenumber(static_cast<long>(j), s.grid.length);
    mode_pair yp{s.e2_hat[j], s.b_hat[j]};
    mode_pair ym{s.e2_hat[s.grid.nx - j], s.b_hat[s.grid.nx - j]};
    yp = advance_mode(method, yp, kj, c, dt);
    ym = advance_mode(method, ym, -kj, c, dt);
    s.e2_hat[j] = yp.e2;
    s.b_hat[j] = yp.b;
    s.e2_hat[s.grid.nx - j] = ym.e2;
    s.b_hat[s.grid.nx - j] = ym.b;
  }
  s.e2_hat[0] = s.b_hat[0] = 0.0;
  s.e2_hat[half] = s.b_hat[half] = 0.0;
}

}  // namespace detail

// Workspace shared by the stepping routines: FFT plan, phase tables and the
// spectral scratch state. Reusable across steps of one run.
class vlasov_workspace {
 public:
  explicit vlasov_workspace(const phase_grid& g) : grid_(g), fft_(g.nx) {
    sp_.grid = g;
    sp_.f_hat.resize(g.size());
    sp_.e1_hat.resize(g.nx);
    sp_.e2_hat.resize(g.nx);
    sp_.b_hat.resize(g.nx);
    scratch_.resize(g.size());
  }

  const phase_grid& grid() const { return grid_; }

  // f_hat follows the coeff(0) = mean convention of forward_x, so the Ampere
  // couplings to the field modes carry no stray factors of nx.
  void to_spectral(const sim_state& s, spectral_state& out) {
    const std::size_t np = grid_.plane_size();
    const double inv_nx = 1.0 / static_cast<double>(grid_.nx);
    parallel_for(grid_.nx, [&](std::size_t m) {
      const double* src = s.f.values.data() + m * np;
      cdouble* dst = out.f_hat.data() + m * np;
      for (std::size_t i = 0; i < np; ++i) dst[i] = src[i] * inv_nx;
    });
    forward_rows_parallel(out.f_hat.data());
    out.e1_hat = forward_x(s.fields.e1, grid_.length).coeffs;
    out.e2_hat = forward_x(s.fields.e2, grid_.length).coeffs;
    out.b_hat = forward_x(s.fields.b, grid_.length).coeffs;
  }

  void to_real(spectral_state& sp, sim_state& s) {
    inverse_rows_parallel(sp.f_hat.data());
    const std::size_t np = grid_.plane_size();
    parallel_for(grid_.nx, [&](std::size_t m) {
      const cdouble* src = sp.f_hat.data() + m * np;
      double* dst = s.f.values.data() + m * np;
      for (std::size_t i = 0; i < np; ++i) dst[i] = src[i].real();
    });
    s.fields.e1 = inverse_x({sp.e1_hat, grid_.length});
    s.fields.e2 = inverse_x({sp.e2_hat, grid_.length});
    s.fields.b = inverse_x({sp.b_hat, grid_.length});
    // inverse_rows destroys the spectral content; forward again only on demand
  }

  const std::vector<double>& inv_gamma(double c, bool relativistic) {
    if (!ig_valid_ || ig_c_ != c || ig_rel_ != relativistic) {
      ig_.resize(grid_.plane_size());
      for (std::size_t i1 = 0; i1 < grid_.np1; ++i1)
        for (std::size_t i2 = 0; i2 < grid_.np2; ++i2)
          ig_[i1 * grid_.np2 + i2] =
              1.0 / lorentz_gamma(grid_.p1(i1), grid_.p2(i2), c, relativistic);
      ig_c_ = c;
      ig_rel_ = relativistic;
      ig_valid_ = true;
    }
    return ig_;
  }

  spectral_state& spectral() { return sp_; }
  detail::transport_tables& tables() { return tables_; }
  std::vector<double>& scratch() { return scratch_; }

 private:
  void forward_rows_parallel(cdouble* data) { rows_parallel(data, false); }
  void inverse_rows_parallel(cdouble* data) { rows_parallel(data, true); }

  void rows_parallel(cdouble* data, bool inverse) {
    const std::size_t np = grid_.plane_size();
    const std::size_t block = 8192;
    const std::size_t nchunks = (np + block - 1) / block;
    // each task runs the full butterfly network on its own column slice
    parallel_for(nchunks, [&](std::size_t chunk) {
      const std::size_t b = chunk * block;
      const std::size_t w = std::min(np, b + block) - b;
      if (inverse)
        fft_.inverse_rows(data + b, w, np);
      else
        fft_.forward_rows(data + b, w, np);
    });
  }

  phase_grid grid_;
  batch_fft fft_;
  spectral_state sp_;
  detail::transport_tables tables_;
  std::vector<double> scratch_;
  std::vector<double> ig_;
  double ig_c_ = 0.0;
  bool ig_rel_ = false;
  bool ig_valid_ = false;
};

// ---- splitting sub-steps -------------------------------------------------

inline spectral_state step_transport_ampere(spectral_state s, double dt, double c,
                                            bool relativistic) {
  detail::transport_tables tb;
  detail::transport_ampere_inplace(s, dt, c, relativistic, tb, true);
  return s;
}

// f(x, p) <- f(x, p - dt E(x)): a momentum shift per x column.
inline distribution step_electric_push(const distribution& f, const field_state& fields,
                                       double dt) {
  const phase_grid& g = f.grid;
  distribution out(g);
  parallel_for(g.nx, [&](std::size_t m) {
    momentum_plane plane{f.plane(m), g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
    shift_plane(plane, dt * fields.e1[m], dt * fields.e2[m], out.plane(m));
  });
  out.grid = g;
  return out;
}

namespace detail {

// Backward foot point of dP/dt = (B/gamma) J P with J = [[0,1],[-1,0]]:
// P(t^n) = R p with R = [[cos phi, -sin phi], [sin phi, cos phi]],
// phi = B dt / gamma(p); |P| is invariant so gamma is taken at the node.
inline void rotate_column(const phase_grid& g, const double* in, double* out, double b_dt,
                          const double* inv_gamma, bool relativistic) {
  momentum_plane plane{in, g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
  double cs = 1.0, sn = 0.0;
  if (!relativistic) {
    cs = std::cos(b_dt);
    sn = std::sin(b_dt);
  }
  for (std::size_t i1 = 0; i1 < g.np1; ++i1) {
    const double q1 = g.p1(i1);
    for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
      const double q2 = g.p2(i2);
      if (relativistic) {
        const double phi = b_dt * inv_gamma[i1 * g.np2 + i2];
        cs = std::cos(phi);
        sn = std::sin(phi);
      }
      out[i1 * g.np2 + i2] = sample_plane(plane, q1 * cs - q2 * sn, q1 * sn + q2 * cs);
    }
  }
}

}  // namespace detail

inline distribution step_magnetic_rotation(const distribution& f, const field_state& fields,
                                           double dt, double c, bool relativistic) {
  const phase_grid& g = f.grid;
  distribution out(g);
  std::vector<double> ig;
  if (relativistic) {
    ig.resize(g.plane_size());
    for (std::size_t i1 = 0; i1 < g.np1; ++i1)
      for (std::size_t i2 = 0; i2 < g.np2; ++i2)
        ig[i1 * g.np2 + i2] = 1.0 / lorentz_gamma(g.p1(i1), g.p2(i2), c, relativistic);
  }
  parallel_for(g.nx, [&](std::size_t m) {
    detail::rotate_column(g, f.plane(m), out.plane(m), fields.b[m] * dt, ig.data(), relativistic);
  });
  return out;
}

// ---- full steps ------------------------------------------------------------

namespace detail {

inline void he_hb_he(sim_state& s, vlasov_workspace& ws, double dt_he1, double dt_hb,
                     double dt_he2) {
  const phase_grid& g = s.grid();
  const auto& ig = ws.inv_gamma(s.c, s.relativistic);
  std::vector<double>& tmp = ws.scratch();
  parallel_for(g.nx, [&](std::size_t m) {
    momentum_plane plane{s.f.plane(m), g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
    double* mid = tmp.data() + m * g.plane_size();
    shift_plane(plane, dt_he1 * s.fields.e1[m], dt_he1 * s.fields.e2[m], mid);
    if (dt_hb != 0.0) {
      std::vector<double> rot(g.plane_size());
      rotate_column(g, mid, rot.data(), s.fields.b[m] * dt_hb, ig.data(), s.relativistic);
      if (dt_he2 != 0.0) {
        momentum_plane pr{rot.data(), g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
        shift_plane(pr, dt_he2 * s.fields.e1[m], dt_he2 * s.fields.e2[m], mid);
      } else {
        std::copy(rot.begin(), rot.end(), mid);
      }
    }
  });
  s.f.values.swap(tmp);
}

}  // namespace detail

// TODO: fuse the forward row transform with the transport phase multiply;
// it would save one full read+write pass over f_hat per sub-step.

// First-order scheme: Hf(dt), implicit Maxwell(dt), HE(dt) with E^{n+1},
// HB(dt) with B^{n+1}.
inline void step_first_order_inplace(sim_state& s, double dt, maxwell_method method,
                                     vlasov_workspace& ws) {
  if (dt == 0.0) return;
  spectral_state& sp = ws.spectral();
  ws.to_spectral(s, sp);
  detail::transport_ampere_inplace(sp, dt, s.c, s.relativistic, ws.tables(), true);
  detail::maxwell_modes_inplace(sp, dt, s.c, method);
  ws.to_real(sp, s);
  detail::he_hb_he(s, ws, dt, dt, 0.0);
  s.t += dt;
}

// Strang palindrome: Hf(dt/2), Maxwell(dt/2), HE(dt/2), HB(dt), HE(dt/2),
// Maxwell(dt/2), Hf(dt/2).
inline void step_strang_inplace(sim_state& s, double dt, maxwell_method method,
                                vlasov_workspace& ws) {
  if (dt == 0.0) return;
  const double h = 0.5 * dt;
  spectral_state& sp = ws.spectral();
  ws.to_spectral(s, sp);
  detail::transport_ampere_inplace(sp, h, s.c, s.relativistic, ws.tables(), true);
  detail::maxwell_modes_inplace(sp, h, s.c, method);
  ws.to_real(sp, s);
  detail::he_hb_he(s, ws, h, dt, h);
  ws.to_spectral(s, sp);
  detail::maxwell_modes_inplace(sp, h, s.c, method);
  detail::transport_ampere_inplace(sp, h, s.c, s.relativistic, ws.tables(), true);
  ws.to_real(sp, s);
  s.t += dt;
}

// Two-term Vlasov--Ampere splitting: the c -> infinity limit of the first
// order scheme (gamma = 1, E2 = B = 0).
inline void step_limit_vlasov_ampere_inplace(sim_state& s, double dt, vlasov_workspace& ws) {
  if (dt == 0.0) return;
  const phase_grid& g = s.grid();
  spectral_state& sp = ws.spectral();
  ws.to_spectral(s, sp);
  detail::transport_ampere_inplace(sp, dt, s.c, false, ws.tables(), false);
  ws.to_real(sp, s);
  std::vector<double>& tmp = ws.scratch();
  parallel_for(g.nx, [&](std::size_t m) {
    momentum_plane plane{s.f.plane(m), g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
    shift_plane(plane, dt * s.fields.e1[m], 0.0, tmp.data() + m * g.plane_size());
  });
  s.f.values.swap(tmp);
  s.t += dt;
}

// Strang composition of the limit scheme; the c -> infinity limit of the
// Strang scheme with an L-stable field integrator (two half pushes, exactly
// mirroring the HE-HB-HE core with HB degenerated to the identity).
inline void step_limit_strang_inplace(sim_state& s, double dt, vlasov_workspace& ws) {
  if (dt == 0.0) return;
  const double h = 0.5 * dt;
  const phase_grid& g = s.grid();
  spectral_state& sp = ws.spectral();
  ws.to_spectral(s, sp);
  detail::transport_ampere_inplace(sp, h, s.c, false, ws.tables(), false);
  ws.to_real(sp, s);
  std::vector<double>& tmp = ws.scratch();
  for (int push = 0; push < 2; ++push) {
    parallel_for(g.nx, [&](std::size_t m) {
      momentum_plane plane{s.f.plane(m), g.np1, g.np2, -g.pmax, -g.pmax, g.dp1(), g.dp2()};
      shift_plane(plane, h * s.fields.e1[m], 0.0, tmp.data() + m * g.plane_size());
    });
    s.f.values.swap(tmp);
  }
  ws.to_spectral(s, sp);
  detail::transport_ampere_inplace(sp, h, s.c, false, ws.tables(), false);
  ws.to_real(sp, s);
  s.t += dt;
}

inline sim_state step_first_order(sim_state s, double dt, maxwell_method method) {
  vlasov_workspace ws(s.grid());
  step_first_order_inplace(s, dt, method, ws);
  return s;
}

inline sim_state step_strang(sim_state s, double dt, maxwell_method method) {
  vlasov_workspace ws(s.grid());
  step_strang_inplace(s, dt, method, ws);
  return s;
}

inline sim_state step_limit_vlasov_ampere(sim_state s, double dt) {
  vlasov_workspace ws(s.grid());
  step_limit_vlasov_ampere_inplace(s, dt, ws);
  return s;
}

}  // namespace apvm
