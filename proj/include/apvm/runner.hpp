#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "apvm/config.hpp"
#include "apvm/diagnostics.hpp"
#include "apvm/state.hpp"
#include "apvm/vlasov.hpp"

namespace apvm {

// Scenario parameters from the benchmark definitions; only grid sizes, c and
// the relativistic flag are configurable.
struct scenario_constants {
  double alpha, k, pmax;
  double t_ratio = 0.0, p_th = 0.0;  // weibel only
};

inline scenario_constants scenario_defaults(scenario_kind kind) {
  if (kind == scenario_kind::landau) return {0.01, 0.4, 5.0};
  return {1e-4, 1.25, 0.3, 12.0, 0.02};
}

inline sim_state make_scenario_state(const run_config& cfg) {
  const scenario_constants sc = scenario_defaults(cfg.scenario);
  phase_grid grid(cfg.nx, cfg.np1, cfg.np2, 2.0 * std::numbers::pi / sc.k, sc.pmax);
  if (cfg.scenario == scenario_kind::landau)
    return init_landau(grid, sc.alpha, sc.k, cfg.c, cfg.relativistic);
  return init_weibel(grid, sc.alpha, sc.k, sc.t_ratio, sc.p_th, cfg.c, cfg.relativistic);
}

namespace detail {

inline bool finite_state(const sim_state& s) {
  for (double v : s.f.values)
    if (!std::isfinite(v)) return false;
  for (const auto* f : {&s.fields.e1, &s.fields.e2, &s.fields.b})
    for (double v : *f)
      if (!std::isfinite(v)) return false;
  return true;
}

inline void advance(sim_state& s, vlasov_workspace& ws, const run_config& cfg) {
  if (cfg.order == split_order::strang)
    step_strang_inplace(s, cfg.dt, cfg.method, ws);
  else
    step_first_order_inplace(s, cfg.dt, cfg.method, ws);
}

inline void advance_limit(sim_state& s, vlasov_workspace& ws, const run_config& cfg) {
  if (cfg.order == split_order::strang)
    step_limit_strang_inplace(s, cfg.dt, ws);
  else
    step_limit_vlasov_ampere_inplace(s, cfg.dt, ws);
}

}  // namespace detail

struct run_result {
  time_series series;
  sim_state final_state;
};

// Full experiment: initialize, step to t_final, sample diagnostics on the
// requested cadence. Fail-fast on non-finite state.
inline run_result run(const run_config& cfg) {
  cfg.validate();
  run_result out;
  out.final_state = make_scenario_state(cfg);
  sim_state& s = out.final_state;
  vlasov_workspace ws(s.grid());
  const distribution f0 = s.f;
  const double energy0 = energies(s).total();
  out.series.rows.push_back(sample_diagnostics(s, f0, energy0));
  const long nsteps = std::lround(cfg.t_final / cfg.dt);
  for (long i = 1; i <= nsteps; ++i) {
    const double t_before = s.t;
    detail::advance(s, ws, cfg);
    if (!detail::finite_state(s)) throw run_aborted_error(t_before);
    if (i % static_cast<long>(cfg.sample_every) == 0 || i == nsteps)
      out.series.rows.push_back(sample_diagnostics(s, f0, energy0));
  }
  return out;
}

// The asymptotic reference: gamma = 1, E2 = B = 0, stepped by the limit
// scheme of matching splitting order. Independent of c by construction.
inline run_result run_limit(const run_config& cfg) {
  cfg.validate();
  run_result out;
  out.final_state = make_scenario_state(cfg);
  sim_state& s = out.final_state;
  s.fields.e2.assign(s.grid().nx, 0.0);
  s.fields.b.assign(s.grid().nx, 0.0);
  s.relativistic = false;
  vlasov_workspace ws(s.grid());
  const distribution f0 = s.f;
  const double energy0 = energies(s).total();
  out.series.rows.push_back(sample_diagnostics(s, f0, energy0));
  const long nsteps = std::lround(cfg.t_final / cfg.dt);
  for (long i = 1; i <= nsteps; ++i) {
    const double t_before = s.t;
    detail::advance_limit(s, ws, cfg);
    if (!detail::finite_state(s)) throw run_aborted_error(t_before);
    if (i % static_cast<long>(cfg.sample_every) == 0 || i == nsteps)
      out.series.rows.push_back(sample_diagnostics(s, f0, energy0));
  }
  return out;
}

struct csweep_row {
  double c = 0.0;
  limit_error_set err;
  limit_error_set rate;  // vs the previous c; meaningless on the first row
  bool has_rate = false;
};

// Errors of the full model against the asymptotic one as c grows, with
// ln(err_c / err_prev) / ln(c / c_prev) rates per the error-table convention.
inline std::vector<csweep_row> run_convergence_in_c(run_config cfg,
                                                    std::span<const double> c_list) {
  cfg.sample_every = 1u << 30;  // endpoints only
  run_config limit_cfg = cfg;
  limit_cfg.c = 1.0;
  const sim_state limit = run_limit(limit_cfg).final_state;
  std::vector<csweep_row> rows;
  for (double c : c_list) {
    run_config rc = cfg;
    rc.c = c;
    const sim_state full = run(rc).final_state;
    csweep_row row;
    row.c = c;
    row.err = limit_errors(full, limit);
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double logc = std::log(c / prev.c);
      auto rate = [&](double e, double ep) {
        return (e > 0.0 && ep > 0.0) ? std::log(e / ep) / logc : 0.0;
      };
      row.rate = {rate(row.err.e1, prev.err.e1), rate(row.err.e2, prev.err.e2),
                  rate(row.err.b, prev.err.b), rate(row.err.f, prev.err.f)};
      row.has_rate = true;
    }
    rows.push_back(row);
  }
  return rows;
}

inline void write_csweep_csv(std::ostream& os, const std::vector<csweep_row>& rows) {
  os << "c,e1_err,e1_rate,e2_err,e2_rate,b_err,b_rate,f_err,f_rate\n";
  char buf[320];
  for (const auto& r : rows) {
    if (r.has_rate)
      std::snprintf(buf, sizeof buf, "%.11e,%.11e,%.5f,%.11e,%.5f,%.11e,%.5f,%.11e,%.5f\n", r.c,
                    r.err.e1, r.rate.e1, r.err.e2, r.rate.e2, r.err.b, r.rate.b, r.err.f,
                    r.rate.f);
    else
      std::snprintf(buf, sizeof buf, "%.11e,%.11e,,%.11e,,%.11e,,%.11e,\n", r.c, r.err.e1,
                    r.err.e2, r.err.b, r.err.f);
    os << buf;
  }
}

struct order_row {
  double dt = 0.0;
  double err = 0.0;
};

struct order_result {
  std::vector<order_row> rows;
  double slope = 0.0;
};

// Richardson self-convergence: errors against the finest-dt run of the list
// in the max norm of f (so repeating the finest dt yields a zero row), with
// the least-squares slope of ln err vs ln dt over the coarser entries.
inline order_result run_order_study(run_config cfg, std::span<const double> dt_list) {
  cfg.sample_every = 1u << 30;
  double dt_ref = dt_list.front();
  for (double dt : dt_list) dt_ref = std::min(dt_ref, dt);
  run_config ref_cfg = cfg;
  ref_cfg.dt = dt_ref;
  const sim_state ref = run(ref_cfg).final_state;
  order_result out;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (double dt : dt_list) {
    run_config rc = cfg;
    rc.dt = dt;
    const sim_state s = run(rc).final_state;
    double err = 0.0;
    for (std::size_t i = 0; i < s.f.values.size(); ++i)
      err = std::max(err, std::abs(s.f.values[i] - ref.f.values[i]));
    out.rows.push_back({dt, err});
    if (dt > 1.5 * dt_ref && err > 0.0) {
      const double lx = std::log(dt), ly = std::log(err);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
  }
  const double nd = static_cast<double>(n);
  out.slope = n >= 2 ? (nd * sxy - sx * sy) / (nd * sxx - sx * sx) : 0.0;
  return out;
}

inline void write_order_csv(std::ostream& os, const order_result& res) {
  os << "dt,self_error\n";
  char buf[96];
  for (const auto& r : res.rows) {
    std::snprintf(buf, sizeof buf, "%.11e,%.11e\n", r.dt, r.err);
    os << buf;
  }
}

}  // namespace apvm
