// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier full-physics runs sit alongside fast property checks;
// everything is pinned to the benchmark tolerances.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "apvm/cli.hpp"
#include "apvm/diagnostics.hpp"
#include "apvm/dispersion.hpp"
#include "apvm/interp.hpp"
#include "apvm/maxwell.hpp"
#include "apvm/runner.hpp"
#include "apvm/state.hpp"
#include "apvm/vlasov.hpp"

using namespace apvm;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

struct outcome {
  bool pass = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// electric-field amplitude of the fundamental mode, |E_hat(k0)| over both
// components; with an L-stable integrator E2 dies quickly and this is the
// E1 mode amplitude, with exact/CN integration the undamped E2 wave keeps it
// from following the Landau decay
std::vector<double> e_mode_amplitude(const time_series& ts) {
  std::vector<double> amp(ts.rows.size());
  for (std::size_t i = 0; i < ts.rows.size(); ++i)
    amp[i] = std::hypot(ts.rows[i].amp_e1_k0, ts.rows[i].amp_e2_k0);
  return amp;
}

run_config landau_benchmark(maxwell_method method) {
  run_config cfg;
  cfg.scenario = scenario_kind::landau;
  cfg.relativistic = true;
  cfg.c = 100.0;
  cfg.dt = 0.1;
  cfg.t_final = 45.0;
  cfg.nx = 64;
  cfg.np1 = cfg.np2 = 256;
  cfg.method = method;
  cfg.order = split_order::strang;
  return cfg;
}

double landau_fit(maxwell_method method) {
  const run_result res = run(landau_benchmark(method));
  const auto t = res.series.column_t();
  const auto amp = e_mode_amplitude(res.series);
  try {
    return fit_peak_decay(t, amp, 5.0, 40.0);
  } catch (const domain_error&) {
    // a plateaued amplitude has no peak train to fit; the raw fit tells the
    // same story (no Landau decay)
    return fit_exponential_rate(t, amp, 5.0, 40.0);
  }
}

// --- criteria ---------------------------------------------------------------

outcome criterion1_landau_damping() {
  const double rate = landau_fit(maxwell_method::radau_iia3);
  const bool pass = std::abs(rate - (-0.0661)) <= 0.10 * 0.0661;
  return {pass, fmt("fitted rate %.5f vs -0.0661 (tol 10%%)", rate)};
}

run_config weibel_benchmark(double c) {
  run_config cfg;
  cfg.scenario = scenario_kind::weibel;
  cfg.relativistic = false;
  cfg.c = c;
  cfg.dt = 0.02;
  cfg.nx = 32;
  cfg.np1 = cfg.np2 = 128;
  cfg.method = maxwell_method::radau_iia3;
  cfg.order = split_order::strang;
  cfg.sample_every = 5;
  return cfg;
}

double weibel_dispersion_rate(double c) {
  dispersion_params p;  // Weibel parameters
  p.c = c;
  const std::vector<double> cs{c};
  const auto rows = growth_rate_scan(p, cs, relation_kind::continuous);
  if (!rows[0].unstable) return 0.0;
  return rows[0].omega.imag();
}

outcome criterion2_weibel_growth() {
  const double oracle = weibel_dispersion_rate(1.0);
  run_config cfg = weibel_benchmark(1.0);
  cfg.t_final = 150.0;
  const run_result res = run(cfg);
  const auto t = res.series.column_t();
  const auto amp = res.series.column(&series_row::amp_b_k0);
  const growth_fit fit = fit_growth_window(t, amp, 8.0);
  const bool pass = oracle > 0.0 && std::abs(fit.rate - oracle) <= 0.10 * oracle;
  return {pass, fmt("fitted growth %.5f on [%.0f,%.0f] vs dispersion root %.5f (tol 10%%)",
                    fit.rate, fit.t_begin, fit.t_end, oracle)};
}

outcome criterion3_shutoff() {
  run_config cfg = weibel_benchmark(5.0);
  cfg.t_final = 100.0;
  const run_result res = run(cfg);
  const double b0 = res.series.rows.front().amp_b_k0;
  const double bT = res.series.rows.back().amp_b_k0;
  dispersion_params p;
  const std::vector<double> cs{3.5, 4.0, 4.5, 5.0};
  const auto rows = growth_rate_scan(p, cs, relation_kind::continuous);
  bool any_unstable = false;
  for (const auto& r : rows) any_unstable |= r.unstable;
  const bool pass = bT < 10.0 * b0 && !any_unstable;
  return {pass, fmt("|B(k0)| %.3e -> %.3e at T=100 (limit 10x); unstable roots for c>=3.5: %s",
                    b0, bT, any_unstable ? "yes" : "none")};
}

outcome criterion4_strong_ap() {
  auto b_after_two_steps = [&](double c) {
    phase_grid g(32, 64, 64, 2.0 * pi / 0.4, 5.0);
    auto s = init_landau(g, 0.01, 0.4, c, false);
    for (std::size_t m = 0; m < g.nx; ++m) {
      s.fields.b[m] = std::sin(0.4 * g.x(m));  // O(1): deliberately ill-prepared
      s.fields.e2[m] = 0.5 * std::cos(0.4 * g.x(m));
    }
    vlasov_workspace ws(g);
    step_first_order_inplace(s, 0.1, maxwell_method::implicit_euler, ws);
    step_first_order_inplace(s, 0.1, maxwell_method::implicit_euler, ws);
    double worst = 0.0;
    for (double v : s.fields.b) worst = std::max(worst, std::abs(v));
    return worst;
  };
  const double b10 = b_after_two_steps(10.0);
  const double b1000 = b_after_two_steps(1000.0);
  const bool pass = b1000 <= 1e-3 * b10;
  return {pass, fmt("||B||_inf after 2 steps: %.3e (c=10) -> %.3e (c=1000), ratio %.2e <= 1e-3",
                    b10, b1000, b1000 / b10)};
}

outcome criterion5_csweep() {
  run_config cfg;
  cfg.scenario = scenario_kind::landau;
  cfg.relativistic = false;
  cfg.dt = 0.1;
  cfg.t_final = 1.0;
  cfg.nx = 64;
  cfg.np1 = cfg.np2 = 256;
  cfg.method = maxwell_method::radau_iia3;
  cfg.order = split_order::strang;
  const std::vector<double> cs{1.0, 5.0, 25.0, 125.0, 625.0, 3125.0};
  const auto rows = run_convergence_in_c(cfg, cs);
  bool monotone = true;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    monotone &= rows[i].err.b < rows[i - 1].err.b;
    monotone &= rows[i].err.f < rows[i - 1].err.f;
  }
  // individual fivefold hops fluctuate (they do in the reference table too);
  // the rate over the whole c = 5 -> 125 span is the trend being asserted
  const double span_rate =
      std::log(rows[3].err.b / rows[1].err.b) / std::log(125.0 / 5.0);
  const bool rates_ok = span_rate >= -3.5 && span_rate <= -1.0;
  // order-of-magnitude anchor for the B error at c = 5 (reference 2.49e-04)
  const bool b5_ok = rows[1].err.b > 2.49e-5 && rows[1].err.b < 2.49e-3;
  const double b_last = rows.back().err.b;
  const bool pass = monotone && rates_ok && b5_ok && b_last <= 1e-10;
  return {pass, fmt("B/f errors monotone for c>=5: %s; B rate %.2f over 5->125 in [-3.5,-1]: "
                    "%s; B err at c=5 %.2e within 10x of 2.49e-4: %s; at c=3125 %.2e <= 1e-10",
                    monotone ? "yes" : "no", span_rate, rates_ok ? "yes" : "no", rows[1].err.b,
                    b5_ok ? "yes" : "no", b_last)};
}

outcome criterion6_orders() {
  run_config cfg;
  cfg.scenario = scenario_kind::landau;
  cfg.relativistic = true;
  cfg.c = 1.0;
  cfg.t_final = 1.0;
  cfg.nx = 16;
  cfg.np1 = cfg.np2 = 64;
  const std::vector<double> dts{0.2, 0.1, 0.05, 0.0125};

  run_config first = cfg;
  first.order = split_order::first;
  first.method = maxwell_method::implicit_euler;
  const double slope1 = run_order_study(first, dts).slope;

  run_config strang = cfg;
  strang.order = split_order::strang;
  strang.method = maxwell_method::radau_iia3;
  const double slope2 = run_order_study(strang, dts).slope;

  const bool pass = std::abs(slope1 - 1.0) <= 0.3 && std::abs(slope2 - 2.0) <= 0.3;
  return {pass, fmt("self-convergence slopes: first order %.2f (want 1.0+-0.3), "
                    "Strang+Radau %.2f (want 2.0+-0.3)",
                    slope1, slope2)};
}

outcome criterion7_wrong_integrator() {
  const double rate_exact = landau_fit(maxwell_method::exact);
  const double rate_cn = landau_fit(maxwell_method::crank_nicolson);
  const bool exact_off = std::abs(rate_exact - (-0.0661)) > 0.25 * 0.0661;
  const bool cn_off = std::abs(rate_cn - (-0.0661)) > 0.25 * 0.0661;
  return {exact_off && cn_off,
          fmt("fitted rates: exact %.5f, Crank-Nicolson %.5f; both must miss "
              "-0.0661 by more than 25%%",
              rate_exact, rate_cn)};
}

// --- criterion 8: the fast property suite -----------------------------------

bool prop_stability_table(std::string& msg) {
  bool ok = true;
  for (auto m : {maxwell_method::exact, maxwell_method::crank_nicolson,
                 maxwell_method::implicit_euler, maxwell_method::radau_iia3,
                 maxwell_method::sdirk2})
    ok &= std::abs(stability_function(m, cd(0.0, 0.0)) - 1.0) < 1e-14;
  ok &= std::abs(stability_function(maxwell_method::implicit_euler, cd(-1.0, 0.0)) - 0.5) < 1e-14;
  ok &= std::abs(stability_function(maxwell_method::radau_iia3, cd(-1.0, 0.0)) - 4.0 / 11.0) <
        1e-14;
  // L-stable limits vanish on the imaginary axis, exact/CN stay unimodular
  for (double y : {1e4, 1e6, 1e8}) {
    for (auto m : {maxwell_method::implicit_euler, maxwell_method::radau_iia3,
                   maxwell_method::sdirk2})
      ok &= std::abs(stability_function(m, cd(0.0, y))) < 10.0 / y;
    for (auto m : {maxwell_method::exact, maxwell_method::crank_nicolson})
      ok &= std::abs(std::abs(stability_function(m, cd(0.0, y))) - 1.0) < 1e-12;
  }
  msg += ok ? "" : " [stability table]";
  return ok;
}

bool prop_radau_stage_vs_rational(std::string& msg) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool ok = true;
  for (double ckdt : {1e-2, 1.0, 1e2, 1e4, 1e6}) {
    for (int trial = 0; trial < 10; ++trial) {
      const mode_pair y{cd(u(rng), u(rng)), cd(u(rng), u(rng))};
      const double c = 2.0, k = 0.7, dt = ckdt / (c * k);
      const auto stage = advance_mode(maxwell_method::radau_iia3, y, k, c, dt);
      // rational form phi(dt M) via the eigen decomposition of M
      const cd lp(0.0, c * k);
      const cd ap = (c * y.b - y.e2) / (2.0 * c), am = (c * y.b + y.e2) / (2.0 * c);
      const cd fp = stability_function(maxwell_method::radau_iia3, lp * dt) * ap;
      const cd fm = stability_function(maxwell_method::radau_iia3, -lp * dt) * am;
      const cd e2 = -c * fp + c * fm, b = fp + fm;
      const double scale = std::max(1.0, std::abs(y.e2) + c * std::abs(y.b));
      ok &= std::abs(stage.e2 - e2) < 1e-12 * scale && std::abs(stage.b - b) < 1e-12 * scale;
    }
  }
  msg += ok ? "" : " [radau stage/rational]";
  return ok;
}

sim_state property_state() {
  phase_grid g(16, 48, 48, 2.0 * pi / 0.4, 5.0);
  sim_state s;
  s.f = distribution(g);
  s.fields = field_state(g.nx);
  s.c = 2.0;
  s.relativistic = true;
  for (std::size_t m = 0; m < g.nx; ++m) {
    const double x = g.x(m);
    for (std::size_t i1 = 0; i1 < g.np1; ++i1)
      for (std::size_t i2 = 0; i2 < g.np2; ++i2) {
        const double q1 = g.p1(i1), q2 = g.p2(i2);
        s.f(m, i1, i2) = std::exp(-0.5 * (q1 * q1 + q2 * q2)) / (2.0 * pi) *
                         (1.0 + 0.2 * std::cos(0.4 * x) * (1.0 + 0.3 * q2) +
                          0.1 * std::sin(0.8 * x) * q1);
      }
    s.fields.e1[m] = 0.02 * std::sin(0.4 * x);
    s.fields.e2[m] = 0.01 * std::cos(0.4 * x);
    s.fields.b[m] = 0.015 * std::sin(0.4 * x);
  }
  return s;
}

spectral_state to_spectral_copy(const sim_state& s) {
  vlasov_workspace ws(s.grid());
  spectral_state sp;
  sp.grid = s.grid();
  sp.f_hat.resize(s.grid().size());
  sp.e1_hat.resize(s.grid().nx);
  sp.e2_hat.resize(s.grid().nx);
  sp.b_hat.resize(s.grid().nx);
  ws.to_spectral(s, sp);
  return sp;
}

bool prop_transport_semigroup(std::string& msg) {
  const auto s = property_state();
  const auto sp = to_spectral_copy(s);
  const double dt = 0.34;
  const auto half = step_transport_ampere(step_transport_ampere(sp, dt / 2, s.c, true), dt / 2,
                                          s.c, true);
  const auto full = step_transport_ampere(sp, dt, s.c, true);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < full.f_hat.size(); ++i) {
    worst = std::max(worst, std::abs(half.f_hat[i] - full.f_hat[i]));
    scale = std::max(scale, std::abs(full.f_hat[i]));
  }
  for (std::size_t m = 0; m < full.e1_hat.size(); ++m) {
    worst = std::max(worst, std::abs(half.e1_hat[m] - full.e1_hat[m]));
    worst = std::max(worst, std::abs(half.e2_hat[m] - full.e2_hat[m]));
  }
  const bool ok = worst < 1e-11 * std::max(1.0, scale);
  msg += ok ? "" : " [semigroup]";
  return ok;
}

bool prop_gauss_and_mass(std::string& msg) {
  const auto s = property_state();
  const auto& g = s.grid();
  auto sp = to_spectral_copy(s);
  const std::size_t np = g.plane_size();
  std::vector<cd> res_before(g.nx), res_after(g.nx);
  auto residual = [&](const spectral_state& q, std::vector<cd>& out) {
    for (std::size_t m = 1; m < g.nx; ++m) {
      if (m == g.nx / 2) continue;
      cd rho(0.0, 0.0);
      for (std::size_t i = 0; i < np; ++i) rho += q.f_hat[m * np + i];
      rho *= g.dp1() * g.dp2();
      const double k = m <= g.nx / 2 ? 0.4 * static_cast<double>(m)
                                     : 0.4 * (static_cast<double>(m) - static_cast<double>(g.nx));
      out[m] = cd(0.0, k) * q.e1_hat[m] - rho;
    }
  };
  residual(sp, res_before);
  cd mass_before(0.0, 0.0);
  for (std::size_t i = 0; i < np; ++i) mass_before += sp.f_hat[i];
  const auto out = step_transport_ampere(sp, 0.41, s.c, true);
  residual(out, res_after);
  cd mass_after(0.0, 0.0);
  for (std::size_t i = 0; i < np; ++i) mass_after += out.f_hat[i];
  bool ok = std::abs(mass_after - mass_before) <= 1e-15 * std::abs(mass_before) + 1e-18;
  for (std::size_t m = 1; m < g.nx; ++m) {
    if (m == g.nx / 2) continue;
    ok &= std::abs(res_after[m] - res_before[m]) < 1e-11;
  }
  msg += ok ? "" : " [gauss/mass]";
  return ok;
}

bool prop_interp_cubic_exact(std::string& msg) {
  auto cubic = [](double a, double b) { return a * a * a - 0.5 * b * b * b + a * b - 2.0; };
  const std::size_t n = 18;
  std::vector<double> data(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      data[i * n + j] = cubic(-1.0 + 0.13 * i, -1.0 + 0.13 * j);
  momentum_plane plane{data.data(), n, n, -1.0, -1.0, 0.13, 0.13};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.8, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double q1 = u(rng), q2 = u(rng);
    ok &= std::abs(sample_plane(plane, q1, q2) - cubic(q1, q2)) <
          1e-12 * std::max(1.0, std::abs(cubic(q1, q2)));
  }
  msg += ok ? "" : " [cubic exactness]";
  return ok;
}

bool prop_plasma_z_quadrature(std::string& msg) {
  bool ok = true;
  // real axis: Im Z = sqrt(pi) e^{-x^2} exactly, Re Z from a direct
  // quadrature of e^{t^2} (all-positive integrand)
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    const cd z = plasma_z(cd(x, 0.0));
    ok &= std::abs(z.imag() - std::sqrt(pi) * std::exp(-x * x)) < 1e-10;
    const int nq = 40000;
    const double h = x / nq;
    double simpson = nq == 0 ? 0.0 : 1.0 + std::exp(x * x);
    for (int i = 1; i < nq; i += 2) simpson += 4.0 * std::exp((i * h) * (i * h));
    for (int i = 2; i < nq; i += 2) simpson += 2.0 * std::exp((i * h) * (i * h));
    const double re_expect = x == 0.0 ? 0.0 : -2.0 * std::exp(-x * x) * simpson * h / 3.0;
    ok &= std::abs(z.real() - re_expect) < 1e-10;
  }
  msg += ok ? "" : " [plasma Z]";
  return ok;
}

bool prop_l2_moment(std::string& msg) {
  dispersion_params p;
  const bool ok = std::abs(weibel_l2_moment(p) + 1.0) <= 1e-8;
  msg += ok ? "" : " [L2=-1]";
  return ok;
}

bool prop_semidiscrete_limit(std::string& msg) {
  dispersion_params p;
  const cd omega(0.0, 0.05);
  const cd d_cont = continuous_det(p, omega);
  dispersion_params q = p;
  q.dt = 1e-6;
  bool ok = std::abs(semidiscrete_det(q, omega) - d_cont) < 1e-4 * std::abs(d_cont);
  // zeros of det(A) coincide with zeros of D
  auto d_rel = [&](cd w) { return continuous_d(p, w); };
  const cd root_d = find_root(d_rel, cd(0.0, 0.02));
  auto a_rel = [&](cd w) { return continuous_det(p, w); };
  const cd root_a = find_root(a_rel, root_d + cd(1e-4, -1e-4));
  ok &= std::abs(root_a - root_d) < 1e-8;
  msg += ok ? "" : " [semidiscrete/det]";
  return ok;
}

outcome criterion8_properties() {
  std::string msg;
  bool ok = true;
  ok &= prop_stability_table(msg);
  ok &= prop_radau_stage_vs_rational(msg);
  ok &= prop_transport_semigroup(msg);
  ok &= prop_gauss_and_mass(msg);
  ok &= prop_interp_cubic_exact(msg);
  ok &= prop_plasma_z_quadrature(msg);
  ok &= prop_l2_moment(msg);
  ok &= prop_semidiscrete_limit(msg);
  return {ok, ok ? "stability table, stage/rational, semigroup, gauss/mass, cubic "
                   "exactness, plasma Z, L2=-1, semidiscrete limits all hold"
                 : "failed:" + msg};
}

}  // namespace

int main() {
  struct entry {
    int id;
    const char* name;
    std::function<outcome()> fn;
  };
  const std::vector<entry> criteria = {
      {1, "landau-damping-limit", criterion1_landau_damping},
      {2, "weibel-growth-rate", criterion2_weibel_growth},
      {3, "instability-shutoff", criterion3_shutoff},
      {4, "strong-ap-property", criterion4_strong_ap},
      {5, "c-sweep-convergence", criterion5_csweep},
      {6, "temporal-order", criterion6_orders},
      {7, "wrong-integrator-falsification", criterion7_wrong_integrator},
      {8, "property-suite", criterion8_properties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    outcome r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failures;
    std::printf("[%s] %d %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", c.id, c.name,
                r.detail.c_str(), elapsed_s(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
