#include "vkdelay/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vkd {

namespace {

double default_nu(const PhysicsConfig& phys) {
  const double cap = std::min(1.0, phys.k_eff());
  return cap > 0.0 ? 0.25 * cap : 0.0;
}

}  // namespace

Trajectory run_trajectory(PlateState state, DelayHistory& history, const PhysicsConfig& phys,
                          const DelayConfig& cfg, const RunOptions& opts) {
  const Grid& grid = state.u.grid();
  require_same_grid(state.u, state.ut, "run_trajectory");
  if (!(opts.horizon > 0.0)) throw ConfigError("run: need horizon > 0");
  if (opts.stride < 1) throw ConfigError("run: need stride >= 1");
  const double dt = cfg.dt;
  const int n_steps = int(std::llround(opts.horizon / dt));
  if (n_steps < 1) throw ConfigError("run: horizon shorter than one step");

  const double nu = opts.nu >= 0.0 ? opts.nu : default_nu(phys);
  const double mu = opts.mu >= 0.0 ? opts.mu : nu / (2.0 * (1.0 + cfg.t_star()));

  Trajectory traj;
  traj.dt = dt;
  traj.k_eff = phys.k_eff();
  traj.t_star = cfg.t_star();
  traj.steps.reserve(std::size_t(n_steps) + 1);

  const int ci = grid.nx() / 2, cj = grid.ny() / 2;

  for (int n = 0;; ++n) {
    ScalarField q(grid);
    if (phys.enable_delay) q = q_delay(history, cfg);
    ScalarField v(grid);
    const bool nl = phys.enable_nonlinearity;
    if (nl) v = airy(state.u, state.u, opts.solver_tol);

    // Per-step scalars for the energy identity.
    StepScalars sc;
    sc.t = state.t;
    sc.ut_norm2 = inner(state.ut, state.ut);
    sc.q_dot_ut = phys.enable_delay ? inner(q, state.ut) : 0.0;
    ScalarField load = phys.p0;
    if (phys.p0_omega != 0.0) load *= std::cos(phys.p0_omega * state.t);
    if (phys.u_flow != 0.0) axpy(load, -phys.u_flow, deriv_x(state.u));
    sc.load_dot_ut = inner(load, state.ut);
    const double nb = norm_h2(state.u);
    sc.energy = 0.5 * sc.ut_norm2 + 0.5 * nb * nb;
    if (nl) {
      const double na = norm_h2(v);
      sc.energy += 0.25 * na * na - 0.5 * inner(vk_bracket(state.u, phys.f0), state.u);
    }
    traj.steps.push_back(sc);

    if (n % opts.stride == 0) {
      if (opts.record_series) {
        SeriesRow row;
        row.t = state.t;
        row.kinetic = 0.5 * sc.ut_norm2;
        row.bending = 0.5 * nb * nb;
        if (nl) {
          const double na = norm_h2(v);
          row.airy = 0.25 * na * na;
          row.coupling = -0.5 * inner(vk_bracket(state.u, phys.f0), state.u);
        }
        row.full = row.kinetic + row.bending + row.airy + row.coupling;
        row.v = detail_dynamics::lyapunov_with_q(state, history, phys, cfg, q, mu, nu,
                                                 opts.solver_tol)
                    .total;
        row.q_norm = phys.enable_delay ? norm_l2(q) : 0.0;
        traj.series.push_back(row);
      }
      if (opts.record_fields) {
        FieldSample fs(grid);
        fs.t = state.t;
        fs.u = state.u;
        fs.ut = state.ut;
        traj.fields.push_back(std::move(fs));
      }
      if (opts.record_observable) traj.observable.push_back(state.u(ci, cj));
    }
    if (opts.snapshot_every > 0 && opts.on_snapshot && n % opts.snapshot_every == 0)
      opts.on_snapshot(n, state);

    if (n == n_steps) break;
    state = detail_dynamics::step_with_forces(state, history, phys, cfg, q, nl ? &v : nullptr,
                                              dt, opts.solver_tol);
  }
  return traj;
}

double energy_identity_residual(const Trajectory& traj, std::size_t a, std::size_t b) {
  if (b >= traj.steps.size() || a >= b)
    throw ConfigError("energy_identity_residual: invalid step range");
  double i_ut = 0.0, i_q = 0.0, i_load = 0.0;
  for (std::size_t k = a; k < b; ++k) {
    const StepScalars& s0 = traj.steps[k];
    const StepScalars& s1 = traj.steps[k + 1];
    i_ut += 0.5 * traj.dt * (s0.ut_norm2 + s1.ut_norm2);
    i_q += 0.5 * traj.dt * (s0.q_dot_ut + s1.q_dot_ut);
    i_load += 0.5 * traj.dt * (s0.load_dot_ut + s1.load_dot_ut);
  }
  return std::abs(traj.steps[b].energy - traj.steps[a].energy + traj.k_eff * i_ut - i_q -
                  i_load);
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& intercept,
                double& slope) {
  if (x.size() != y.size() || x.size() < 2)
    throw ShapeError("linear_fit: need two or more matching samples");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw DataError("linear_fit: degenerate abscissae");
  slope = (n * sxy - sx * sy) / det;
  intercept = (sy - slope * sx) / n;
}

GapFit lipschitz_gap(const Trajectory& t1, const Trajectory& t2) {
  if (t1.fields.empty() || t2.fields.empty())
    throw ShapeError("lipschitz_gap: both runs must record field samples");
  if (t1.fields.size() != t2.fields.size())
    throw ShapeError("lipschitz_gap: sample counts differ");
  const std::size_t n = t1.fields.size();
  std::vector<double> ts(n), g(n);
  for (std::size_t k = 0; k < n; ++k) {
    const FieldSample& a = t1.fields[k];
    const FieldSample& b = t2.fields[k];
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
      throw ShapeError("lipschitz_gap: sample times differ");
    ScalarField zu = a.u;
    zu -= b.u;
    ScalarField zt = a.ut;
    zt -= b.ut;
    const double nb = norm_h2(zu);
    ts[k] = a.t - t1.fields[0].t;
    g[k] = inner(zt, zt) + nb * nb;
  }
  GapFit fit;
  if (g[0] == 0.0) {
    // Identical initial data: the gap stays at roundoff; report a flat fit.
    bool all_zero = true;
    for (double v : g) all_zero = all_zero && v == 0.0;
    if (all_zero) return fit;
  }
  const double g0 = std::max(g[0], 1e-300);
  // Upper envelope in log space: prefix maxima of log(g/g0), least squares
  // through those points gives the certified exponential envelope.
  std::vector<double> ex, ey;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k] <= 0.0) continue;
    const double y = std::log(g[k] / g0);
    if (y >= best) {
      best = y;
      ex.push_back(ts[k]);
      ey.push_back(y);
    }
  }
  if (ex.size() < 2) {
    fit.c = 1.0;
    fit.a = 0.0;
    return fit;
  }
  double ic = 0, sl = 0;
  linear_fit(ex, ey, ic, sl);
  // Shift the intercept so the fitted line dominates every envelope point.
  double shift = 0.0;
  for (std::size_t k = 0; k < ex.size(); ++k)
    shift = std::max(shift, ey[k] - (ic + sl * ex[k]));
  fit.c = std::exp(ic + shift);
  fit.a = sl;
  return fit;
}

}  // namespace vkd
