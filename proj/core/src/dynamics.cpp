#include "vkdelay/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vkd {

ScalarField f_nonlinear(const ScalarField& u, const ScalarField& f0, double tol) {
  require_same_grid(u, f0, "f_nonlinear");
  ScalarField v = airy(u, u, tol);
  v += f0;
  ScalarField out = vk_bracket(u, v);
  out *= -1.0;
  return out;
}

namespace {

void check_sync(const PlateState& state, const DelayHistory& history, const DelayConfig& cfg) {
  if (!history.full()) throw SequencingError("dynamics: history not fully seeded");
  if (std::abs(history.t_head() - state.t) > 1e-9 * std::max(cfg.dt, 1.0))
    throw SequencingError("dynamics: history head at t = " + std::to_string(history.t_head()) +
                          " but state at t = " + std::to_string(state.t));
}

ScalarField load_at(const PhysicsConfig& phys, double t) {
  ScalarField p = phys.p0;
  if (phys.p0_omega != 0.0) p *= std::cos(phys.p0_omega * t);
  return p;
}

// Explicit part of the acceleration: everything except -bilap(u) - k_eff u_t.
ScalarField explicit_forces(const PlateState& state, const PhysicsConfig& phys,
                            const ScalarField& q, const ScalarField* v_airy, double tol) {
  ScalarField g = load_at(phys, state.t);
  if (phys.enable_delay) g += q;
  if (phys.u_flow != 0.0) axpy(g, -phys.u_flow, deriv_x(state.u));
  if (phys.enable_nonlinearity) {
    ScalarField v = v_airy ? *v_airy : airy(state.u, state.u, tol);
    v += phys.f0;
    axpy(g, -1.0, vk_bracket(state.u, v));
  }
  return g;
}

}  // namespace

ScalarField rhs(const PlateState& state, const DelayHistory& history, const PhysicsConfig& phys,
                const DelayConfig& cfg, double tol) {
  require_same_grid(state.u, state.ut, "rhs");
  ScalarField q(state.u.grid());
  if (phys.enable_delay) {
    check_sync(state, history, cfg);
    q = q_delay(history, cfg);
  }
  ScalarField out = explicit_forces(state, phys, q, nullptr, tol);
  axpy(out, -1.0, bilaplacian(state.u));
  axpy(out, -phys.k_eff(), state.ut);
  return out;
}

namespace detail_dynamics {

PlateState step_with_forces(const PlateState& state, DelayHistory& history,
                            const PhysicsConfig& phys, const DelayConfig& cfg,
                            const ScalarField& q, const ScalarField* v_airy, double dt,
                            double tol) {
  const Grid& grid = state.u.grid();
  ScalarField g = explicit_forces(state, phys, q, v_airy, tol);

  // Midpoint update in (u, w = u_t): (1 + dt k/2) w1 + dt^2/4 B w1 = b,
  // b = w - dt/2 B u + dt/2 g, then u <- u + dt w1, w <- 2 w1 - w.
  ScalarField b = state.ut;
  axpy(b, -0.5 * dt, bilaplacian(state.u));
  axpy(b, 0.5 * dt, g);
  const double alpha = 1.0 + 0.5 * dt * phys.k_eff();
  const double beta = 0.25 * dt * dt;
  ScalarField wbar = solve_shifted_bilaplacian(alpha, beta, b, state.ut, tol);

  PlateState next(grid);
  next.u = state.u;
  axpy(next.u, dt, wbar);
  next.ut = wbar;
  next.ut *= 2.0;
  next.ut -= state.ut;
  next.t = state.t + dt;
  history.push(next.u, next.t);
  return next;
}

double snapshot_pi_star(const DerivSnapshot& snap, bool with_airy, double tol) {
  if (snap.pi_star_cache >= 0.0) return snap.pi_star_cache;
  const double nb = norm_h2(snap.u);
  double ps = 0.5 * nb * nb;
  if (with_airy && !snap.is_zero) {
    const double na = norm_h2(airy(snap.u, snap.u, tol));
    ps += 0.25 * na * na;
  }
  snap.pi_star_cache = ps;
  return ps;
}

LyapunovReport lyapunov_with_q(const PlateState& state, const DelayHistory& history,
                               const PhysicsConfig& phys, const DelayConfig& cfg,
                               const ScalarField& q, double mu, double nu, double tol) {
  if (!(mu >= 0.0)) throw ConfigError("lyapunov: need mu >= 0");
  const double cap = std::min(1.0, phys.k_eff());
  if (nu < 0.0 || (nu > 0.0 && nu >= cap))
    throw ConfigError("lyapunov: need 0 <= nu < min(1, k_eff)");

  LyapunovReport rep;
  const EnergyReport e = energy(state, phys.f0, tol);
  rep.energy = phys.enable_nonlinearity ? e.full() : e.kinetic + e.bending;
  rep.q_pairing = phys.enable_delay ? -inner(q, state.u) : 0.0;
  rep.cross = nu * (inner(state.ut, state.u) +
                    0.5 * phys.k_eff() * inner(state.u, state.u));

  if (mu > 0.0) {
    const int M = cfg.n_lag;
    std::vector<double> ps(std::size_t(M) + 1);
    for (int m = 0; m <= M; ++m)
      ps[m] = snapshot_pi_star(history.at_lag(m), phys.enable_nonlinearity, tol);
    // Single window integral over [t - t_star, t].
    double single = 0.0;
    for (int m = 0; m <= M; ++m) single += cfg.dt * ((m == 0 || m == M) ? 0.5 : 1.0) * ps[m];
    // Iterated integral: inner integral J(s) = int_{t-s}^t pi_star, outer
    // trapezoid in s over [0, t_star].
    double outer = 0.0;
    double running = 0.0;  // J(m dt) by trapezoid over lags 0..m
    for (int m = 0; m <= M; ++m) {
      if (m > 0) running += 0.5 * cfg.dt * (ps[m - 1] + ps[m]);
      outer += cfg.dt * ((m == 0 || m == M) ? 0.5 : 1.0) * running;
    }
    rep.history_single = mu * single;
    rep.history_double = mu * outer;
  }
  rep.total = rep.energy + rep.q_pairing + rep.cross + rep.history_single + rep.history_double;
  return rep;
}

}  // namespace detail_dynamics

PlateState step(const PlateState& state, DelayHistory& history, const PhysicsConfig& phys,
                const DelayConfig& cfg, double dt, double tol) {
  require_same_grid(state.u, state.ut, "step");
  require_finite(state.u, "step u");
  require_finite(state.ut, "step u_t");
  const Grid& grid = state.u.grid();
  if (!(dt > 0.0)) throw ConfigError("step: need dt > 0");
  if (std::abs(dt - cfg.dt) > 1e-12 * cfg.dt)
    throw ConfigError("step: dt must equal the history spacing");
  const double cfl = grid.h() / std::max(1.0, phys.u_flow);
  if (dt > cfl * (1.0 + 1e-12))
    throw ConfigError("step: dt = " + std::to_string(dt) + " violates the transport bound " +
                      std::to_string(cfl));
  check_sync(state, history, cfg);
  ScalarField q(grid);
  if (phys.enable_delay) q = q_delay(history, cfg);
  return detail_dynamics::step_with_forces(state, history, phys, cfg, q, nullptr, dt, tol);
}

EnergyReport energy(const PlateState& state, const ScalarField& f0, double tol) {
  require_same_grid(state.u, state.ut, "energy");
  require_same_grid(state.u, f0, "energy");
  EnergyReport rep;
  const double nb = norm_h2(state.u);
  rep.kinetic = 0.5 * inner(state.ut, state.ut);
  rep.bending = 0.5 * nb * nb;
  const double na = norm_h2(airy(state.u, state.u, tol));
  rep.airy = 0.25 * na * na;
  rep.coupling = -0.5 * inner(vk_bracket(state.u, f0), state.u);
  return rep;
}

LyapunovReport lyapunov(const PlateState& state, const DelayHistory& history,
                        const PhysicsConfig& phys, const DelayConfig& cfg, double mu, double nu,
                        double tol) {
  ScalarField q(state.u.grid());
  if (phys.enable_delay) {
    check_sync(state, history, cfg);
    q = q_delay(history, cfg);
  } else if (mu > 0.0) {
    if (!history.full()) throw SequencingError("lyapunov: history not fully seeded");
  }
  return detail_dynamics::lyapunov_with_q(state, history, phys, cfg, q, mu, nu, tol);
}

}  // namespace vkd
