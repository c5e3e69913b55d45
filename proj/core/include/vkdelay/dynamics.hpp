#pragma once

#include "vkdelay/biharmonic.hpp"
#include "vkdelay/delay.hpp"

namespace vkd {

struct PhysicsConfig {
  double k = 0.0;          // interior damping >= 0
  double u_flow = 0.0;     // flow speed (transport term U du/dx)
  bool use_reduced_damping = true;  // absorb the reduced-model damping unit
  bool enable_nonlinearity = true;  // von Karman force -[u, v(u)+F0]
  bool enable_delay = true;         // retarded potential forcing
  double p0_omega = 0.0;   // transverse load is p0 * cos(p0_omega * t)
  ScalarField f0;          // in-plane prestress
  ScalarField p0;          // transverse load profile

  explicit PhysicsConfig(const Grid& g) : f0(g), p0(g) {}
  double k_eff() const { return k + (use_reduced_damping ? 1.0 : 0.0); }
};

struct PlateState {
  ScalarField u, ut;
  double t = 0.0;
  explicit PlateState(const Grid& g) : u(g), ut(g) {}
};

struct EnergyReport {
  double kinetic = 0.0;   // 1/2 ||u_t||^2
  double bending = 0.0;   // 1/2 ||laplacian u||^2
  double airy = 0.0;      // 1/4 ||laplacian v(u)||^2
  double coupling = 0.0;  // -1/2 <[u, F0], u>
  double pi_star() const { return bending + airy; }
  double full() const { return kinetic + coupling + pi_star(); }
};

struct LyapunovReport {
  double energy = 0.0;          // full plate energy
  double q_pairing = 0.0;       // -<q, u>
  double cross = 0.0;           // nu * (<u_t, u> + k_eff/2 ||u||^2)
  double history_single = 0.0;  // mu * integral of pi_star over the window
  double history_double = 0.0;  // mu * iterated integral of pi_star
  double total = 0.0;
};

// von Karman force f(u) = -[u, v(u) + F0] with the Airy function solved to tol.
ScalarField f_nonlinear(const ScalarField& u, const ScalarField& f0, double tol);

// Acceleration: -bilap(u) - k_eff u_t - f(u) - U dx(u) + p0 cos(w t) + q_delay.
// Requires the history head to sit exactly at state.t when the delay is on.
ScalarField rhs(const PlateState& state, const DelayHistory& history,
                const PhysicsConfig& phys, const DelayConfig& cfg, double tol);

// One semi-implicit step of size dt (midpoint in the stiff linear part,
// explicit in the von Karman force, transport, load and delay force).
// Pushes the new displacement onto the history. dt must match cfg.dt and the
// transport CFL bound dt <= h / max(1, U).
PlateState step(const PlateState& state, DelayHistory& history, const PhysicsConfig& phys,
                const DelayConfig& cfg, double dt, double tol);

EnergyReport energy(const PlateState& state, const ScalarField& f0, double tol);

// Lyapunov functional V = E - <q,u> + nu (<u_t,u> + k_eff/2 ||u||^2)
// + mu (single + iterated history integrals of pi_star). Requires
// 0 <= nu < min(1, k_eff) (nu = 0 allowed) and mu >= 0.
LyapunovReport lyapunov(const PlateState& state, const DelayHistory& history,
                        const PhysicsConfig& phys, const DelayConfig& cfg, double mu,
                        double nu, double tol);

namespace detail_dynamics {
// Step with the expensive shared pieces (delay force, Airy function of u)
// precomputed by the caller; q and v must belong to state.t.
PlateState step_with_forces(const PlateState& state, DelayHistory& history,
                            const PhysicsConfig& phys, const DelayConfig& cfg,
                            const ScalarField& q, const ScalarField* v_airy, double dt,
                            double tol);
// Lyapunov with a precomputed q; pi_star of stored snapshots honors
// enable_nonlinearity (Airy term dropped for the linear model).
LyapunovReport lyapunov_with_q(const PlateState& state, const DelayHistory& history,
                               const PhysicsConfig& phys, const DelayConfig& cfg,
                               const ScalarField& q, double mu, double nu, double tol);
double snapshot_pi_star(const DerivSnapshot& snap, bool with_airy, double tol);
}  // namespace detail_dynamics

}  // namespace vkd
