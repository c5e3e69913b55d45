#pragma once

#include <functional>
#include <vector>

#include "vkdelay/dynamics.hpp"

namespace vkd {

// One row of the coarse time series (written to series.csv).
struct SeriesRow {
  double t = 0, kinetic = 0, bending = 0, airy = 0, coupling = 0, full = 0, v = 0, q_norm = 0;
};

// Per-step scalars used by the energy-identity check. The energy column is
// model-consistent: the Airy and prestress terms are dropped when the
// nonlinearity is disabled, so the identity holds for the running model.
struct StepScalars {
  double t = 0;
  double energy = 0;      // model-consistent full energy
  double ut_norm2 = 0;    // ||u_t||^2
  double q_dot_ut = 0;    // <q, u_t>
  double load_dot_ut = 0; // <p(t) - U dx u, u_t>
};

struct FieldSample {
  double t = 0;
  ScalarField u, ut;
  FieldSample(const Grid& g) : u(g), ut(g) {}
};

struct Trajectory {
  double dt = 0;
  double k_eff = 0;
  double t_star = 0;
  std::vector<SeriesRow> series;        // every `stride` steps
  std::vector<StepScalars> steps;       // every step, including t0
  std::vector<FieldSample> fields;      // every `stride` steps if requested
  std::vector<double> observable;       // center displacement, every `stride` steps
};

struct RunOptions {
  double horizon = 1.0;      // integration time; steps = round(horizon/dt)
  int stride = 1;            // sampling stride for series/fields/observable
  double solver_tol = 1e-8;
  bool record_series = true;
  bool record_fields = false;
  bool record_observable = false;
  double mu = -1.0;  // Lyapunov weights; negative = defaults from k_eff, t_star
  double nu = -1.0;
  int snapshot_every = 0;  // invoke on_snapshot every so many steps (0 = off)
  std::function<void(int, const PlateState&)> on_snapshot;
};

// Integrates from `state` (whose history must already be seeded up to
// state.t) and records diagnostics. The delay force and the Airy function are
// computed once per step and shared between the step and the records.
Trajectory run_trajectory(PlateState state, DelayHistory& history, const PhysicsConfig& phys,
                          const DelayConfig& cfg, const RunOptions& opts);

// |E(t_b) - E(t_a) + k_eff I[||u_t||^2] - I[<q,u_t>] - I[<p - U dx u, u_t>]|
// with trapezoid integrals over the recorded per-step scalars.
double energy_identity_residual(const Trajectory& traj, std::size_t a, std::size_t b);

struct GapFit {
  double c = 0;  // envelope amplitude
  double a = 0;  // growth exponent of ||z_t||^2 + ||lap z||^2 <= c e^{a t} g(0)
};

// Upper-envelope least-squares fit of the gap growth between two runs that
// recorded field samples at identical times. Identical runs give (0, 0).
GapFit lipschitz_gap(const Trajectory& t1, const Trajectory& t2);

// Least squares y = intercept + slope * x.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& intercept,
                double& slope);

}  // namespace vkd
