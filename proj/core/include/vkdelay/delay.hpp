#pragma once

#include <vector>

#include "vkdelay/grid.hpp"

namespace vkd {

// Certified memory length of the retarded potential: every backward
// characteristic launched anywhere in the domain has left it after
// diam / |1 - U| (the slowest characteristic speed over directions is |1-U|).
double compute_t_star(double u_flow, const Grid& g);

// Deterministic low-discrepancy check that every sampled characteristic with
// s > t has exited the domain. True means t is an admissible memory length.
bool verify_t_star(double u_flow, const Grid& g, double t, int n_samples);

struct DelayConfig {
  double u_flow = 0.0;  // flow speed U >= 0, U != 1
  int n_theta = 32;     // angular quadrature nodes, >= 8
  double dt = 0.0;      // history spacing, > 0
  int n_lag = 0;        // memory slots M; memory length is n_lag * dt

  DelayConfig() = default;
  // Validates U, n_theta, dt and that t_star is an integer multiple of dt.
  DelayConfig(double u_flow, double t_star, int n_theta, double dt);
  // Rounds the certified memory length up to the next multiple of dt
  // (a longer memory is always admissible).
  static DelayConfig certified(double u_flow, const Grid& g, int n_theta, double dt);

  double t_star() const { return n_lag * dt; }
};

// One stored time level: the displacement and its padded second-derivative
// tables ((nx+2) x (ny+2), zero ring) ready for shifted bilinear sampling.
struct DerivSnapshot {
  double t = 0.0;
  ScalarField u;
  std::vector<double> uxx, uxy, uyy;
  bool is_zero = false;
  mutable double pi_star_cache = -1.0;  // filled lazily by diagnostics

  explicit DerivSnapshot(const Grid& g) : u(g) {}
};

// Ring buffer of the last n_lag+1 displacement snapshots at spacing dt.
class DelayHistory {
 public:
  DelayHistory(const Grid& g, const DelayConfig& cfg);

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }
  int lags() const { return n_lag_; }
  bool full() const { return filled_ == n_lag_ + 1; }
  double t_head() const;

  // Fills the whole buffer with one frozen displacement (prehistory constant
  // in time), ending at time t0.
  void seed_constant(const ScalarField& u0, double t0);
  // Fills the buffer from explicit samples, oldest first, newest at t0.
  void seed_samples(const std::vector<ScalarField>& us, double t0);
  // Appends the displacement at t = t_head + dt (strict sequencing).
  void push(const ScalarField& u, double t);

  // m = 0 is the newest snapshot, m = lags() the oldest.
  const DerivSnapshot& at_lag(int m) const;

 private:
  DerivSnapshot make_snapshot(const ScalarField& u, double t) const;

  Grid grid_;
  double dt_ = 0.0;
  int n_lag_ = 0;
  std::vector<DerivSnapshot> ring_;
  int head_ = -1;
  int filled_ = 0;
};

// Retarded aerodynamic potential: double quadrature (trapezoid in the lag,
// periodic trapezoid in the angle) over directional second derivatives of the
// zero-extended displacement history, sampled bilinearly.
ScalarField q_delay(const DelayHistory& history, const DelayConfig& cfg);

// ||q||^2 / (t_star * integral of ||u||_{H2}^2 over the memory window);
// finite by the a priori delay-force bound, 0 for an identically zero window.
double bound_ratio(const DelayHistory& history, const DelayConfig& cfg);

}  // namespace vkd
