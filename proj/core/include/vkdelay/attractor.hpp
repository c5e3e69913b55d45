#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "vkdelay/trajectory.hpp"

namespace vkd {

// Deterministic uniform in [0, 1) from the engine's raw 64-bit output.
double uniform01(std::mt19937_64& gen);
// Deterministic standard normal (Box-Muller, no engine-dependent state).
double normal01(std::mt19937_64& gen);
// Engine for a derived stream (member index, pair index, ...).
std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream);

// Low-pass filtered white noise with a boundary taper compatible with the
// clamped conditions; unnormalized.
ScalarField random_smooth_field(const Grid& g, std::mt19937_64& gen);

// Random (u, u_t) scaled so that (1 + t_star) ||lap u||^2 + ||u_t||^2 equals
// radius^2 -- the phase-space norm with a frozen prehistory.
std::pair<ScalarField, ScalarField> random_initial_condition(const Grid& g, double radius,
                                                             double t_star,
                                                             std::mt19937_64& gen);

struct EnsembleSpec {
  Grid grid;
  PhysicsConfig phys;
  DelayConfig delay;
  int n_members = 8;
  double ic_radius = 1.0;
  std::uint64_t seed = 1;
  double horizon = 10.0;   // must exceed 2 * t_star
  int stride = 4;
  double solver_tol = 1e-8;
  double mu = -1.0, nu = -1.0;

  EnsembleSpec(const Grid& g, const PhysicsConfig& p, const DelayConfig& d)
      : grid(g), phys(p), delay(d) {}
};

struct MemberResult {
  int index = 0;
  bool ok = false;
  std::string error;
  Trajectory traj;
};

struct EnsembleResult {
  std::vector<MemberResult> members;
};

// Independent trajectories from random initial data at the spec radius, each
// with its own frozen prehistory. A diverging member is recorded as failed
// and does not abort the sweep. Fully deterministic in spec.seed.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

struct DecayFit {
  double v0 = 0;       // V at the start of the fit window
  double beta = 0;     // decay rate, > 0 when ok
  double c_over_beta = 0;  // plateau level, >= 0
  bool ok = false;
};

// Fits V(t) <= V(0) e^{-beta t} + C/beta over the recorded series rows by a
// grid search in beta, minimizing the integrated slack of the majorant.
DecayFit fit_decay(const std::vector<SeriesRow>& series);

struct QuasiFit {
  double c1 = 0, omega = 0, c2 = 0;
  bool success = false;
  bool degenerate = false;     // all gaps identically zero
  double max_violation = 0.0;  // worst constraint violation (<= 0 is clean)
};

// Joint fit of g(t) <= c1 e^{-omega t} g(0) + c2 sup_{tau<=t} m(tau) over
// trajectory pairs that recorded field samples on a common time lattice.
// g = ||z_t||^2 + ||lap z||^2 + window integral of ||lap z||^2 over t_star;
// m is the squared lower-order norm (eta = 2: L2; eta = 1: H1 seminorm).
QuasiFit quasistability_fit(
    const std::vector<std::pair<const Trajectory*, const Trajectory*>>& pairs,
    double t_star, double eta = 2.0);

}  // namespace vkd
