#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vkdelay/dynamics.hpp"

namespace vkd {

// Field source: "zero" | "constant:<v>" | "bump:<amp>,<cx>,<cy>,<w>" |
// "file:<path>" (the displacement slot of a snapshot file; the velocity slot
// when realizing an initial-velocity key).
struct FieldSpec {
  enum class Kind { zero, constant, bump, file };
  Kind kind = Kind::zero;
  double value = 0.0;                       // constant
  double amp = 0, cx = 0, cy = 0, width = 0;  // bump
  std::string path;                         // file
  std::string text = "zero";                // original text, echoed back

  static FieldSpec parse(const std::string& text);
};

enum class SnapshotSlot { displacement, velocity };
ScalarField realize(const FieldSpec& spec, const Grid& g,
                    SnapshotSlot slot = SnapshotSlot::displacement);

struct RunSection {
  double horizon = 10.0;
  int stride = 8;
  std::uint64_t seed = 1;
  double solver_tol = 1e-8;
  int snapshot_stride = 0;  // 0 = no periodic snapshots
  FieldSpec ic_u, ic_ut;
};

struct EnsembleSection {
  int members = 8;
  std::vector<double> radii{1.0, 2.0, 4.0};
  double late_fraction = 0.25;  // tail share of samples for the sup-energy
};

struct QuasiSection {
  int pairs = 5;
  double gap = 1e-3;      // perturbation amplitude
  double transient = 5.0; // settle time before pairs are launched
  double eta = 2.0;       // lower-order norm selector (2 = L2, 1 = H1)
};

struct DimensionSection {
  std::vector<int> embed_dims{2, 3, 4, 5};
  std::vector<double> radii;  // empty = log grid from the series spread
  int delay_lag = 0;
  int theiler = 0;
  int max_points = 6000;
  double transient = 5.0;
};

struct RunConfig {
  Grid grid;
  PhysicsConfig phys;
  DelayConfig delay;
  RunSection run;
  EnsembleSection ensemble;
  QuasiSection quasistab;
  DimensionSection dimension;
  FieldSpec f0_spec, p0_spec;

  explicit RunConfig(const Grid& g) : grid(g), phys(g) {}
};

// Parses an INI-style file ([section], key = value, # comments). Unknown
// sections or keys are rejected; every violated constraint is reported with
// its key path and line number, all collected into one error.
RunConfig parse_config(const std::string& path);

// Canonical echo of the effective configuration, including derived values.
void print_config(const RunConfig& cfg, std::ostream& os);

}  // namespace vkd
