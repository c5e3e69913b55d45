// Batch front end: simulate / verify / ensemble / quasistab / dimension.
// Exit codes: 0 success, 1 usage or config error, 2 numerical failure,
// 3 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vkdelay/attractor.hpp"
#include "vkdelay/config.hpp"
#include "vkdelay/corrdim.hpp"
#include "vkdelay/series.hpp"
#include "vkdelay/snapshot.hpp"
#include "vkdelay/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Args {
  std::string config;
  std::string out = ".";
  std::vector<std::string> suites;
  bool force = false;
  bool echo = false;
};

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void refuse_existing(const std::string& path, bool force) {
  if (!force && fs::exists(path))
    throw vkd::ConfigError("output '" + path + "' exists (use --force to overwrite)");
}

// Integrates quietly and hands back the final state; the history argument is
// left holding the matching past.
vkd::PlateState settle(vkd::PlateState state, vkd::DelayHistory& history,
                       const vkd::RunConfig& cfg, double horizon) {
  const int n_steps = int(std::llround(horizon / cfg.delay.dt));
  vkd::PlateState last = state;
  vkd::RunOptions opts;
  opts.horizon = horizon;
  opts.stride = std::max(1, n_steps);
  opts.solver_tol = cfg.run.solver_tol;
  opts.record_series = false;
  opts.snapshot_every = 1;
  opts.on_snapshot = [&](int n, const vkd::PlateState& s) {
    if (n == n_steps) last = s;
  };
  run_trajectory(std::move(state), history, cfg.phys, cfg.delay, opts);
  return last;
}

int cmd_simulate(const Args& a) {
  const vkd::RunConfig cfg = vkd::parse_config(a.config);
  if (a.echo) {
    vkd::print_config(cfg, std::cout);
    return 0;
  }
  fs::create_directories(a.out);
  refuse_existing(join(a.out, "series.csv"), a.force);

  vkd::PlateState st(cfg.grid);
  st.u = realize(cfg.run.ic_u, cfg.grid, vkd::SnapshotSlot::displacement);
  st.ut = realize(cfg.run.ic_ut, cfg.grid, vkd::SnapshotSlot::velocity);
  vkd::DelayHistory hist(cfg.grid, cfg.delay);
  hist.seed_constant(st.u, 0.0);

  const int n_steps = int(std::llround(cfg.run.horizon / cfg.delay.dt));
  vkd::PlateState last = st;
  vkd::RunOptions opts;
  opts.horizon = cfg.run.horizon;
  opts.stride = cfg.run.stride;
  opts.solver_tol = cfg.run.solver_tol;
  opts.snapshot_every = 1;
  opts.on_snapshot = [&](int n, const vkd::PlateState& s) {
    if (cfg.run.snapshot_stride > 0 && n % cfg.run.snapshot_stride == 0) {
      char name[40];
      std::snprintf(name, sizeof name, "snapshot_%06d.vkds", n);
      write_snapshot(join(a.out, name), s, a.force);
    }
    if (n == n_steps) last = s;
  };
  const vkd::Trajectory traj = run_trajectory(st, hist, cfg.phys, cfg.delay, opts);

  write_series(join(a.out, "series.csv"), traj.series, a.force);
  write_snapshot(join(a.out, "final_state.vkds"), last, a.force);
  std::cout << "simulate: " << traj.series.size() << " samples, t in [0, "
            << vkd::fmt17(traj.series.back().t) << "], final full energy "
            << vkd::fmt17(traj.series.back().full) << "\n";
  return 0;
}

int cmd_verify(const Args& a) {
  const vkd::RunConfig cfg = vkd::parse_config(a.config);
  if (a.echo) {
    vkd::print_config(cfg, std::cout);
    return 0;
  }
  std::vector<std::string> suites = a.suites;
  if (suites.empty() || (suites.size() == 1 && suites[0] == "all"))
    suites = vkd::verify_suite_names();

  fs::create_directories(a.out);
  const std::string report = join(a.out, "verify_report.csv");
  refuse_existing(report, a.force);

  int failed = 0;
  std::vector<std::vector<std::string>> rows;
  for (const std::string& s : suites) {
    for (const vkd::VerifyCheck& c : run_verify_suite(s, cfg)) {
      if (!c.pass) ++failed;
      std::printf("[%s] %s.%s  value=%s  threshold=%s\n", c.pass ? "PASS" : "FAIL",
                  c.suite.c_str(), c.name.c_str(), vkd::fmt17(c.value).c_str(),
                  vkd::fmt17(c.threshold).c_str());
      rows.push_back({c.suite, c.name, vkd::fmt17(c.value), vkd::fmt17(c.threshold),
                      c.pass ? "1" : "0"});
    }
  }
  vkd::write_csv(report, {"suite", "check", "value", "threshold", "pass"}, rows, a.force);
  std::printf("%zu checks, %d failed\n", rows.size(), failed);
  return failed == 0 ? 0 : 3;
}

int cmd_ensemble(const Args& a) {
  const vkd::RunConfig cfg = vkd::parse_config(a.config);
  if (a.echo) {
    vkd::print_config(cfg, std::cout);
    return 0;
  }
  fs::create_directories(a.out);
  refuse_existing(join(a.out, "absorbing_report.csv"), a.force);

  struct RadiusStats {
    double radius = 0, late_sup = 0, beta_min = 0;
    int failed = 0;
    bool decay_ok = true;
  };
  std::vector<RadiusStats> stats;

  for (std::size_t k = 0; k < cfg.ensemble.radii.size(); ++k) {
    vkd::EnsembleSpec spec(cfg.grid, cfg.phys, cfg.delay);
    spec.n_members = cfg.ensemble.members;
    spec.ic_radius = cfg.ensemble.radii[k];
    spec.seed = cfg.run.seed;
    spec.horizon = cfg.run.horizon;
    spec.stride = cfg.run.stride;
    spec.solver_tol = cfg.run.solver_tol;
    const vkd::EnsembleResult res = run_ensemble(spec);

    RadiusStats st;
    st.radius = spec.ic_radius;
    double beta_min = std::numeric_limits<double>::infinity();
    for (const vkd::MemberResult& m : res.members) {
      if (!m.ok) {
        ++st.failed;
        st.decay_ok = false;
        std::cerr << "ensemble: radius " << vkd::fmt17(st.radius) << " member " << m.index
                  << " failed: " << m.error << "\n";
        continue;
      }
      char name[48];
      std::snprintf(name, sizeof name, "member_r%zu_m%02d.csv", k, m.index);
      write_series(join(a.out, name), m.traj.series, a.force);

      const std::vector<vkd::SeriesRow>& rows = m.traj.series;
      const std::size_t tail =
          std::max<std::size_t>(1, std::size_t(std::llround(cfg.ensemble.late_fraction *
                                                            double(rows.size()))));
      for (std::size_t i = rows.size() - tail; i < rows.size(); ++i)
        st.late_sup = std::max(st.late_sup, rows[i].kinetic + rows[i].bending + rows[i].airy);

      const vkd::DecayFit fit = fit_decay(rows);
      if (fit.ok && fit.beta > 0.0)
        beta_min = std::min(beta_min, fit.beta);
      else
        st.decay_ok = false;
    }
    st.beta_min = std::isfinite(beta_min) ? beta_min : 0.0;
    stats.push_back(st);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool all_ok = true;
  for (const RadiusStats& st : stats) {
    lo = std::min(lo, st.late_sup);
    hi = std::max(hi, st.late_sup);
    all_ok = all_ok && st.failed == 0 && st.decay_ok;
  }
  const double spread = lo > 0.0 ? (hi - lo) / lo
                                 : (hi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const bool absorbing = all_ok && spread <= 0.2;

  std::vector<std::vector<std::string>> rows;
  for (const RadiusStats& st : stats)
    rows.push_back({vkd::fmt17(st.radius), std::to_string(cfg.ensemble.members),
                    std::to_string(st.failed), vkd::fmt17(st.late_sup), vkd::fmt17(st.beta_min),
                    st.decay_ok ? "1" : "0", vkd::fmt17(spread), absorbing ? "1" : "0"});
  vkd::write_csv(join(a.out, "absorbing_report.csv"),
            {"radius", "members", "failed", "late_sup", "beta_min", "decay_ok", "rel_spread",
             "absorbing"},
            rows, a.force);
  std::cout << "ensemble: late-time sup spread " << vkd::fmt17(spread) << ", absorbing = "
            << (absorbing ? "yes" : "no") << "\n";
  return 0;
}

int cmd_quasistab(const Args& a) {
  const vkd::RunConfig cfg = vkd::parse_config(a.config);
  if (a.echo) {
    vkd::print_config(cfg, std::cout);
    return 0;
  }
  fs::create_directories(a.out);
  refuse_existing(join(a.out, "quasifit.csv"), a.force);

  const int n_pairs = cfg.quasistab.pairs;
  std::vector<vkd::Trajectory> store;
  store.reserve(2 * std::size_t(n_pairs));

  for (int p = 0; p < n_pairs; ++p) {
    std::mt19937_64 gen = vkd::seeded_stream(cfg.run.seed, 3000 + std::uint64_t(p));
    auto [u0, ut0] =
        vkd::random_initial_condition(cfg.grid, 1.0, cfg.delay.t_star(), gen);
    vkd::PlateState st(cfg.grid);
    st.u = u0;
    st.ut = ut0;
    vkd::DelayHistory hist(cfg.grid, cfg.delay);
    hist.seed_constant(st.u, 0.0);
    const vkd::PlateState base = settle(st, hist, cfg, cfg.quasistab.transient);

    vkd::PlateState pert = base;
    vkd::ScalarField dz = vkd::random_smooth_field(cfg.grid, gen);
    const double nh2 = vkd::norm_h2(dz);
    if (nh2 > 0.0) dz *= cfg.quasistab.gap / nh2;
    pert.u += dz;

    vkd::RunOptions opts;
    opts.horizon = cfg.run.horizon;
    opts.stride = cfg.run.stride;
    opts.solver_tol = cfg.run.solver_tol;
    opts.record_series = false;
    opts.record_fields = true;

    vkd::DelayHistory h1 = hist;
    vkd::DelayHistory h2 = hist;
    store.push_back(run_trajectory(base, h1, cfg.phys, cfg.delay, opts));
    store.push_back(run_trajectory(pert, h2, cfg.phys, cfg.delay, opts));
  }

  std::vector<std::pair<const vkd::Trajectory*, const vkd::Trajectory*>> pairs;
  for (int p = 0; p < n_pairs; ++p)
    pairs.emplace_back(&store[2 * std::size_t(p)], &store[2 * std::size_t(p) + 1]);

  const vkd::QuasiFit fit =
      quasistability_fit(pairs, cfg.delay.t_star(), cfg.quasistab.eta);
  vkd::write_csv(join(a.out, "quasifit.csv"), {"c1", "omega", "c2", "residual"},
            {{vkd::fmt17(fit.c1), vkd::fmt17(fit.omega), vkd::fmt17(fit.c2),
              vkd::fmt17(fit.max_violation)}},
            a.force);
  std::cout << "quasistab: c1 = " << vkd::fmt17(fit.c1) << ", omega = " << vkd::fmt17(fit.omega)
            << ", c2 = " << vkd::fmt17(fit.c2) << ", max violation = "
            << vkd::fmt17(fit.max_violation) << (fit.degenerate ? " (degenerate pairs)" : "")
            << "\n";
  if (!fit.success) {
    std::cerr << "quasistab: fit failed (omega <= 0 or positive slack)\n";
    return 3;
  }
  return 0;
}

int cmd_dimension(const Args& a) {
  const vkd::RunConfig cfg = vkd::parse_config(a.config);
  if (a.echo) {
    vkd::print_config(cfg, std::cout);
    return 0;
  }
  fs::create_directories(a.out);
  refuse_existing(join(a.out, "dimension.csv"), a.force);

  vkd::PlateState st(cfg.grid);
  st.u = realize(cfg.run.ic_u, cfg.grid, vkd::SnapshotSlot::displacement);
  st.ut = realize(cfg.run.ic_ut, cfg.grid, vkd::SnapshotSlot::velocity);
  vkd::DelayHistory hist(cfg.grid, cfg.delay);
  hist.seed_constant(st.u, 0.0);

  vkd::RunOptions opts;
  opts.horizon = cfg.run.horizon;
  opts.stride = cfg.run.stride;
  opts.solver_tol = cfg.run.solver_tol;
  opts.record_series = false;
  opts.record_observable = true;
  const vkd::Trajectory traj = run_trajectory(st, hist, cfg.phys, cfg.delay, opts);

  const double sample_dt = cfg.delay.dt * cfg.run.stride;
  const std::size_t skip = std::min(
      traj.observable.size(),
      std::size_t(std::ceil(cfg.dimension.transient / sample_dt)));
  const std::vector<double> series(traj.observable.begin() + std::ptrdiff_t(skip),
                                   traj.observable.end());

  std::vector<double> radii = cfg.dimension.radii;
  if (radii.empty()) {
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    double spread = series.empty() ? 1.0 : *hi - *lo;
    if (!(spread > 0.0)) spread = 1.0;
    radii.resize(32);
    for (int k = 0; k < 32; ++k)
      radii[std::size_t(k)] = spread * std::pow(10.0, -4.0 + 4.0 * double(k) / 31.0);
  }

  vkd::CorrDimOptions copts;
  copts.delay_lag = cfg.dimension.delay_lag;
  copts.theiler = cfg.dimension.theiler;
  copts.max_points = cfg.dimension.max_points;
  const vkd::CorrDimResult res =
      correlation_dimension(series, cfg.dimension.embed_dims, radii, copts);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < res.embed_dims.size(); ++k)
    rows.push_back({std::to_string(res.embed_dims[k]), vkd::fmt17(res.slopes[k]),
                    vkd::fmt17(res.dimension)});
  vkd::write_csv(join(a.out, "dimension.csv"), {"embed_dim", "slope", "plateau"}, rows, a.force);
  std::cout << "dimension: estimate " << vkd::fmt17(res.dimension) << " over "
            << series.size() << " samples (lag " << res.delay_lag << ", "
            << (res.converged ? "plateau found" : "no plateau") << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clamped von Karman plate with a delayed aerodynamic force"};
  app.require_subcommand(1);

  Args sim_a, ver_a, ens_a, qua_a, dim_a;
  auto add_common = [](CLI::App* sub, Args& a, bool out_required) {
    sub->add_option("--config", a.config, "INI configuration file")->required();
    auto* out = sub->add_option("--out", a.out, "output directory");
    if (out_required) out->required();
    sub->add_flag("--force", a.force, "overwrite existing outputs");
    sub->add_flag("--print-config", a.echo, "echo the effective configuration and exit");
  };

  CLI::App* sim = app.add_subcommand(
      "simulate", "integrate one trajectory; writes series.csv and binary snapshots");
  add_common(sim, sim_a, true);

  CLI::App* ver = app.add_subcommand(
      "verify", "run property suites; writes verify_report.csv, exit 0 iff all checks pass");
  add_common(ver, ver_a, false);
  ver->add_option("--suite", ver_a.suites,
                  "suite name (stencils, airy, bracket, tstar, energy, qbounds, all)");

  CLI::App* ens = app.add_subcommand(
      "ensemble", "dissipativity experiment; writes member series and absorbing_report.csv");
  add_common(ens, ens_a, true);

  CLI::App* qua = app.add_subcommand(
      "quasistab", "paired-trajectory stability fit; writes quasifit.csv");
  add_common(qua, qua_a, true);

  CLI::App* dim = app.add_subcommand(
      "dimension", "correlation-dimension estimate; writes dimension.csv");
  add_common(dim, dim_a, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_a);
    if (ver->parsed()) return cmd_verify(ver_a);
    if (ens->parsed()) return cmd_ensemble(ens_a);
    if (qua->parsed()) return cmd_quasistab(qua_a);
    if (dim->parsed()) return cmd_dimension(dim_a);
  } catch (const vkd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const vkd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
