#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "vkdelay/attractor.hpp"
#include "vkdelay/corrdim.hpp"

using namespace vkd;

TEST_CASE("seeded streams are reproducible and independent") {
  std::mt19937_64 a = seeded_stream(7, 0);
  std::mt19937_64 b = seeded_stream(7, 0);
  std::mt19937_64 c = seeded_stream(7, 1);
  bool all_equal = true, any_diff = false;
  for (int k = 0; k < 64; ++k) {
    const double ua = uniform01(a), ub = uniform01(b), uc = uniform01(c);
    all_equal = all_equal && ua == ub;
    any_diff = any_diff || ua != uc;
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  std::mt19937_64 d = seeded_stream(7, 2);
  double mean = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) mean += normal01(d);
  mean /= n;
  CHECK(std::abs(mean) < 0.05);  // ~5 sigma of the sample mean
}

TEST_CASE("random initial conditions hit the requested phase-space radius") {
  const Grid g = Grid::unit_square(15);
  const double ts = 2.0;
  std::mt19937_64 gen = seeded_stream(11, 0);
  for (double r : {0.5, 1.0, 4.0}) {
    const auto [u, ut] = random_initial_condition(g, r, ts, gen);
    const double nb = norm_h2(u);
    const double nk = norm_l2(ut);
    const double norm = std::sqrt((1.0 + ts) * nb * nb + nk * nk);
    CHECK(norm == doctest::Approx(r).epsilon(1e-12));
  }
  const auto [zu, zut] = random_initial_condition(g, 0.0, ts, gen);
  CHECK(norm_l2(zu) == 0.0);
  CHECK(norm_l2(zut) == 0.0);
  CHECK_THROWS_AS(random_initial_condition(g, -1.0, ts, gen), ConfigError);
}

TEST_CASE("smooth random fields are band-limited and grid-independent") {
  const Grid g = Grid::unit_square(31);
  std::mt19937_64 gen = seeded_stream(13, 0);
  const ScalarField f = random_smooth_field(g, gen);
  CHECK(f.all_finite());
  CHECK(norm_l2(f) > 0.0);
  // linear decay into the clamped boundary: first ring is one h of slope
  double edge = 0.0, bulk = 0.0;
  for (int i = 0; i < g.nx(); ++i) edge = std::max(edge, std::abs(f(i, 0)));
  for (std::size_t k = 0; k < f.size(); ++k) bulk = std::max(bulk, std::abs(f[k]));
  CHECK(edge < 0.3 * bulk);
  // Rayleigh bound of the highest admitted mode; mesh-scale noise would be
  // two orders above this
  CHECK(norm_h2(f) <= 316.0 * norm_l2(f));
  // the sample is a fixed function of the draw, not of the mesh: on the
  // doubled grid every second node lands on the same coordinates
  std::mt19937_64 gen2 = seeded_stream(13, 0);
  const Grid g2 = Grid::unit_square(63);
  const ScalarField f2 = random_smooth_field(g2, gen2);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) CHECK(f(i, j) == f2(2 * i + 1, 2 * j + 1));
}

TEST_CASE("ensembles are deterministic and contain member failures") {
  const Grid g = Grid::unit_square(9);
  PhysicsConfig phys(g);
  phys.u_flow = 0.5;
  const DelayConfig dc = DelayConfig::certified(0.5, g, 8, 0.5 * g.h());
  EnsembleSpec spec(g, phys, dc);
  spec.n_members = 2;
  spec.ic_radius = 0.5;
  spec.seed = 21;
  spec.horizon = 2.5 * dc.t_star();
  spec.stride = 8;

  const EnsembleResult r1 = run_ensemble(spec);
  const EnsembleResult r2 = run_ensemble(spec);
  REQUIRE(r1.members.size() == 2);
  for (std::size_t m = 0; m < r1.members.size(); ++m) {
    REQUIRE(r1.members[m].ok);
    const auto& s1 = r1.members[m].traj.series;
    const auto& s2 = r2.members[m].traj.series;
    REQUIRE(s1.size() == s2.size());
    for (std::size_t k = 0; k < s1.size(); ++k) {
      CHECK(s1[k].full == s2[k].full);  // bit-identical reruns
      CHECK(s1[k].v == s2[k].v);
    }
  }

  // members must differ from each other
  CHECK(r1.members[0].traj.series.back().full != r1.members[1].traj.series.back().full);

  SUBCASE("horizon shorter than twice the memory is rejected") {
    spec.horizon = 1.5 * dc.t_star();
    CHECK_THROWS_AS(run_ensemble(spec), ConfigError);
  }

  SUBCASE("an unattainable solver tolerance fails members, not the sweep") {
    spec.solver_tol = 1e-300;
    const EnsembleResult bad = run_ensemble(spec);
    REQUIRE(bad.members.size() == 2);
    for (const MemberResult& m : bad.members) {
      CHECK(!m.ok);
      CHECK(!m.error.empty());
    }
  }
}

TEST_CASE("zero radius and zero forcing stay at rest") {
  const Grid g = Grid::unit_square(9);
  PhysicsConfig phys(g);
  const DelayConfig dc = DelayConfig::certified(phys.u_flow, g, 8, 0.5 * g.h());
  EnsembleSpec spec(g, phys, dc);
  spec.n_members = 1;
  spec.ic_radius = 0.0;
  spec.horizon = 2.5 * dc.t_star();
  const EnsembleResult res = run_ensemble(spec);
  REQUIRE(res.members.size() == 1);
  REQUIRE(res.members[0].ok);
  for (const SeriesRow& r : res.members[0].traj.series) {
    CHECK(r.full == 0.0);
    CHECK(r.v == 0.0);
    CHECK(r.q_norm == 0.0);
  }
}

TEST_CASE("decay fit recovers a synthetic exponential-plus-plateau majorant") {
  std::vector<SeriesRow> series;
  for (int k = 0; k <= 200; ++k) {
    SeriesRow r;
    r.t = 0.05 * k;
    r.v = 3.0 * std::exp(-0.7 * r.t) + 0.2;
    series.push_back(r);
  }
  const DecayFit fit = fit_decay(series);
  CHECK(fit.ok);
  CHECK(fit.v0 == doctest::Approx(3.2));
  CHECK(fit.beta > 0.35);
  CHECK(fit.beta < 1.4);
  CHECK(fit.c_over_beta > 0.1);
  CHECK(fit.c_over_beta < 0.35);
  for (const SeriesRow& r : series)  // the fit is a certified majorant
    CHECK(r.v <= fit.v0 * std::exp(-fit.beta * r.t) + fit.c_over_beta + 1e-12);

  std::vector<SeriesRow> flat(5);
  const DecayFit zero_fit = fit_decay(flat);
  CHECK(zero_fit.ok);
  CHECK(zero_fit.c_over_beta == 0.0);
}

TEST_CASE("quasistability fit on a controlled pair") {
  const Grid g = Grid::unit_square(9);
  PhysicsConfig phys(g);  // full model, k_eff = 1
  const DelayConfig dc = DelayConfig::certified(phys.u_flow, g, 8, 0.5 * g.h());
  std::mt19937_64 gen = seeded_stream(31, 0);

  PlateState a(g);
  a.u = random_smooth_field(g, gen);
  a.u *= 0.1;
  PlateState b = a;
  ScalarField dz = random_smooth_field(g, gen);
  dz *= 1e-3 / norm_h2(dz);
  b.u += dz;

  RunOptions opts;
  opts.horizon = 2.0 * dc.t_star();
  opts.stride = 4;
  opts.record_series = false;
  opts.record_fields = true;
  DelayHistory ha(g, dc);
  ha.seed_constant(a.u, 0.0);
  const Trajectory ta = run_trajectory(a, ha, phys, dc, opts);
  DelayHistory hb(g, dc);
  hb.seed_constant(b.u, 0.0);
  const Trajectory tb = run_trajectory(b, hb, phys, dc, opts);

  const QuasiFit fit = quasistability_fit({{&ta, &tb}}, dc.t_star());
  CHECK(fit.success);
  CHECK(fit.omega > 0.0);
  CHECK(fit.c1 >= 0.0);
  CHECK(fit.c2 >= 0.0);
  CHECK(fit.max_violation <= 1e-10);

  // identical pair: degenerate, trivially satisfied
  const QuasiFit same = quasistability_fit({{&ta, &ta}}, dc.t_star());
  CHECK(same.success);
  CHECK(same.degenerate);
  CHECK(same.c1 == 0.0);
  CHECK(same.c2 == 0.0);
}

TEST_CASE("quasistability rate tracks the linear decay rate") {
  // For the damped linear plate the gap itself decays exponentially, so the
  // fitted omega must sit near the observed decay rate of the gap energy.
  const Grid g = Grid::unit_square(9);
  PhysicsConfig phys(g);
  phys.enable_nonlinearity = false;
  phys.enable_delay = false;
  const DelayConfig dc = DelayConfig::certified(0.0, g, 8, 0.5 * g.h());
  std::mt19937_64 gen = seeded_stream(37, 0);

  PlateState a(g);
  a.u = random_smooth_field(g, gen);
  a.u *= 0.1;
  PlateState b = a;
  ScalarField dz = random_smooth_field(g, gen);
  dz *= 1e-3 / norm_h2(dz);
  b.u += dz;

  RunOptions opts;
  opts.horizon = 3.0 * dc.t_star();
  opts.stride = 4;
  opts.record_series = false;
  opts.record_fields = true;
  DelayHistory ha(g, dc);
  ha.seed_constant(a.u, 0.0);
  const Trajectory ta = run_trajectory(a, ha, phys, dc, opts);
  DelayHistory hb(g, dc);
  hb.seed_constant(b.u, 0.0);
  const Trajectory tb = run_trajectory(b, hb, phys, dc, opts);

  const QuasiFit fit = quasistability_fit({{&ta, &tb}}, dc.t_star());
  CHECK(fit.success);
  CHECK(fit.omega > 0.0);

  // observed decay rate of the raw gap energy between the two runs
  std::vector<double> ts, lg;
  for (std::size_t k = 0; k < ta.fields.size(); ++k) {
    ScalarField du = ta.fields[k].u;
    du -= tb.fields[k].u;
    ScalarField dv = ta.fields[k].ut;
    dv -= tb.fields[k].ut;
    const double nb = norm_h2(du);
    const double gk = inner(dv, dv) + nb * nb;
    if (gk > 0.0) {
      ts.push_back(ta.fields[k].t);
      lg.push_back(std::log(gk));
    }
  }
  const double rate = -oracle::fit_slope(ts, lg);
  CHECK(rate > 0.0);
  CHECK(fit.omega > 0.2 * rate);
  CHECK(fit.omega < 5.0 * rate);
}

TEST_CASE("correlation dimension recognizes constants, circles and noise limits") {
  std::vector<int> dims{2, 3, 4};
  std::vector<double> radii;
  for (int k = 0; k < 24; ++k) radii.push_back(1e-3 * std::pow(10.0, 3.0 * k / 23.0));

  SUBCASE("constant series has dimension exactly zero") {
    const std::vector<double> flat(12000, 1.25);
    const CorrDimResult res = correlation_dimension(flat, dims, radii);
    CHECK(res.dimension == 0.0);
    CHECK(res.converged);
  }

  SUBCASE("a pure sine embeds as a closed curve of dimension one") {
    // Phase step incommensurate with the sample index, so the embedded points
    // fill the curve instead of stacking on a few repeated phases (repeats put
    // an atom at distance zero and flatten the correlation sum at small r).
    std::vector<double> s(20000);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sin(0.08 * double(k));
    CorrDimOptions opts;
    opts.max_points = 4000;
    const CorrDimResult res = correlation_dimension(s, dims, radii, opts);
    CHECK(res.converged);
    CHECK(std::abs(res.dimension - 1.0) <= 0.2);
    CHECK(res.delay_lag > 0);
  }

  SUBCASE("short series are rejected") {
    const std::vector<double> s(500, 0.0);
    CHECK_THROWS_AS(correlation_dimension(s, dims, radii), DataError);
  }

  SUBCASE("bad probe radii are rejected") {
    const std::vector<double> s(12000, 0.0);
    const std::vector<double> two{0.1, 0.2};
    const std::vector<double> unsorted{0.3, 0.2, 0.1, 0.05};
    CHECK_THROWS_AS(correlation_dimension(s, dims, two), ConfigError);
    CHECK_THROWS_AS(correlation_dimension(s, dims, unsorted), ConfigError);
  }
}
