#include "vkdelay/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vkd {

double uniform01(std::mt19937_64& gen) { return double(gen() >> 11) * 0x1.0p-53; }

double normal01(std::mt19937_64& gen) {
  const double u1 = (double(gen() >> 11) + 1.0) * 0x1.0p-53;  // in (0, 1]
  const double u2 = double(gen() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 of seed + golden-ratio stride per stream.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return std::mt19937_64(z);
}

ScalarField random_smooth_field(const Grid& g, std::mt19937_64& gen) {
  // Random low-band sine expansion with a steep spectral rolloff. Samples are
  // grid-independent and keep their bending energy in modes the implicit
  // midpoint step can actually damp: modes with omega*dt >> 1 are turned, not
  // contracted, by the scheme, so mesh-scale noise would never decay and the
  // downstream dissipativity experiments would measure an artifact.
  constexpr int band = 4;
  double amp[band][band];
  for (int m = 1; m <= band; ++m)
    for (int n = 1; n <= band; ++n) {
      const double s = double(m * m + n * n);
      amp[m - 1][n - 1] = normal01(gen) / (s * s * s);
    }
  ScalarField f(g);
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = std::numbers::pi * g.x(i) / g.lx();
      const double y = std::numbers::pi * g.y(j) / g.ly();
      double v = 0.0;
      for (int m = 1; m <= band; ++m)
        for (int n = 1; n <= band; ++n)
          v += amp[m - 1][n - 1] * std::sin(m * x) * std::sin(n * y);
      f(i, j) = v;
    }
  return f;
}

std::pair<ScalarField, ScalarField> random_initial_condition(const Grid& g, double radius,
                                                             double t_star,
                                                             std::mt19937_64& gen) {
  if (!(radius >= 0.0)) throw ConfigError("random_initial_condition: radius must be >= 0");
  if (!(t_star >= 0.0)) throw ConfigError("random_initial_condition: t_star must be >= 0");
  ScalarField u = random_smooth_field(g, gen);
  ScalarField ut = random_smooth_field(g, gen);
  if (radius == 0.0) return {ScalarField(g), ScalarField(g)};
  const double nb = norm_h2(u);
  const double nk = norm_l2(ut);
  const double total = std::sqrt((1.0 + t_star) * nb * nb + nk * nk);
  if (total == 0.0) throw DataError("random_initial_condition: degenerate sample");
  const double s = radius / total;
  u *= s;
  ut *= s;
  return {u, ut};
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  if (spec.n_members < 1) throw ConfigError("ensemble: need at least one member");
  if (!(spec.horizon > 2.0 * spec.delay.t_star()))
    throw ConfigError("ensemble: horizon must exceed twice the memory length");
  EnsembleResult result;
  result.members.reserve(spec.n_members);
  for (int m = 0; m < spec.n_members; ++m) {
    MemberResult mr;
    mr.index = m;
    try {
      std::mt19937_64 gen = seeded_stream(spec.seed, std::uint64_t(m));
      auto [u0, ut0] =
          random_initial_condition(spec.grid, spec.ic_radius, spec.delay.t_star(), gen);
      DelayHistory history(spec.grid, spec.delay);
      history.seed_constant(u0, 0.0);
      PlateState state(spec.grid);
      state.u = u0;
      state.ut = ut0;
      RunOptions opts;
      opts.horizon = spec.horizon;
      opts.stride = spec.stride;
      opts.solver_tol = spec.solver_tol;
      opts.mu = spec.mu;
      opts.nu = spec.nu;
      mr.traj = run_trajectory(std::move(state), history, spec.phys, spec.delay, opts);
      mr.ok = true;
    } catch (const Error& e) {
      mr.ok = false;
      mr.error = e.what();
    }
    result.members.push_back(std::move(mr));
  }
  return result;
}

DecayFit fit_decay(const std::vector<SeriesRow>& series) {
  DecayFit fit;
  if (series.size() < 3) return fit;
  const double t0 = series.front().t;
  const double v0 = series.front().v;
  fit.v0 = v0;
  if (!(v0 > 0.0)) {
    // Starting at or below zero: the majorant with plateau max(V) is valid.
    double plateau = 0.0;
    for (const SeriesRow& r : series) plateau = std::max(plateau, r.v);
    fit.beta = 1.0;
    fit.c_over_beta = plateau;
    fit.ok = true;
    return fit;
  }
  const double span = series.back().t - t0;
  if (!(span > 0.0)) return fit;
  double best_score = std::numeric_limits<double>::infinity();
  for (int kb = 0; kb < 64; ++kb) {
    // beta between ~1/(20 span) and ~50/span, log-spaced.
    const double beta = (0.05 / span) * std::pow(1000.0, kb / 63.0);
    double plateau = 0.0;
    for (const SeriesRow& r : series)
      plateau = std::max(plateau, r.v - v0 * std::exp(-beta * (r.t - t0)));
    double slack = 0.0;
    for (const SeriesRow& r : series)
      slack += v0 * std::exp(-beta * (r.t - t0)) + plateau - r.v;
    const double score = slack / double(series.size());
    if (score < best_score) {
      best_score = score;
      fit.beta = beta;
      fit.c_over_beta = plateau;
    }
  }
  fit.ok = fit.beta > 0.0 && fit.c_over_beta >= 0.0;
  return fit;
}

QuasiFit quasistability_fit(
    const std::vector<std::pair<const Trajectory*, const Trajectory*>>& pairs, double t_star,
    double eta) {
  if (pairs.empty()) throw ConfigError("quasistability_fit: no pairs");
  if (eta != 2.0 && eta != 1.0)
    throw ConfigError("quasistability_fit: lower-order norm exponent must be 1 or 2");

  struct Row {
    double t = 0, g = 0, m = 0;
  };
  std::vector<std::vector<Row>> data;
  double g_max = 0.0;

  for (const auto& [pa, pb] : pairs) {
    if (!pa || !pb) throw ShapeError("quasistability_fit: null trajectory");
    const Trajectory& a = *pa;
    const Trajectory& b = *pb;
    if (a.fields.empty() || a.fields.size() != b.fields.size())
      throw ShapeError("quasistability_fit: pairs must record matching field samples");
    std::vector<Row> rows(a.fields.size());
    std::vector<double> lap2(a.fields.size());
    const double t0 = a.fields.front().t;
    const double sample_dt = a.fields.size() > 1 ? a.fields[1].t - a.fields[0].t : 0.0;
    double sup_m = 0.0;
    for (std::size_t k = 0; k < a.fields.size(); ++k) {
      if (std::abs(a.fields[k].t - b.fields[k].t) > 1e-9 * std::max(1.0, std::abs(a.fields[k].t)))
        throw ShapeError("quasistability_fit: sample times differ within a pair");
      ScalarField zu = a.fields[k].u;
      zu -= b.fields[k].u;
      ScalarField zt = a.fields[k].ut;
      zt -= b.fields[k].ut;
      const double nb = norm_h2(zu);
      lap2[k] = nb * nb;
      // Window integral of ||lap z||^2 over [t - t_star, t]; the gap history
      // is zero before t0 (pairs share their prehistory).
      double window = 0.0;
      for (std::size_t l = k; l-- > 0;) {
        if (a.fields[k].t - a.fields[l].t > t_star) break;
        window += 0.5 * sample_dt * (lap2[l] + lap2[l + 1]);
      }
      const double m2 =
          eta == 2.0 ? inner(zu, zu)
                     : inner(zu, zu) + inner(deriv_x(zu), deriv_x(zu)) +
                           inner(deriv_y(zu), deriv_y(zu));
      sup_m = std::max(sup_m, m2);
      rows[k].t = a.fields[k].t - t0;
      rows[k].g = inner(zt, zt) + nb * nb + window;
      rows[k].m = sup_m;
      g_max = std::max(g_max, rows[k].g);
    }
    data.push_back(std::move(rows));
  }

  QuasiFit fit;
  if (g_max == 0.0) {
    fit.success = true;
    fit.degenerate = true;
    fit.c1 = 0.0;
    fit.omega = 1.0;
    fit.c2 = 0.0;
    return fit;
  }

  // Candidate c2 values: zero plus quantiles of g/m.
  std::vector<double> ratios;
  for (const auto& rows : data)
    for (const Row& r : rows)
      if (r.m > 0.0) ratios.push_back(r.g / r.m);
  std::sort(ratios.begin(), ratios.end());
  std::vector<double> c2s{0.0};
  for (int q = 0; q < 24; ++q) {
    const std::size_t idx = std::size_t((ratios.size() - 1) * (q / 23.0));
    if (!ratios.empty()) c2s.push_back(ratios[idx]);
  }

  double span = 0.0;
  for (const auto& rows : data) span = std::max(span, rows.back().t);
  if (!(span > 0.0)) throw ShapeError("quasistability_fit: degenerate time span");

  double best_score = std::numeric_limits<double>::infinity();
  for (int kw = 0; kw < 48; ++kw) {
    const double omega = (0.05 / span) * std::pow(2000.0, kw / 47.0);
    for (const double c2 : c2s) {
      // Smallest admissible c1 for this (omega, c2).
      double c1 = 0.0;
      for (const auto& rows : data) {
        const double g0 = std::max(rows.front().g, 1e-300);
        for (const Row& r : rows) {
          const double env = std::exp(-omega * r.t) * g0;
          const double need = (r.g - c2 * r.m) / env;
          c1 = std::max(c1, need);
        }
      }
      // Integrated size of the majorant: prefer tight fits.
      double score = 0.0;
      for (const auto& rows : data) {
        const double g0 = std::max(rows.front().g, 1e-300);
        score += c1 * g0 * (1.0 - std::exp(-omega * span)) / omega;
        score += c2 * rows.back().m * span;
      }
      if (score < best_score) {
        best_score = score;
        fit.c1 = c1;
        fit.omega = omega;
        fit.c2 = c2;
      }
    }
  }

  // Certify: no sample may exceed the fitted majorant beyond roundoff.
  double viol = -std::numeric_limits<double>::infinity();
  for (const auto& rows : data) {
    const double g0 = std::max(rows.front().g, 1e-300);
    for (const Row& r : rows) {
      const double bound = fit.c1 * std::exp(-fit.omega * r.t) * g0 + fit.c2 * r.m;
      viol = std::max(viol, (r.g - bound) / g_max);
    }
  }
  fit.max_violation = viol;
  fit.success = fit.omega > 0.0 && fit.c1 >= 0.0 && fit.c2 >= 0.0 && viol <= 1e-10;
  return fit;
}

}  // namespace vkd
