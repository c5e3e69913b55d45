#include "vkdelay/delay.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "padded.hpp"
#include "vkdelay/field_ops.hpp"

namespace vkd {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double frac(double x) { return x - std::floor(x); }
}  // namespace

double compute_t_star(double u_flow, const Grid& g) {
  if (!(u_flow >= 0.0)) throw ConfigError("compute_t_star: flow speed must be >= 0");
  if (u_flow == 1.0)
    throw SingularError("compute_t_star: flow speed 1 is singular (characteristic stalls)");
  return g.diameter() / std::abs(1.0 - u_flow);
}

bool verify_t_star(double u_flow, const Grid& g, double t, int n_samples) {
  if (!(u_flow >= 0.0)) throw ConfigError("verify_t_star: flow speed must be >= 0");
  if (u_flow == 1.0) throw SingularError("verify_t_star: flow speed 1 is singular");
  if (!(t > 0.0)) throw ConfigError("verify_t_star: need t > 0");
  if (n_samples < 1) throw ConfigError("verify_t_star: need n_samples >= 1");
  // Weyl sequence over (launch point, direction, overshoot factor); every
  // sampled backward characteristic with lag > t must sit outside the domain.
  const double a1 = std::sqrt(2.0), a2 = std::sqrt(3.0), a3 = std::sqrt(5.0), a4 = std::sqrt(7.0);
  for (int k = 1; k <= n_samples; ++k) {
    const double x = frac(k * a1) * g.lx();
    const double y = frac(k * a2) * g.ly();
    const double theta = frac(k * a3) * two_pi;
    const double s = t * (1.0 + frac(k * a4) + 1e-12);
    const double fx = x - (u_flow + std::sin(theta)) * s;
    const double fy = y - std::cos(theta) * s;
    const bool inside = fx > 0.0 && fx < g.lx() && fy > 0.0 && fy < g.ly();
    if (inside) return false;
  }
  return true;
}

DelayConfig::DelayConfig(double u_flow, double t_star, int n_theta, double dt)
    : u_flow(u_flow), n_theta(n_theta), dt(dt) {
  if (!(u_flow >= 0.0)) throw ConfigError("delay: flow speed must be >= 0");
  if (u_flow == 1.0) throw SingularError("delay: flow speed 1 is singular");
  if (n_theta < 8) throw ConfigError("delay: need n_theta >= 8");
  if (!(dt > 0.0)) throw ConfigError("delay: need dt > 0");
  if (!(t_star > 0.0)) throw ConfigError("delay: need t_star > 0");
  const double ratio = t_star / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
    throw ConfigError("delay: t_star = " + std::to_string(t_star) +
                      " is not an integer multiple of dt = " + std::to_string(dt));
  n_lag = int(rounded);
}

DelayConfig DelayConfig::certified(double u_flow, const Grid& g, int n_theta, double dt) {
  if (!(dt > 0.0)) throw ConfigError("delay: need dt > 0");
  const double ts = compute_t_star(u_flow, g);
  const int m = int(std::ceil(ts / dt - 1e-12));
  return DelayConfig(u_flow, m * dt, n_theta, dt);
}

DelayHistory::DelayHistory(const Grid& g, const DelayConfig& cfg)
    : grid_(g), dt_(cfg.dt), n_lag_(cfg.n_lag) {
  if (n_lag_ < 1) throw ConfigError("history: need at least one lag slot");
  ring_.assign(std::size_t(n_lag_) + 1, DerivSnapshot(g));
}

double DelayHistory::t_head() const {
  if (filled_ == 0) throw SequencingError("history: empty, no head time");
  return ring_[head_].t;
}

DerivSnapshot DelayHistory::make_snapshot(const ScalarField& u, double t) const {
  if (!(u.grid() == grid_)) throw ShapeError("history: snapshot grid mismatch");
  require_finite(u, "history snapshot");
  DerivSnapshot s(grid_);
  s.t = t;
  s.u = u;
  const int nx = grid_.nx(), ny = grid_.ny(), W = nx + 2, H = ny + 2;
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  const double i4h2 = 0.25 * ih2;
  const std::vector<double> p = detail::pad(u);
  s.uxx.assign(std::size_t(W) * H, 0.0);
  s.uxy.assign(std::size_t(W) * H, 0.0);
  s.uyy.assign(std::size_t(W) * H, 0.0);
  bool zero = true;
  for (int j = 0; j < ny; ++j) {
    const double* c = p.data() + std::size_t(j + 1) * W + 1;
    const std::size_t row = std::size_t(j + 1) * W + 1;
    for (int i = 0; i < nx; ++i) {
      const double xx = (c[i - 1] - 2.0 * c[i] + c[i + 1]) * ih2;
      const double yy = (c[i - W] - 2.0 * c[i] + c[i + W]) * ih2;
      const double xy = (c[i + W + 1] - c[i + W - 1] - c[i - W + 1] + c[i - W - 1]) * i4h2;
      s.uxx[row + i] = xx;
      s.uxy[row + i] = xy;
      s.uyy[row + i] = yy;
      zero = zero && xx == 0.0 && xy == 0.0 && yy == 0.0;
    }
  }
  s.is_zero = zero;
  return s;
}

void DelayHistory::seed_constant(const ScalarField& u0, double t0) {
  std::vector<ScalarField> us(std::size_t(n_lag_) + 1, u0);
  seed_samples(us, t0);
}

void DelayHistory::seed_samples(const std::vector<ScalarField>& us, double t0) {
  if (int(us.size()) != n_lag_ + 1)
    throw ShapeError("history: seeding needs exactly " + std::to_string(n_lag_ + 1) +
                     " samples, got " + std::to_string(us.size()));
  for (int m = 0; m <= n_lag_; ++m) {
    const double t = t0 - (n_lag_ - m) * dt_;
    ring_[m] = make_snapshot(us[m], t);
  }
  head_ = n_lag_;
  filled_ = n_lag_ + 1;
}

void DelayHistory::push(const ScalarField& u, double t) {
  if (filled_ == 0) throw SequencingError("history: seed before pushing");
  const double expected = t_head() + dt_;
  if (std::abs(t - expected) > 1e-9 * dt_)
    throw SequencingError("history: pushed t = " + std::to_string(t) + ", expected " +
                          std::to_string(expected));
  head_ = (head_ + 1) % int(ring_.size());
  ring_[head_] = make_snapshot(u, t);
  if (filled_ < int(ring_.size())) ++filled_;
}

const DerivSnapshot& DelayHistory::at_lag(int m) const {
  if (m < 0 || m > n_lag_) throw SequencingError("history: lag out of range");
  if (!full()) throw SequencingError("history: not fully seeded");
  const int sz = int(ring_.size());
  const int idx = ((head_ - m) % sz + sz) % sz;
  return ring_[idx];
}

ScalarField q_delay(const DelayHistory& history, const DelayConfig& cfg) {
  const Grid& g = history.grid();
  if (!history.full()) throw SequencingError("q_delay: history not fully seeded");
  if (cfg.n_theta < 8) throw ConfigError("q_delay: need n_theta >= 8");
  if (cfg.u_flow == 1.0) throw SingularError("q_delay: flow speed 1 is singular");
  if (history.lags() != cfg.n_lag || std::abs(history.dt() - cfg.dt) > 1e-12 * cfg.dt)
    throw ConfigError("q_delay: history spacing does not match the delay configuration");

  const int nx = g.nx(), ny = g.ny(), W = nx + 2, H = ny + 2;
  const double h = g.h();
  const int M = cfg.n_lag;
  const int nth = cfg.n_theta;

  std::vector<double> sin_t(nth), cos_t(nth);
  for (int k = 0; k < nth; ++k) {
    const double th = two_pi * k / nth;
    sin_t[k] = std::sin(th);
    cos_t[k] = std::cos(th);
  }

  ScalarField out(g);
  std::vector<double> combo(std::size_t(W) * H);

  for (int m = 0; m <= M; ++m) {
    const DerivSnapshot& snap = history.at_lag(m);
    if (snap.is_zero) continue;
    const double s = m * cfg.dt;
    const double ws = cfg.dt * ((m == 0 || m == M) ? 0.5 : 1.0);
    for (int k = 0; k < nth; ++k) {
      // Angular factor (1/2pi) * (2pi/n_theta) folds to 1/n_theta.
      const double weight = ws / nth;
      const double dxs = (cfg.u_flow + sin_t[k]) * s;
      const double dys = cos_t[k] * s;
      if (std::abs(dxs) >= g.lx() - h || std::abs(dys) >= g.ly() - h) continue;

      const double a = sin_t[k] * sin_t[k];
      const double b = 2.0 * sin_t[k] * cos_t[k];
      const double c = cos_t[k] * cos_t[k];
      for (std::size_t p = 0; p < combo.size(); ++p)
        combo[p] = a * snap.uxx[p] + b * snap.uxy[p] + c * snap.uyy[p];

      // Shifted bilinear sample: lattice coordinate of the foot point of node
      // i is (i+1) - sx, which splits into base index i - kx and weight pair
      // (tx on the base, 1-tx one to the right); same in y.
      const double sx = dxs / h, sy = dys / h;
      const int kx = int(std::floor(sx)), ky = int(std::floor(sy));
      const double tx = sx - std::floor(sx), ty = sy - std::floor(sy);
      const double w00 = weight * tx * ty;
      const double w10 = weight * (1.0 - tx) * ty;
      const double w01 = weight * tx * (1.0 - ty);
      const double w11 = weight * (1.0 - tx) * (1.0 - ty);

      for (int j = 0; j < ny; ++j) {
        const int q0 = j - ky;
        if (q0 < -1 || q0 > H - 1) continue;
        const bool row0 = q0 >= 0 && q0 < H;
        const bool row1 = q0 + 1 >= 0 && q0 + 1 < H;
        const double* r0 = row0 ? combo.data() + std::size_t(q0) * W : nullptr;
        const double* r1 = row1 ? combo.data() + std::size_t(q0 + 1) * W : nullptr;
        double* dst = out.data() + std::size_t(j) * nx;
        const int ilo = std::max(0, kx - 1);
        const int ihi = std::min(nx - 1, kx + W - 1);
        for (int i = ilo; i <= ihi; ++i) {
          const int p0 = i - kx;
          const bool col0 = p0 >= 0 && p0 < W;
          const bool col1 = p0 + 1 >= 0 && p0 + 1 < W;
          double acc = 0.0;
          if (row0) {
            if (col0) acc += w00 * r0[p0];
            if (col1) acc += w10 * r0[p0 + 1];
          }
          if (row1) {
            if (col0) acc += w01 * r1[p0];
            if (col1) acc += w11 * r1[p0 + 1];
          }
          dst[i] += acc;
        }
      }
    }
  }
  return out;
}

double bound_ratio(const DelayHistory& history, const DelayConfig& cfg) {
  const ScalarField q = q_delay(history, cfg);
  double num = inner(q, q);
  double den = 0.0;
  const int M = cfg.n_lag;
  for (int m = 0; m <= M; ++m) {
    const double w = cfg.dt * ((m == 0 || m == M) ? 0.5 : 1.0);
    const double nh2 = norm_h2(history.at_lag(m).u);
    den += w * nh2 * nh2;
  }
  den *= cfg.t_star();
  if (den <= 0.0) return 0.0;
  return num / den;
}

}  // namespace vkd
