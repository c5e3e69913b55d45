#include "vkdelay/field_ops.hpp"

#include <cmath>

#include "padded.hpp"

namespace vkd {

double inner(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u, w, "inner");
  const double* a = u.data();
  const double* b = w.data();
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += a[k] * b[k];
  const double h = u.grid().h();
  return h * h * s;
}

double norm_l2(const ScalarField& u) { return std::sqrt(inner(u, u)); }

double norm_h1(const ScalarField& u) {
  const ScalarField ux = deriv_x(u);
  const ScalarField uy = deriv_y(u);
  return std::sqrt(inner(u, u) + inner(ux, ux) + inner(uy, uy));
}

double norm_h2(const ScalarField& u) { return norm_l2(laplacian(u)); }

namespace {

// Applies a nodewise formula over the padded extension of u.
template <class F>
ScalarField stencil_map(const ScalarField& u, F&& f) {
  const Grid& g = u.grid();
  const int nx = g.nx(), ny = g.ny(), W = nx + 2;
  const std::vector<double> p = detail::pad(u);
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    const double* row = p.data() + std::size_t(j + 1) * W + 1;
    double* dst = out.data() + std::size_t(j) * nx;
    for (int i = 0; i < nx; ++i) dst[i] = f(row + i, W);
  }
  return out;
}

}  // namespace

ScalarField laplacian(const ScalarField& u) {
  require_finite(u, "laplacian");
  const double ih2 = 1.0 / (u.grid().h() * u.grid().h());
  return stencil_map(u, [ih2](const double* c, int W) {
    return (c[-1] + c[1] + c[-W] + c[W] - 4.0 * c[0]) * ih2;
  });
}

ScalarField bilaplacian(const ScalarField& u) { return laplacian(laplacian(u)); }

ScalarField deriv_x(const ScalarField& u) {
  const double i2h = 0.5 / u.grid().h();
  return stencil_map(u, [i2h](const double* c, int) { return (c[1] - c[-1]) * i2h; });
}

ScalarField deriv_y(const ScalarField& u) {
  const double i2h = 0.5 / u.grid().h();
  return stencil_map(u, [i2h](const double* c, int W) { return (c[W] - c[-W]) * i2h; });
}

ScalarField deriv_xx(const ScalarField& u) {
  const double ih2 = 1.0 / (u.grid().h() * u.grid().h());
  return stencil_map(u, [ih2](const double* c, int) { return (c[-1] - 2.0 * c[0] + c[1]) * ih2; });
}

ScalarField deriv_yy(const ScalarField& u) {
  const double ih2 = 1.0 / (u.grid().h() * u.grid().h());
  return stencil_map(u, [ih2](const double* c, int W) { return (c[-W] - 2.0 * c[0] + c[W]) * ih2; });
}

ScalarField deriv_xy(const ScalarField& u) {
  const double i4h2 = 0.25 / (u.grid().h() * u.grid().h());
  return stencil_map(u, [i4h2](const double* c, int W) {
    return (c[W + 1] - c[W - 1] - c[-W + 1] + c[-W - 1]) * i4h2;
  });
}

ScalarField vk_bracket(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u, w, "vk_bracket");
  const Grid& g = u.grid();
  const int nx = g.nx(), ny = g.ny(), W = nx + 2;
  const double ih2 = 1.0 / (g.h() * g.h());
  const double i4h2 = 0.25 * ih2;
  const std::vector<double> pu = detail::pad(u);
  const std::vector<double> pw = detail::pad(w);
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    const double* a = pu.data() + std::size_t(j + 1) * W + 1;
    const double* b = pw.data() + std::size_t(j + 1) * W + 1;
    double* dst = out.data() + std::size_t(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const double uxx = (a[i - 1] - 2.0 * a[i] + a[i + 1]) * ih2;
      const double uyy = (a[i - W] - 2.0 * a[i] + a[i + W]) * ih2;
      const double uxy = (a[i + W + 1] - a[i + W - 1] - a[i - W + 1] + a[i - W - 1]) * i4h2;
      const double wxx = (b[i - 1] - 2.0 * b[i] + b[i + 1]) * ih2;
      const double wyy = (b[i - W] - 2.0 * b[i] + b[i + W]) * ih2;
      const double wxy = (b[i + W + 1] - b[i + W - 1] - b[i - W + 1] + b[i - W - 1]) * i4h2;
      dst[i] = uxx * wyy + uyy * wxx - 2.0 * uxy * wxy;
    }
  }
  return out;
}

}  // namespace vkd
