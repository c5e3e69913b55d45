#pragma once

#include "vkdelay/grid.hpp"

namespace vkd {

// Discrete L2 inner product, quadrature weight h^2.
double inner(const ScalarField& u, const ScalarField& w);
double norm_l2(const ScalarField& u);
// sqrt(||u||^2 + ||grad u||^2) with centered first differences.
double norm_h1(const ScalarField& u);
// ||laplacian(u)||, the clamped-plate H2-equivalent norm.
double norm_h2(const ScalarField& u);

// 5-point Laplacian with zero boundary trace.
ScalarField laplacian(const ScalarField& u);
// Clamped discrete biharmonic, exactly laplacian(laplacian(u)); hence
// <bilaplacian(u), w> == <laplacian(u), laplacian(w)> for all u, w.
ScalarField bilaplacian(const ScalarField& u);

// Centered first derivatives (zero boundary extension).
ScalarField deriv_x(const ScalarField& u);
ScalarField deriv_y(const ScalarField& u);
// Centered second derivatives (zero boundary extension).
ScalarField deriv_xx(const ScalarField& u);
ScalarField deriv_yy(const ScalarField& u);
ScalarField deriv_xy(const ScalarField& u);

// von Karman bracket [u,w] = u_xx w_yy + u_yy w_xx - 2 u_xy w_xy.
ScalarField vk_bracket(const ScalarField& u, const ScalarField& w);

}  // namespace vkd
