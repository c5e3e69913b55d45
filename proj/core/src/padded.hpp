#pragma once

#include <vector>

#include "vkdelay/grid.hpp"

namespace vkd::detail {

// Copy of a field extended by one ring of zeros: (nx+2) x (ny+2), row-major,
// entry (p, q) at physical point (p*h, q*h). Interior node (i, j) sits at
// padded index (i+1, j+1). The zero ring realizes the clamped boundary trace
// and the extension by zero outside the closure of the domain.
inline void pad(const ScalarField& u, std::vector<double>& out) {
  const int nx = u.nx(), ny = u.ny();
  const int W = nx + 2, H = ny + 2;
  out.assign(std::size_t(W) * H, 0.0);
  for (int j = 0; j < ny; ++j) {
    const double* src = u.data() + std::size_t(j) * nx;
    double* dst = out.data() + std::size_t(j + 1) * W + 1;
    for (int i = 0; i < nx; ++i) dst[i] = src[i];
  }
}

inline std::vector<double> pad(const ScalarField& u) {
  std::vector<double> out;
  pad(u, out);
  return out;
}

}  // namespace vkd::detail
