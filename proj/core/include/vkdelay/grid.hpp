#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vkdelay/errors.hpp"

namespace vkd {

// Uniform square mesh of interior nodes on the rectangle (0,lx) x (0,ly).
// The spacing satisfies lx/(nx+1) = ly/(ny+1) = h; the boundary ring carries
// the clamped conditions u = dn(u) = 0 and is not stored.
class Grid {
 public:
  Grid(double lx, double ly, int nx, int ny);

  static Grid unit_square(int n) { return Grid(1.0, 1.0, n, n); }

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  std::size_t size() const { return std::size_t(nx_) * std::size_t(ny_); }

  // Coordinates of interior node (i, j), i in [0,nx), j in [0,ny).
  double x(int i) const { return (i + 1) * h_; }
  double y(int j) const { return (j + 1) * h_; }

  double diameter() const { return std::sqrt(lx_ * lx_ + ly_ * ly_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double lx_ = 0, ly_ = 0, h_ = 0;
  int nx_ = 0, ny_ = 0;
};

// Nodal values over the interior of a Grid, stored row-major: index j*nx + i.
class ScalarField {
 public:
  explicit ScalarField(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}

  const Grid& grid() const { return grid_; }
  int nx() const { return grid_.nx(); }
  int ny() const { return grid_.ny(); }
  std::size_t size() const { return v_.size(); }

  double& operator()(int i, int j) { return v_[std::size_t(j) * grid_.nx() + i]; }
  double operator()(int i, int j) const { return v_[std::size_t(j) * grid_.nx() + i]; }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> v_;
};

// Throws ShapeError unless both fields live on the same grid.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);
// Throws DataError if the field contains NaN or infinity.
void require_finite(const ScalarField& a, const char* what);

// y += s * x
void axpy(ScalarField& y, double s, const ScalarField& x);

// Field sampled from a function of the node coordinates.
template <class F>
ScalarField sample(const Grid& g, F&& f) {
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

}  // namespace vkd
