#include "vkdelay/grid.hpp"

#include <cmath>
#include <string>

namespace vkd {

Grid::Grid(double lx, double ly, int nx, int ny) : lx_(lx), ly_(ly), nx_(nx), ny_(ny) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw ConfigError("grid: side lengths must be positive, got lx=" + std::to_string(lx) +
                      " ly=" + std::to_string(ly));
  if (nx < 5 || ny < 5)
    throw ConfigError("grid: need at least 5 interior nodes per direction, got nx=" +
                      std::to_string(nx) + " ny=" + std::to_string(ny));
  const double hx = lx / (nx + 1);
  const double hy = ly / (ny + 1);
  if (std::abs(hx - hy) > 1e-9 * hx)
    throw ConfigError("grid: mesh must be square, lx/(nx+1)=" + std::to_string(hx) +
                      " != ly/(ny+1)=" + std::to_string(hy));
  h_ = hx;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o, "field +=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o, "field -=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

bool ScalarField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!(a.grid() == b.grid()))
    throw ShapeError(std::string(what) + ": fields live on different grids");
}

void require_finite(const ScalarField& a, const char* what) {
  if (!a.all_finite())
    throw DataError(std::string(what) + ": field contains non-finite values");
}

void axpy(ScalarField& y, double s, const ScalarField& x) {
  require_same_grid(y, x, "axpy");
  double* yd = y.data();
  const double* xd = x.data();
  for (std::size_t k = 0; k < y.size(); ++k) yd[k] += s * xd[k];
}

}  // namespace vkd
