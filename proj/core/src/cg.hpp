#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace vkd::detail {

struct CgOutcome {
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;  // true residual, recomputed after the loop
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Conjugate gradients for an SPD operator given as apply(in, out).
// Convergence is certified on the recomputed true residual; if the recursion
// residual lied (heavy roundoff), the loop restarts from the current iterate.
template <class Apply>
CgOutcome cg_solve(const Apply& apply, const std::vector<double>& b,
                   std::vector<double>& x, double rel_tol, int max_iter) {
  const std::size_t n = b.size();
  CgOutcome out;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    out.converged = true;
    return out;
  }
  std::vector<double> r(n), p(n), q(n);

  for (int restart = 0; restart < 4; ++restart) {
    apply(x, q);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
    double rr = dot(r, r);
    out.relative_residual = std::sqrt(rr) / bnorm;
    if (out.relative_residual <= rel_tol) {
      out.converged = true;
      return out;
    }
    p = r;
    while (out.iterations < max_iter) {
      apply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) break;  // lost positivity to roundoff; restart
      const double alpha = rr / pq;
      for (std::size_t k = 0; k < n; ++k) x[k] += alpha * p[k];
      for (std::size_t k = 0; k < n; ++k) r[k] -= alpha * q[k];
      const double rr_new = dot(r, r);
      ++out.iterations;
      if (std::sqrt(rr_new) <= rel_tol * bnorm) break;
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    apply(x, q);
    double tr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = b[k] - q[k];
      tr += d * d;
    }
    out.relative_residual = std::sqrt(tr) / bnorm;
    if (out.relative_residual <= rel_tol) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= max_iter) break;
  }
  return out;
}

}  // namespace vkd::detail
