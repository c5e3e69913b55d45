#pragma once

#include "vkdelay/field_ops.hpp"

namespace vkd {

struct SolveReport {
  int iterations = 0;          // total inner CG iterations
  int refinement_rounds = 0;   // outer refinement rounds (biharmonic solve only)
  double relative_residual = 0.0;  // certified ||rhs - A x|| / ||rhs||
};

// Solves bilaplacian(v) = rhs for the clamped discrete operator with a
// certified relative residual <= tol (measured on the biharmonic system
// itself, not on the inner Poisson solves). Zero rhs returns the zero field.
ScalarField solve_bilaplacian(const ScalarField& rhs, double tol,
                              SolveReport* report = nullptr);

// Airy stream function: bilaplacian(v) = -[u, w].
ScalarField airy(const ScalarField& u, const ScalarField& w, double tol,
                 SolveReport* report = nullptr);

// Conjugate gradients on alpha*I + beta*bilaplacian (alpha, beta > 0), the
// operator of the semi-implicit time step.
ScalarField solve_shifted_bilaplacian(double alpha, double beta,
                                      const ScalarField& b,
                                      const ScalarField& x0, double tol,
                                      SolveReport* report = nullptr);

}  // namespace vkd
