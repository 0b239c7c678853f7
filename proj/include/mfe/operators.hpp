#ifndef MFE_OPERATORS_HPP
#define MFE_OPERATORS_HPP

#include <span>

#include "mfe/grid.hpp"

namespace mfe {

/// Neumaier-compensated sum in fixed index order; deterministic run to run.
double compensated_sum(std::span<const double> terms);

/// Quadrature integral h^2 * sum f.
double integrate(const ScalarField& f);

/// Quadrature inner product h^2 * sum u*w.
double quad_dot(const ScalarField& u, const ScalarField& w);

/// Quadrature L2 norm sqrt(h^2 * sum f^2).
double quad_norm(const ScalarField& f);

/// Applies A_rho v = -div(rho grad v) with the staggered-flux stencil:
/// face weights are arithmetic means of adjacent rho samples, periodic wrap.
/// Conservative: integrate(A_rho v) telescopes to zero.
ScalarField weighted_laplacian_apply(const WeightField& rho, const ScalarField& v);

/// ||v||_rho^2 = sum over faces of rho_face * (dv)^2, the same fluxes as
/// weighted_laplacian_apply, so <A_rho v, v> equals this identically.
double dirichlet_energy(const WeightField& rho, const ScalarField& v);

/// Unweighted Dirichlet energy, shorthand for rho == 1.
double dirichlet_energy(const ScalarField& v);

/// Solves A_rho u = b on the zero-mean subspace by conjugate gradients.
/// b is projected to zero mean; the result has zero mean. rel_tol is on the
/// residual relative to ||b||.
ScalarField poisson_solve(const WeightField& rho, const ScalarField& b,
                          double rel_tol = 1e-10, int max_iters = 0);

}  // namespace mfe

#endif  // MFE_OPERATORS_HPP
