#include "mfe/spectrum.hpp"

#include <cmath>
#include <random>

#include "mfe/operators.hpp"

namespace mfe {

double first_eigenvalue(const WeightField& rho, const EigenOptions& opts) {
  const TorusGrid& g = rho.grid();

  // random start, projected to the zero-mean subspace
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ScalarField x(g);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = unif(rng);
  x += -integrate(x) / g.volume();
  double nx = quad_norm(x);
  x *= 1.0 / nx;

  double lambda = 0.0;
  double prev = -1.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    ScalarField y = poisson_solve(rho, x, 1e-12);
    const double ny = quad_norm(y);
    if (!(ny > 0.0)) throw ConvergenceError("first_eigenvalue: inverse iteration broke down", lambda);
    y *= 1.0 / ny;
    ScalarField ay = weighted_laplacian_apply(rho, y);
    lambda = quad_dot(y, ay);  // Rayleigh quotient, y has unit quadrature norm
    x = std::move(y);
    if (it > 0 && std::fabs(lambda - prev) <= opts.rel_tol * std::fabs(lambda)) return lambda;
    prev = lambda;
  }
  throw ConvergenceError("first_eigenvalue: iteration budget exceeded", lambda);
}

double first_eigenvalue(const TorusGrid& grid, const EigenOptions& opts) {
  ScalarField ones(grid);
  for (std::size_t k = 0; k < ones.size(); ++k) ones[k] = 1.0;
  return first_eigenvalue(WeightField(std::move(ones)), opts);
}

}  // namespace mfe
