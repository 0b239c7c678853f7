#ifndef MFE_SPECTRUM_HPP
#define MFE_SPECTRUM_HPP

#include "mfe/grid.hpp"

namespace mfe {

struct EigenOptions {
  double rel_tol = 1e-8;
  int max_iters = 10000;
  unsigned long long seed = 12345;
};

/// Smallest nonzero eigenvalue of the weighted operator A_rho restricted to
/// the zero-mean subspace, by inverse power iteration (CG inner solves).
/// Throws ConvergenceError (carrying the last estimate) past the budget.
double first_eigenvalue(const WeightField& rho, const EigenOptions& opts = {});

/// Smallest nonzero eigenvalue of the unweighted Laplace operator, the
/// mu_1(M) entering the parameter gate. Analytically (2 pi / L)^2 as N grows.
double first_eigenvalue(const TorusGrid& grid, const EigenOptions& opts = {});

}  // namespace mfe

#endif  // MFE_SPECTRUM_HPP
