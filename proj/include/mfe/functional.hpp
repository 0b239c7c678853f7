#ifndef MFE_FUNCTIONAL_HPP
#define MFE_FUNCTIONAL_HPP

#include <cmath>

#include "mfe/grid.hpp"

namespace mfe {

/// Vortex interaction strengths (alpha1: positive side, alpha2: negative side).
struct InteractionParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  void validate() const;
};

/// Log-domain partition integrals ln z1 = ln \int e^v, ln z2 = ln \int e^{-v}.
/// Kept as logarithms; exponentiate only for reporting.
struct PartitionFunctions {
  double ln_z1 = 0.0;
  double ln_z2 = 0.0;

  double z1() const { return std::exp(ln_z1); }
  double z2() const { return std::exp(ln_z2); }
};

/// Energy value with its decomposition and the constrained-gradient norm.
struct FunctionalReport {
  double value = 0.0;      // I = kinetic - alpha1*log_term1 - alpha2*log_term2
  double kinetic = 0.0;    // (1/2) ||v||_rho^2
  double z1 = 0.0;
  double z2 = 0.0;
  double log_term1 = 0.0;  // ln(z1/V)
  double log_term2 = 0.0;  // ln(z2/V)
  double grad_norm = 0.0;  // quadrature L2 norm of the constrained gradient
};

/// v minus its mean: the projection onto the zero-integral constraint space.
ScalarField project_zero_mean(const ScalarField& v);

/// Both partition integrals in stable log-sum-exp form; finite for any finite
/// v (tested up to max|v| ~ 1e4). Throws InvalidFieldError on NaN/Inf input.
PartitionFunctions partition_functions(const ScalarField& v);

/// I(v) alone, without the gradient; the hot path for line searches.
double functional_value(const ScalarField& v, const WeightField& rho,
                        const InteractionParams& p);

/// Full evaluation of the energy functional at v, including the constrained
/// gradient norm. The formula is applied to v as given; callers working on
/// the constraint space project first (a constant shift changes I by
/// (alpha2 - alpha1) * shift).
FunctionalReport evaluate(const ScalarField& v, const WeightField& rho,
                          const InteractionParams& p);

/// Constrained gradient of I at v:
///   g = A_rho v - alpha1 (e^v / z1 - 1/V) + alpha2 (e^{-v} / z2 - 1/V),
/// realized as the zero-mean projection of the raw variation. Vanishes
/// exactly at discrete solutions of the mean field equation.
ScalarField gradient(const ScalarField& v, const WeightField& rho,
                     const InteractionParams& p);

/// Quadrature L2 norm of gradient(); the Palais-Smale residual measure.
double residual_norm(const ScalarField& v, const WeightField& rho,
                     const InteractionParams& p);

}  // namespace mfe

#endif  // MFE_FUNCTIONAL_HPP
