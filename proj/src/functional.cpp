#include "mfe/functional.hpp"

#include <cmath>
#include <vector>

#include "mfe/operators.hpp"

namespace mfe {

void InteractionParams::validate() const {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw InvalidArgumentError("interaction parameters must be finite and >= 0");
}

ScalarField project_zero_mean(const ScalarField& v) {
  ScalarField out = v;
  out += -integrate(v) / v.grid().volume();
  return out;
}

namespace {

double log_sum_exp_integral(const std::vector<double>& vals, double h, double scale) {
  // ln( h^2 * sum exp(scale * vals) ), guarded against overflow
  double m = scale * vals[0];
  for (double v : vals) {
    if (!std::isfinite(v)) throw InvalidFieldError("partition_functions: non-finite sample");
    m = std::max(m, scale * v);
  }
  std::vector<double> terms(vals.size());
  for (std::size_t k = 0; k < vals.size(); ++k) terms[k] = std::exp(scale * vals[k] - m);
  return 2.0 * std::log(h) + m + std::log(compensated_sum(terms));
}

}  // namespace

PartitionFunctions partition_functions(const ScalarField& v) {
  const double h = v.grid().spacing();
  PartitionFunctions z;
  z.ln_z1 = log_sum_exp_integral(v.values(), h, +1.0);
  z.ln_z2 = log_sum_exp_integral(v.values(), h, -1.0);
  return z;
}

double functional_value(const ScalarField& v, const WeightField& rho,
                        const InteractionParams& p) {
  const PartitionFunctions z = partition_functions(v);
  const double ln_vol = std::log(v.grid().volume());
  const double kinetic = 0.5 * dirichlet_energy(rho, v);
  // grouped so that swapping (alpha1, alpha2) against v -> -v commutes bitwise
  return kinetic - (p.alpha1 * (z.ln_z1 - ln_vol) + p.alpha2 * (z.ln_z2 - ln_vol));
}

FunctionalReport evaluate(const ScalarField& v, const WeightField& rho,
                          const InteractionParams& p) {
  p.validate();
  const PartitionFunctions z = partition_functions(v);
  const double ln_vol = std::log(v.grid().volume());

  FunctionalReport rep;
  rep.kinetic = 0.5 * dirichlet_energy(rho, v);
  rep.z1 = z.z1();
  rep.z2 = z.z2();
  rep.log_term1 = z.ln_z1 - ln_vol;
  rep.log_term2 = z.ln_z2 - ln_vol;
  rep.value = rep.kinetic - (p.alpha1 * rep.log_term1 + p.alpha2 * rep.log_term2);
  rep.grad_norm = residual_norm(v, rho, p);
  return rep;
}

ScalarField gradient(const ScalarField& v, const WeightField& rho,
                     const InteractionParams& p) {
  p.validate();
  if (rho.grid() != v.grid()) throw GridMismatchError("weight and field grids differ");
  const PartitionFunctions z = partition_functions(v);

  ScalarField g = weighted_laplacian_apply(rho, v);
  // e^{v - ln z1} stays bounded by 1/h^2 even for violently concentrated v;
  // ordered so that conjugating (v, a1, a2) -> (-v, a2, a1) negates g bitwise
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] -= p.alpha1 * std::exp(v[k] - z.ln_z1) - p.alpha2 * std::exp(-v[k] - z.ln_z2);
  }
  // projection reproduces the -1/V counterterms of the raw variation
  g += -integrate(g) / v.grid().volume();
  return g;
}

double residual_norm(const ScalarField& v, const WeightField& rho,
                     const InteractionParams& p) {
  return quad_norm(gradient(v, rho, p));
}

}  // namespace mfe
