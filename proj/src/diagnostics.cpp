#include "mfe/diagnostics.hpp"

#include <cmath>
#include <vector>

#include "mfe/operators.hpp"

namespace mfe {

GateReport lambda_rho_gate(const InteractionParams& p, const TorusGrid& grid,
                           const EigenOptions& eig) {
  p.validate();
  GateReport rep;
  rep.mu1 = first_eigenvalue(grid, eig);
  rep.volume = grid.volume();
  rep.sum_margin = rep.mu1 * rep.volume - (p.alpha1 + p.alpha2);
  rep.max_margin = std::max(p.alpha1, p.alpha2) - kEightPi;
  rep.in_lambda_rho = rep.sum_margin > 0.0 && rep.max_margin > 0.0;
  rep.coercive_regime = p.alpha1 <= kEightPi && p.alpha2 <= kEightPi;
  return rep;
}

ExpMass exp_mass(const ScalarField& v) {
  const PartitionFunctions z = partition_functions(v);
  ExpMass m;
  m.ln_plus = z.ln_z1;
  m.ln_minus = z.ln_z2;
  m.plus = z.z1();
  m.minus = z.z2();
  return m;
}

MtDeficit moser_trudinger_deficit(const ScalarField& v, const WeightField& rho) {
  if (rho.grid() != v.grid()) throw GridMismatchError("weight and field grids differ");
  const PartitionFunctions z = partition_functions(v);
  const double log_avg = z.ln_z1 - std::log(v.grid().volume());
  const double inv_16pi = 1.0 / (2.0 * kEightPi);
  MtDeficit d;
  d.classical = log_avg - inv_16pi * dirichlet_energy(v);
  d.weighted = log_avg - inv_16pi / rho.rho_min() * dirichlet_energy(rho, v);
  return d;
}

ConcentrationReport concentration(const ScalarField& v, double radius) {
  const TorusGrid& g = v.grid();
  if (!(radius > 0.0) || !(radius < g.length()))
    throw InvalidArgumentError("concentration: radius must lie in (0, L)");
  const int n = g.n();
  const double h = g.spacing();
  const PartitionFunctions z = partition_functions(v);

  // normalized node masses e^{v - ln z} h^2, stable for concentrated fields
  std::vector<double> mass_pos(g.size()), mass_neg(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    mass_pos[k] = std::exp(v[k] - z.ln_z1) * h * h;
    mass_neg[k] = std::exp(-v[k] - z.ln_z2) * h * h;
  }

  // offsets with periodic distance <= radius, shared by every center
  std::vector<std::pair<int, int>> offsets;
  const double r2 = radius * radius;
  for (int di = 0; di < n; ++di) {
    double dx = std::min(di, n - di) * h;
    for (int dj = 0; dj < n; ++dj) {
      double dy = std::min(dj, n - dj) * h;
      if (dx * dx + dy * dy <= r2) offsets.emplace_back(di, dj);
    }
  }

  ConcentrationReport rep;
  rep.radius = radius;
  rep.sup_v = v.max();
  rep.inf_v = v.min();
  double best_pos = -1.0, best_neg = -1.0;
  for (int ci = 0; ci < n; ++ci) {
    for (int cj = 0; cj < n; ++cj) {
      std::vector<double> tp, tn;
      tp.reserve(offsets.size());
      tn.reserve(offsets.size());
      for (const auto& [di, dj] : offsets) {
        const std::size_t k = g.index(ci + di, cj + dj);
        tp.push_back(mass_pos[k]);
        tn.push_back(mass_neg[k]);
      }
      const double fp = compensated_sum(tp);
      const double fn = compensated_sum(tn);
      if (fp > best_pos) {
        best_pos = fp;
        rep.center_i = ci;
        rep.center_j = cj;
      }
      if (fn > best_neg) {
        best_neg = fn;
        rep.center_neg_i = ci;
        rep.center_neg_j = cj;
      }
    }
  }
  rep.max_mass_fraction = std::min(best_pos, 1.0);
  rep.max_mass_fraction_neg = std::min(best_neg, 1.0);
  return rep;
}

}  // namespace mfe
