#ifndef MFE_DIAGNOSTICS_HPP
#define MFE_DIAGNOSTICS_HPP

#include "mfe/functional.hpp"
#include "mfe/grid.hpp"
#include "mfe/spectrum.hpp"

namespace mfe {

/// 8 pi, the critical interaction strength.
inline constexpr double kEightPi = 25.132741228718345;

/// Outcome of the existence-theorem parameter gate.
struct GateReport {
  bool in_lambda_rho = false;   // sum_margin > 0 and max_margin > 0
  bool coercive_regime = false; // both alphas within [0, 8 pi]
  double sum_margin = 0.0;      // mu1 * V - (alpha1 + alpha2); positive passes
  double max_margin = 0.0;      // max(alpha1, alpha2) - 8 pi; positive passes
  double mu1 = 0.0;
  double volume = 0.0;
};

/// Both theorem inequalities evaluated with the computed discrete mu1.
GateReport lambda_rho_gate(const InteractionParams& p, const TorusGrid& grid,
                           const EigenOptions& eig = {});

struct ExpMass {
  double plus = 0.0;   // integral of e^v
  double minus = 0.0;  // integral of e^{-v}
  double ln_plus = 0.0;
  double ln_minus = 0.0;
};

/// Exponential masses via the log-sum-exp path; sampled along Palais-Smale
/// trajectories to monitor the boundedness the compactness argument needs.
ExpMass exp_mass(const ScalarField& v);

struct MtDeficit {
  double classical = 0.0;  // ln(z1/V) - (1/16pi) * unweighted energy
  double weighted = 0.0;   // ln(z1/V) - (1/(16pi rho_min)) * ||v||_rho^2
};

/// Moser-Trudinger deficits. The weighted variant never exceeds the
/// classical one since ||v||_rho^2 >= rho_min * |grad v|^2 face by face.
MtDeficit moser_trudinger_deficit(const ScalarField& v, const WeightField& rho);

/// Where the exponential mass sits: max over ball centers of the mass
/// fraction inside the periodic ball of radius r, for both e^v/z1 and
/// e^{-v}/z2 sides.
struct ConcentrationReport {
  double radius = 0.0;
  double max_mass_fraction = 0.0;  // e^v side
  int center_i = 0, center_j = 0;
  double sup_v = 0.0;
  double max_mass_fraction_neg = 0.0;  // e^{-v} side
  int center_neg_i = 0, center_neg_j = 0;
  double inf_v = 0.0;
};

/// Node-sampled ball scan; argmax ties break to the lowest row-major index.
/// Radius must satisfy 0 < r < L.
ConcentrationReport concentration(const ScalarField& v, double radius);

}  // namespace mfe

#endif  // MFE_DIAGNOSTICS_HPP
