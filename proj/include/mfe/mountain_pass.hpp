#ifndef MFE_MOUNTAIN_PASS_HPP
#define MFE_MOUNTAIN_PASS_HPP

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "mfe/functional.hpp"
#include "mfe/grid.hpp"

namespace mfe {

struct SolverConfig {
  int path_nodes = 21;             // nodes discretizing the path, >= 3
  int max_outer_iters = 5000;      // deformation sweeps
  double residual_tol = 1e-5;      // on the max-node gradient L2 norm
  double initial_step = 0.5;       // backtracking line search
  double step_shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int endpoint_scaling_budget = 40;  // doublings of the bubble amplitude
  int reparametrize_every = 10;      // sweeps between arc-length rebalances
  unsigned long long rng_seed = 0;
  // saddle refinement kicks in once the level has stopped moving
  int stall_window = 30;
  double stall_rel_tol = 1e-3;

  void validate() const;
};

enum class SolveStatus { converged, budget_exhausted, no_negative_endpoint };
const char* to_string(SolveStatus s);

/// One per-sweep progress record, sampled at the current max node. The
/// sequence of (energy, residual) pairs is the numerical Palais-Smale
/// trajectory; ln z1/ln z2 monitor the exponential masses along it.
struct PsSample {
  int sweep = 0;
  double energy = 0.0;
  double residual = 0.0;
  double ln_z1 = 0.0;
  double ln_z2 = 0.0;
};

/// Discretized path from 0 to the negative-energy endpoint. Endpoints are
/// pinned; interior nodes move. node_energy caches I at each node.
struct PathState {
  std::vector<ScalarField> nodes;
  std::vector<double> node_energy;
  double endpoint_energy = 0.0;
  double level_estimate = 0.0;  // max over node energies
  int sweeps_done = 0;
  std::vector<int> stalled_nodes;  // line-search failures in the last sweep

  int max_index() const;  // lowest index on ties
};

struct MountainPassResult {
  std::optional<ScalarField> solution;
  double level = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<PsSample> ps_trajectory;
  SolveStatus status = SolveStatus::no_negative_endpoint;
  int iterations = 0;
};

using ProgressFn = std::function<void(const PsSample&)>;

/// Searches t * phi_sigma over amplitude doublings t = 1, 2, 4, ... and a
/// sigma schedule halving from L/4 down to the lattice scale, where
/// phi_sigma = ln(sigma^2 / (sigma^2 + d^2)^2) is the concentrating bubble
/// centered at the torus midpoint, zero-mean projected, signed toward the
/// larger interaction parameter. Returns the first amplitude level that
/// yields I < 0 (most negative sigma there), or nullopt if the functional
/// stays nonnegative over the whole budget - the coercive regime.
std::optional<ScalarField> find_negative_endpoint(const WeightField& rho,
                                                  const InteractionParams& p,
                                                  const SolverConfig& cfg = {});

/// Linear path nodes[k] = (k/(m-1)) v*, all zero-mean, energies cached.
PathState initialize_path(const ScalarField& v_star, int m, const WeightField& rho,
                          const InteractionParams& p);

/// One deformation sweep: every interior node takes a backtracking step
/// along the negative H1_rho (Sobolev) gradient; endpoints stay fixed; every
/// reparametrize_every sweeps the nodes are redistributed to equal H1_rho
/// arc-length spacing along the polyline.
void deform_path(PathState& path, const WeightField& rho, const InteractionParams& p,
                 const SolverConfig& cfg = {});

/// Full minimax run: negative endpoint, path deformation, and - once the
/// level stalls - climbing-image refinement of the max node (tangential
/// component of the preconditioned gradient reversed, unstable direction
/// tracked by finite-difference power iteration). Converged means the
/// max-node residual fell below residual_tol; the returned solution is the
/// best-residual iterate after a final polish.
MountainPassResult solve(const WeightField& rho, const InteractionParams& p,
                         const SolverConfig& cfg = {}, const ProgressFn& progress = {});

/// Monotone parameter continuation with warm starts: schedule[0] solves from
/// scratch; each later entry rescales the previous solution into an endpoint
/// and threads the initial path through it. Per-entry failures are recorded
/// in that entry's result and the continuation proceeds.
std::vector<MountainPassResult> continuation_solve(const WeightField& rho,
                                                   const std::vector<InteractionParams>& schedule,
                                                   const SolverConfig& cfg = {},
                                                   const ProgressFn& progress = {});

}  // namespace mfe

#endif  // MFE_MOUNTAIN_PASS_HPP
