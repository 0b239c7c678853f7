#include "mfe/mountain_pass.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mfe/operators.hpp"

namespace mfe {

void SolverConfig::validate() const {
  if (path_nodes < 3) throw InvalidArgumentError("SolverConfig: need at least 3 path nodes");
  if (max_outer_iters < 1 || endpoint_scaling_budget < 1 || reparametrize_every < 1 ||
      stall_window < 1)
    throw InvalidArgumentError("SolverConfig: iteration counts must be positive");
  if (!(residual_tol > 0.0) || !(initial_step > 0.0) || !(step_shrink > 0.0) ||
      !(step_shrink < 1.0) || !(sufficient_decrease > 0.0) || !(stall_rel_tol > 0.0))
    throw InvalidArgumentError("SolverConfig: tolerances and steps must be positive");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::budget_exhausted: return "budget-exhausted";
    case SolveStatus::no_negative_endpoint: return "no-negative-endpoint";
  }
  return "unknown";
}

int PathState::max_index() const {
  int best = 0;
  for (int k = 1; k < static_cast<int>(node_energy.size()); ++k)
    if (node_energy[k] > node_energy[best]) best = k;  // strict: lowest index wins ties
  return best;
}

namespace {

constexpr double kMinStep = 1e-12;
constexpr double kPreconditionTol = 1e-6;
constexpr int kPolishSteps = 200;

ScalarField bubble_profile(const TorusGrid& g, double sigma) {
  const double x0 = g.length() / 2.0;
  const double s2 = sigma * sigma;
  ScalarField phi(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double d2 = g.periodic_dist2(g.coord(i), g.coord(j), x0, x0);
      phi(i, j) = std::log(s2 / ((s2 + d2) * (s2 + d2)));
    }
  return phi;
}

/// sigma halvings from L/4 down to the lattice scale h/4; sub-cell widths
/// turn the bubble into the discrete spike that carries the concentration
/// limit on a fixed grid.
std::vector<double> sigma_schedule(const TorusGrid& g) {
  std::vector<double> out;
  const double floor_sigma = 0.999 * g.length() / (4.0 * g.n());
  for (double s = g.length() / 4.0; s >= floor_sigma; s /= 2.0) out.push_back(s);
  return out;
}

double h1_norm(const WeightField& rho, const ScalarField& u) {
  return std::sqrt(std::max(dirichlet_energy(rho, u), 0.0));
}

ScalarField precondition(const WeightField& rho, const ScalarField& g) {
  return poisson_solve(rho, g, kPreconditionTol);
}

/// Backtracking Sobolev-descent step on one node. Returns false when the
/// step underflows without satisfying sufficient decrease.
bool descend_node(ScalarField& v, double& energy, const WeightField& rho,
                  const InteractionParams& p, const SolverConfig& cfg) {
  const ScalarField g = gradient(v, rho, p);
  const ScalarField d = -1.0 * precondition(rho, g);
  const double slope = quad_dot(d, g);
  if (slope == 0.0) return true;  // critical node, nothing to do
  double s = cfg.initial_step;
  while (s > kMinStep) {
    ScalarField vn = v;
    vn.axpy(s, d);
    vn = project_zero_mean(vn);
    const double en = functional_value(vn, rho, p);
    if (en <= energy + cfg.sufficient_decrease * s * slope) {
      v = std::move(vn);
      energy = en;
      return true;
    }
    s *= cfg.step_shrink;
  }
  return false;
}

/// Climbing-image step: the tangential component of the preconditioned
/// gradient is reversed so the node ascends onto the saddle while descending
/// transversally. u is the unstable-direction estimate, H1_rho-normalized,
/// refined each call by shifted power iteration with finite-difference
/// Hessian-vector products (first-order evaluations only).
bool climb_node(ScalarField& v, double& energy, ScalarField& u, const WeightField& rho,
                const InteractionParams& p, const SolverConfig& cfg) {
  const ScalarField g = gradient(v, rho, p);
  const double r0 = quad_norm(g);
  if (r0 == 0.0) return true;

  const double eps = 1e-4 * (1.0 + quad_norm(v));
  for (int pass = 0; pass < 2; ++pass) {
    ScalarField vp = v;
    vp.axpy(eps, u);
    ScalarField vm = v;
    vm.axpy(-eps, u);
    ScalarField hu = gradient(vp, rho, p) - gradient(vm, rho, p);
    hu *= 1.0 / (2.0 * eps);
    ScalarField w = -1.0 * precondition(rho, hu);  // (2I - P H) u
    w.axpy(2.0, u);
    const double nw = h1_norm(rho, w);
    if (nw > 0.0) {
      w *= 1.0 / nw;
      u = std::move(w);
    }
  }

  const ScalarField pg = precondition(rho, g);
  ScalarField d = -1.0 * pg;
  d.axpy(2.0 * quad_dot(g, u), u);  // <Pg, u>_{H1_rho} = <g, u>_{L2}

  double s = cfg.initial_step;
  while (s > kMinStep) {
    ScalarField vn = v;
    vn.axpy(s, d);
    vn = project_zero_mean(vn);
    if (residual_norm(vn, rho, p) < r0) {
      energy = functional_value(vn, rho, p);
      v = std::move(vn);
      return true;
    }
    s *= cfg.step_shrink;
  }
  return false;
}

/// Resamples a polyline to m nodes at equal H1_rho arc-length spacing.
/// Endpoints are preserved exactly.
std::vector<ScalarField> resample_polyline(const std::vector<ScalarField>& nodes, int m,
                                           const WeightField& rho) {
  const int n_in = static_cast<int>(nodes.size());
  std::vector<double> seg(n_in - 1), cum(n_in, 0.0);
  for (int i = 0; i + 1 < n_in; ++i) {
    seg[i] = h1_norm(rho, nodes[i + 1] - nodes[i]);
    cum[i + 1] = cum[i] + seg[i];
  }
  const double total = cum.back();
  std::vector<ScalarField> out;
  out.reserve(m);
  out.push_back(nodes.front());
  if (total <= 0.0) {
    for (int k = 1; k + 1 < m; ++k) out.push_back(nodes.front());
    out.push_back(nodes.back());
    return out;
  }
  for (int k = 1; k + 1 < m; ++k) {
    const double target = total * k / (m - 1);
    int j = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
    j = std::clamp(j, 0, n_in - 2);
    const double w = seg[j] > 0.0 ? (target - cum[j]) / seg[j] : 0.0;
    ScalarField node = nodes[j];
    node *= 1.0 - w;
    node.axpy(w, nodes[j + 1]);
    out.push_back(project_zero_mean(node));
  }
  out.push_back(nodes.back());
  return out;
}

void reparametrize(PathState& path, const WeightField& rho, const InteractionParams& p) {
  const int m = static_cast<int>(path.nodes.size());
  path.nodes = resample_polyline(path.nodes, m, rho);
  for (int k = 1; k + 1 < m; ++k)
    path.node_energy[k] = functional_value(path.nodes[k], rho, p);
  path.level_estimate = path.node_energy[path.max_index()];
}

/// The shared deformation loop: plain Sobolev-descent sweeps with cadenced
/// reparametrization until the level stalls, then climbing refinement of the
/// max node. Other interior nodes keep descending throughout.
MountainPassResult run_minimax(PathState path, const WeightField& rho,
                               const InteractionParams& p, const SolverConfig& cfg,
                               const ProgressFn& progress) {
  MountainPassResult res;
  res.status = SolveStatus::budget_exhausted;

  bool climbing = false;
  ScalarField u(path.nodes.front().grid());
  double best_residual = std::numeric_limits<double>::infinity();
  ScalarField best = path.nodes[path.max_index()];
  double best_level = path.level_estimate;
  bool hit_tol = false;

  for (int sweep = 1; sweep <= cfg.max_outer_iters; ++sweep) {
    res.iterations = sweep;
    if (!climbing) {
      deform_path(path, rho, p, cfg);
    } else {
      const int kmax = path.max_index();
      path.stalled_nodes.clear();
      for (int k = 1; k + 1 < static_cast<int>(path.nodes.size()); ++k) {
        bool ok;
        if (k == kmax)
          ok = climb_node(path.nodes[k], path.node_energy[k], u, rho, p, cfg);
        else
          ok = descend_node(path.nodes[k], path.node_energy[k], rho, p, cfg);
        if (!ok) path.stalled_nodes.push_back(k);
      }
      ++path.sweeps_done;
      path.level_estimate = path.node_energy[path.max_index()];
    }

    const int kmax = path.max_index();
    const ScalarField& top = path.nodes[kmax];
    const double r = residual_norm(top, rho, p);
    const PartitionFunctions z = partition_functions(top);
    const PsSample sample{sweep, path.node_energy[kmax], r, z.ln_z1, z.ln_z2};
    res.ps_trajectory.push_back(sample);
    if (progress) progress(sample);

    if (r < best_residual) {
      best_residual = r;
      best = top;
      best_level = path.node_energy[kmax];
    }
    if (r <= cfg.residual_tol) {
      hit_tol = true;
      break;
    }

    if (!climbing && static_cast<int>(res.ps_trajectory.size()) > cfg.stall_window) {
      const double now = res.ps_trajectory.back().energy;
      const double then =
          res.ps_trajectory[res.ps_trajectory.size() - 1 - cfg.stall_window].energy;
      if (std::fabs(now - then) <= cfg.stall_rel_tol * (1.0 + std::fabs(now))) {
        climbing = true;
        const int k = std::clamp(path.max_index(), 1,
                                 static_cast<int>(path.nodes.size()) - 2);
        u = path.nodes[k + 1] - path.nodes[k - 1];
        const double nu = h1_norm(rho, u);
        if (nu > 0.0)
          u *= 1.0 / nu;
        else
          u = path.nodes[k];  // degenerate; power iteration will straighten it
      }
    }
  }

  // final polish: climbing steps keeping the lowest-residual iterate
  if (hit_tol) {
    if (h1_norm(rho, u) == 0.0) u = best;
    double level = best_level;
    ScalarField current = best;
    for (int it = 0; it < kPolishSteps; ++it) {
      if (best_residual <= 0.25 * cfg.residual_tol) break;
      if (!climb_node(current, level, u, rho, p, cfg)) break;
      const double r = residual_norm(current, rho, p);
      if (r < best_residual) {
        best_residual = r;
        best = current;
        best_level = level;
      }
    }
    res.status = SolveStatus::converged;
  }

  res.solution = std::move(best);
  res.level = best_level;
  res.residual = best_residual;
  return res;
}

}  // namespace

std::optional<ScalarField> find_negative_endpoint(const WeightField& rho,
                                                  const InteractionParams& p,
                                                  const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  const TorusGrid& g = rho.grid();
  const double sign = p.alpha1 >= p.alpha2 ? 1.0 : -1.0;
  std::vector<ScalarField> profiles;
  for (double s : sigma_schedule(g)) {
    ScalarField phi = bubble_profile(g, s);
    phi *= sign;
    profiles.push_back(project_zero_mean(phi));
  }

  double t = 1.0;
  for (int doubling = 0; doubling < cfg.endpoint_scaling_budget; ++doubling) {
    bool found = false;
    double best_val = 0.0;
    ScalarField best(g);
    for (const ScalarField& phi : profiles) {
      ScalarField v = project_zero_mean(t * phi);
      const double val = functional_value(v, rho, p);
      if (val < 0.0 && (!found || val < best_val)) {
        found = true;
        best_val = val;
        best = std::move(v);
      }
    }
    if (found) return best;
    t *= 2.0;
  }
  return std::nullopt;
}

PathState initialize_path(const ScalarField& v_star, int m, const WeightField& rho,
                          const InteractionParams& p) {
  if (m < 3) throw InvalidArgumentError("initialize_path: need at least 3 nodes");
  if (rho.grid() != v_star.grid()) throw GridMismatchError("weight and endpoint grids differ");
  PathState path;
  path.nodes.reserve(m);
  path.node_energy.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double frac = static_cast<double>(k) / (m - 1);
    path.nodes.push_back(project_zero_mean(frac * v_star));
    path.node_energy.push_back(functional_value(path.nodes.back(), rho, p));
  }
  path.endpoint_energy = path.node_energy.back();
  path.level_estimate = path.node_energy[path.max_index()];
  return path;
}

void deform_path(PathState& path, const WeightField& rho, const InteractionParams& p,
                 const SolverConfig& cfg) {
  cfg.validate();
  path.stalled_nodes.clear();
  const int m = static_cast<int>(path.nodes.size());
  for (int k = 1; k + 1 < m; ++k) {
    if (!descend_node(path.nodes[k], path.node_energy[k], rho, p, cfg))
      path.stalled_nodes.push_back(k);
  }
  ++path.sweeps_done;
  if (path.sweeps_done % cfg.reparametrize_every == 0) {
    reparametrize(path, rho, p);
  } else {
    path.level_estimate = path.node_energy[path.max_index()];
  }
}

MountainPassResult solve(const WeightField& rho, const InteractionParams& p,
                         const SolverConfig& cfg, const ProgressFn& progress) {
  p.validate();
  cfg.validate();
  MountainPassResult res;
  std::optional<ScalarField> v_star = find_negative_endpoint(rho, p, cfg);
  if (!v_star) {
    res.status = SolveStatus::no_negative_endpoint;
    return res;
  }
  PathState path = initialize_path(*v_star, cfg.path_nodes, rho, p);
  return run_minimax(std::move(path), rho, p, cfg, progress);
}

std::vector<MountainPassResult> continuation_solve(const WeightField& rho,
                                                   const std::vector<InteractionParams>& schedule,
                                                   const SolverConfig& cfg,
                                                   const ProgressFn& progress) {
  if (schedule.empty()) throw InvalidArgumentError("continuation_solve: empty schedule");
  for (const InteractionParams& p : schedule) p.validate();
  bool up = true, down = true;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const double a = std::max(schedule[i - 1].alpha1, schedule[i - 1].alpha2);
    const double b = std::max(schedule[i].alpha1, schedule[i].alpha2);
    up = up && b >= a;
    down = down && b <= a;
  }
  if (!up && !down)
    throw InvalidArgumentError("continuation_solve: schedule must be monotone in max(alpha)");
  cfg.validate();

  std::vector<MountainPassResult> results;
  results.reserve(schedule.size());
  for (std::size_t idx = 0; idx < schedule.size(); ++idx) {
    const InteractionParams& p = schedule[idx];
    const bool have_warm = idx > 0 && results.back().status == SolveStatus::converged &&
                           results.back().solution.has_value();
    if (!have_warm) {
      results.push_back(solve(rho, p, cfg, progress));
      continue;
    }

    const ScalarField& prev = *results.back().solution;
    std::optional<ScalarField> v_star;
    double t = 1.0;
    for (int doubling = 0; doubling < cfg.endpoint_scaling_budget; ++doubling) {
      ScalarField cand = project_zero_mean(t * prev);
      if (functional_value(cand, rho, p) < 0.0) {
        v_star = std::move(cand);
        break;
      }
      t *= 2.0;
    }
    if (!v_star) v_star = find_negative_endpoint(rho, p, cfg);
    if (!v_star) {
      MountainPassResult res;
      res.status = SolveStatus::no_negative_endpoint;
      results.push_back(std::move(res));
      continue;
    }

    // thread the initial path through the previous solution
    std::vector<ScalarField> polyline;
    polyline.push_back(ScalarField(rho.grid()));
    polyline.push_back(prev);
    polyline.push_back(*v_star);
    std::vector<ScalarField> nodes = resample_polyline(polyline, cfg.path_nodes, rho);

    PathState path;
    path.nodes = std::move(nodes);
    for (const ScalarField& node : path.nodes)
      path.node_energy.push_back(functional_value(node, rho, p));
    path.endpoint_energy = path.node_energy.back();
    path.level_estimate = path.node_energy[path.max_index()];
    results.push_back(run_minimax(std::move(path), rho, p, cfg, progress));
  }
  return results;
}

}  // namespace mfe
