#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfe/mountain_pass.hpp"
#include "mfe/operators.hpp"
#include "test_util.hpp"

using namespace mfe;
using namespace mfe::test;

namespace {

// small grid keeps the solves fast; the lattice-scale bubble family reaches
// negative energy at alpha = 26 for every N in {16, 32, 48, 64}
SolverConfig fast_cfg() {
  SolverConfig cfg;
  return cfg;
}

}  // namespace

TEST_CASE("no endpoint when the functional is coercive") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  CHECK_FALSE(find_negative_endpoint(rho, {0.0, 0.0}).has_value());
  CHECK_FALSE(find_negative_endpoint(rho, {20.0, 2.0}).has_value());
  CHECK_FALSE(find_negative_endpoint(rho, {10.0, 5.0}).has_value());
}

TEST_CASE("no endpoint at (20, 2) on the acceptance grid") {
  TorusGrid g(kTwoPi, 64);
  CHECK_FALSE(find_negative_endpoint(unit_weight(g), {20.0, 2.0}).has_value());
}

TEST_CASE("endpoint exists above the concentration threshold") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  auto v = find_negative_endpoint(rho, {26.0, 2.0});
  REQUIRE(v.has_value());
  CHECK(functional_value(*v, rho, {26.0, 2.0}) < 0.0);
  CHECK(std::fabs(integrate(*v)) <= 1e-11 * quad_norm(*v));

  // sign points toward the larger parameter
  auto w = find_negative_endpoint(rho, {2.0, 26.0});
  REQUIRE(w.has_value());
  double mirror = 0.0;
  for (std::size_t k = 0; k < v->size(); ++k)
    mirror = std::max(mirror, std::fabs((*v)[k] + (*w)[k]));
  CHECK(mirror == 0.0);  // conjugation mirrors the whole search bitwise
}

TEST_CASE("path initialization") {
  TorusGrid g(kTwoPi, 16);
  WeightField rho = unit_weight(g);
  const InteractionParams p{26.0, 2.0};
  auto v_star = find_negative_endpoint(rho, p);
  REQUIRE(v_star.has_value());

  PathState path = initialize_path(*v_star, 3, rho, p);
  REQUIRE(path.nodes.size() == 3);
  CHECK(std::fabs(path.node_energy[0]) < 1e-12);  // I(0) = 0 up to rounding
  CHECK(path.endpoint_energy < 0.0);
  CHECK(path.level_estimate >= 0.0);  // the path contains the zero field
  for (std::size_t k = 0; k < v_star->size(); ++k) {
    CHECK(path.nodes[0][k] == 0.0);
    CHECK(path.nodes[1][k] == doctest::Approx(0.5 * (*v_star)[k]).epsilon(1e-12));
    CHECK(path.nodes[2][k] == (*v_star)[k]);
  }
  CHECK_THROWS_AS(initialize_path(*v_star, 2, rho, p), InvalidArgumentError);
}

TEST_CASE("a path of critical points does not move") {
  TorusGrid g(kTwoPi, 16);
  WeightField rho = unit_weight(g);
  const InteractionParams p{26.0, 2.0};
  // v = 0 is critical; a 3-node path of zeros is a fixed point of the sweep
  PathState path;
  for (int k = 0; k < 3; ++k) {
    path.nodes.emplace_back(g);
    path.node_energy.push_back(0.0);
  }
  deform_path(path, rho, p, fast_cfg());
  for (const ScalarField& node : path.nodes)
    for (std::size_t k = 0; k < node.size(); ++k) CHECK(node[k] == 0.0);
  CHECK(path.stalled_nodes.empty());
}

TEST_CASE("descent sweeps lower the level and pin the endpoints") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  const InteractionParams p{26.0, 2.0};
  SolverConfig cfg = fast_cfg();
  auto v_star = find_negative_endpoint(rho, p);
  REQUIRE(v_star.has_value());
  PathState path = initialize_path(*v_star, 9, rho, p);

  const ScalarField first = path.nodes.front();
  const ScalarField last = path.nodes.back();
  const double level0 = path.level_estimate;

  deform_path(path, rho, p, cfg);
  CHECK(path.level_estimate < level0);  // strict descent on the first sweep

  // level is nonincreasing across pure-descent sweeps (no reparametrization
  // fires before sweep 10)
  double prev = path.level_estimate;
  for (int sweep = 2; sweep < cfg.reparametrize_every; ++sweep) {
    deform_path(path, rho, p, cfg);
    CHECK(path.level_estimate <= prev);
    prev = path.level_estimate;
  }

  for (int sweep = path.sweeps_done; sweep < 30; ++sweep) deform_path(path, rho, p, cfg);

  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(path.nodes.front()[k] == first[k]);  // bitwise pinned
    CHECK(path.nodes.back()[k] == last[k]);
  }
  for (const ScalarField& node : path.nodes)
    CHECK(std::fabs(integrate(node)) <= 1e-12 * (1.0 + quad_norm(node)));
}

TEST_CASE("solve converges in the theorem regime and certifies the solution") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  const InteractionParams p{26.0, 2.0};
  const SolverConfig cfg = fast_cfg();
  MountainPassResult res = solve(rho, p, cfg);

  REQUIRE(res.status == SolveStatus::converged);
  REQUIRE(res.solution.has_value());
  CHECK(res.residual <= cfg.residual_tol);

  // certificate re-verified through functional_core, not solver caches
  const double fresh = residual_norm(*res.solution, rho, p);
  CHECK(fresh <= 2.0 * cfg.residual_tol);

  CHECK(res.level > 1e-6);
  CHECK(dirichlet_energy(rho, *res.solution) > 0.0);
  CHECK(std::sqrt(dirichlet_energy(rho, *res.solution)) > 0.1);
  CHECK_FALSE(res.ps_trajectory.empty());
  CHECK(res.iterations == res.ps_trajectory.back().sweep);

  // Palais-Smale character: late residuals are small, energies settle near c
  const PsSample& tail = res.ps_trajectory.back();
  CHECK(tail.residual <= cfg.residual_tol);
  CHECK(std::fabs(tail.energy - res.level) <= 0.05 * (1.0 + std::fabs(res.level)));
}

TEST_CASE("conjugate parameters give the negated solution") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  MountainPassResult a = solve(rho, {26.0, 2.0}, fast_cfg());
  MountainPassResult b = solve(rho, {2.0, 26.0}, fast_cfg());
  REQUIRE(a.status == SolveStatus::converged);
  REQUIRE(b.status == SolveStatus::converged);
  double diff = 0.0;
  for (std::size_t k = 0; k < a.solution->size(); ++k)
    diff = std::max(diff, std::fabs((*a.solution)[k] + (*b.solution)[k]));
  CHECK(diff <= 1e-12);
  CHECK(a.level == b.level);
}

TEST_CASE("coercive parameters report no negative endpoint") {
  TorusGrid g(kTwoPi, 32);
  MountainPassResult res = solve(unit_weight(g), {10.0, 5.0}, fast_cfg());
  CHECK(res.status == SolveStatus::no_negative_endpoint);
  CHECK_FALSE(res.solution.has_value());
  CHECK(res.ps_trajectory.empty());
}

TEST_CASE("identical configuration reproduces identical results") {
  TorusGrid g(kTwoPi, 16);
  // the central dip lowers the local concentration cost, so the weighted
  // preconditioner path is exercised on a run that actually converges
  WeightField rho = make_weight_preset(g, "bump:-0.5:0.8");
  MountainPassResult a = solve(rho, {26.0, 2.0}, fast_cfg());
  MountainPassResult b = solve(rho, {26.0, 2.0}, fast_cfg());
  REQUIRE(a.status == SolveStatus::converged);
  REQUIRE(a.status == b.status);
  CHECK(a.level == b.level);
  CHECK(a.residual == b.residual);
  REQUIRE(a.ps_trajectory.size() == b.ps_trajectory.size());
  for (std::size_t i = 0; i < a.ps_trajectory.size(); ++i)
    CHECK(a.ps_trajectory[i].energy == b.ps_trajectory[i].energy);
  if (a.solution && b.solution)
    for (std::size_t k = 0; k < a.solution->size(); ++k)
      CHECK((*a.solution)[k] == (*b.solution)[k]);
}

TEST_CASE("budget exhaustion carries the best iterate") {
  TorusGrid g(kTwoPi, 16);
  SolverConfig cfg = fast_cfg();
  cfg.max_outer_iters = 3;
  MountainPassResult res = solve(unit_weight(g), {26.0, 2.0}, cfg);
  CHECK(res.status == SolveStatus::budget_exhausted);
  REQUIRE(res.solution.has_value());
  CHECK(res.iterations == 3);
  CHECK(std::isfinite(res.residual));
}

TEST_CASE("continuation warm starts beat cold starts") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = unit_weight(g);
  const SolverConfig cfg = fast_cfg();

  CHECK_THROWS_AS(continuation_solve(rho, {}, cfg), InvalidArgumentError);
  CHECK_THROWS_AS(
      continuation_solve(rho, {{26.0, 2.0}, {30.0, 2.0}, {27.0, 2.0}}, cfg),
      InvalidArgumentError);  // not monotone in max(alpha)

  // a single-entry schedule is exactly solve()
  std::vector<MountainPassResult> single = continuation_solve(rho, {{26.0, 2.0}}, cfg);
  MountainPassResult direct = solve(rho, {26.0, 2.0}, cfg);
  REQUIRE(single.size() == 1);
  CHECK(single[0].status == direct.status);
  CHECK(single[0].level == direct.level);
  CHECK(single[0].iterations == direct.iterations);

  std::vector<MountainPassResult> chain =
      continuation_solve(rho, {{26.0, 2.0}, {27.0, 2.0}}, cfg);
  REQUIRE(chain.size() == 2);
  REQUIRE(chain[0].status == SolveStatus::converged);
  REQUIRE(chain[1].status == SolveStatus::converged);

  MountainPassResult cold = solve(rho, {27.0, 2.0}, cfg);
  REQUIRE(cold.status == SolveStatus::converged);
  CHECK(chain[1].iterations < cold.iterations);
}

TEST_CASE("continuation records per-entry failures and proceeds") {
  TorusGrid g(kTwoPi, 16);
  std::vector<MountainPassResult> out =
      continuation_solve(unit_weight(g), {{10.0, 2.0}, {26.0, 2.0}}, fast_cfg());
  REQUIRE(out.size() == 2);
  CHECK(out[0].status == SolveStatus::no_negative_endpoint);
  CHECK(out[1].status == SolveStatus::converged);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  cfg.path_nodes = 2;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);
  cfg = SolverConfig{};
  cfg.residual_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);
  cfg = SolverConfig{};
  cfg.step_shrink = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);
}
