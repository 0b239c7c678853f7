#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfe/diagnostics.hpp"
#include "mfe/operators.hpp"
#include "test_util.hpp"

using namespace mfe;
using namespace mfe::test;

TEST_CASE("lambda_rho gate on the acceptance grid") {
  TorusGrid g(kTwoPi, 64);

  // mu1 V = 39.4467... at N = 64 (analytic limit 4 pi^2 = 39.4784...)
  GateReport in = lambda_rho_gate({26.0, 2.0}, g);
  CHECK(in.in_lambda_rho);
  CHECK(in.sum_margin > 0.0);
  CHECK(in.max_margin > 0.0);
  CHECK(in.mu1 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(in.volume == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
  CHECK_FALSE(in.coercive_regime);

  GateReport low = lambda_rho_gate({20.0, 2.0}, g);
  CHECK_FALSE(low.in_lambda_rho);  // max(alpha) below 8 pi
  CHECK(low.max_margin < 0.0);
  CHECK(low.sum_margin > 0.0);
  CHECK(low.coercive_regime);

  GateReport high = lambda_rho_gate({30.0, 12.0}, g);
  CHECK_FALSE(high.in_lambda_rho);  // sum 42 above mu1 V
  CHECK(high.sum_margin < 0.0);
  CHECK(high.max_margin > 0.0);

  GateReport both = lambda_rho_gate({26.0, 12.0}, g);
  CHECK(both.in_lambda_rho);  // 38 < mu1 V and 26 > 8 pi

  // the report reconstructs its own verdict
  for (const GateReport& r : {in, low, high, both})
    CHECK(r.in_lambda_rho == (r.sum_margin > 0.0 && r.max_margin > 0.0));
}

TEST_CASE("exponential masses") {
  TorusGrid g(kTwoPi, 16);
  ExpMass zero = exp_mass(ScalarField(g));
  CHECK(zero.plus == doctest::Approx(4 * kPi * kPi).epsilon(1e-13));
  CHECK(zero.minus == doctest::Approx(4 * kPi * kPi).epsilon(1e-13));

  for (std::uint64_t s = 0; s < 10; ++s) {
    ScalarField v = mean_zero_rough(g, 20 + s, 2.0);
    ExpMass m = exp_mass(v);
    CHECK(m.ln_plus >= std::log(g.volume()) - 1e-12);   // Jensen
    CHECK(m.ln_minus >= std::log(g.volume()) - 1e-12);

    ExpMass swapped = exp_mass(-1.0 * v);
    CHECK(swapped.ln_plus == m.ln_minus);  // exact swap
    CHECK(swapped.ln_minus == m.ln_plus);
  }
}

TEST_CASE("Moser-Trudinger deficits") {
  TorusGrid g(kTwoPi, 32);
  WeightField rho = make_weight_preset(g, "cosine:0.5");
  MtDeficit zero = moser_trudinger_deficit(ScalarField(g), rho);
  CHECK(std::fabs(zero.classical) < 1e-13);
  CHECK(std::fabs(zero.weighted) < 1e-13);

  // D_rho <= D: the weighted energy dominates rho_min times the plain one
  for (const char* preset : {"const:1", "cosine:0.5", "bump:2:0.3"}) {
    WeightField w = make_weight_preset(g, preset);
    for (std::uint64_t s = 0; s < 10; ++s) {
      ScalarField v = mean_zero_rough(g, 40 + s, 1.5);
      MtDeficit d = moser_trudinger_deficit(v, w);
      CHECK(d.weighted <= d.classical + 1e-12);
    }
  }
}

TEST_CASE("concentration of the flat field matches the ball area") {
  TorusGrid g(kTwoPi, 32);
  const double r = g.length() / 8.0;
  ConcentrationReport rep = concentration(ScalarField(g), r);

  // oracle: count nodes inside the periodic ball by direct enumeration
  int count = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (g.periodic_dist2(g.coord(i), g.coord(j), 0.0, 0.0) <= r * r) ++count;
  const double h = g.spacing();
  const double expected = count * h * h / g.volume();
  CHECK(rep.max_mass_fraction == doctest::Approx(expected).epsilon(1e-12));

  // and the area ratio up to the stated discretization slack
  const double area_ratio = kPi * r * r / g.volume();
  const double slack = 2.0 * h * (2.0 * kPi * r) / g.volume();
  CHECK(std::fabs(rep.max_mass_fraction - area_ratio) <= slack);

  // flat field: every center ties, lowest row-major index wins
  CHECK(rep.center_i == 0);
  CHECK(rep.center_j == 0);
  CHECK(rep.sup_v == 0.0);
}

TEST_CASE("concentrated bubble captures most of the mass") {
  TorusGrid g(kTwoPi, 64);
  const double sigma = g.length() / 16.0;
  const double x0 = g.length() / 2.0;
  ScalarField v(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double d2 = g.periodic_dist2(g.coord(i), g.coord(j), x0, x0);
      v(i, j) = std::log(sigma * sigma / ((sigma * sigma + d2) * (sigma * sigma + d2)));
    }
  v = project_zero_mean(3.0 * v);
  ConcentrationReport rep = concentration(v, 2.0 * sigma);
  CHECK(rep.max_mass_fraction > 0.5);
  CHECK(g.coord(rep.center_i) == doctest::Approx(x0));
  CHECK(g.coord(rep.center_j) == doctest::Approx(x0));
}

TEST_CASE("concentration is monotone in the radius and saturates") {
  TorusGrid g(kTwoPi, 24);
  for (std::uint64_t s = 0; s < 5; ++s) {
    ScalarField v = mean_zero_rough(g, 60 + s, 2.0);
    const double small = concentration(v, g.length() / 8.0).max_mass_fraction;
    const double big = concentration(v, g.length() / 4.0).max_mass_fraction;
    CHECK(big >= small);
    CHECK(small >= 0.0);
    CHECK(big <= 1.0);

    // r >= L sqrt(2)/2 covers the whole torus
    const double full = concentration(v, 0.7072 * g.length()).max_mass_fraction;
    CHECK(full == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("invalid radius is rejected") {
  TorusGrid g(kTwoPi, 8);
  ScalarField v(g);
  CHECK_THROWS_AS(concentration(v, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(concentration(v, -1.0), InvalidArgumentError);
  CHECK_THROWS_AS(concentration(v, g.length()), InvalidArgumentError);
}
