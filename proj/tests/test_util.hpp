#ifndef MFE_TEST_UTIL_HPP
#define MFE_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "mfe/functional.hpp"
#include "mfe/grid.hpp"

namespace mfe::test {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// iid uniform samples in [-amp, amp]
inline ScalarField rough_field(const TorusGrid& g, std::uint64_t seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amp, amp);
  ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = unif(rng);
  return f;
}

/// band-limited field: a few random low Fourier modes, resolution-independent
inline ScalarField smooth_field(const TorusGrid& g, std::uint64_t seed, double amp = 1.0,
                                int max_mode = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double w = kTwoPi / g.length();
  struct Mode { int kx, ky; double cc, cs, sc, ss; };
  std::vector<Mode> modes;
  for (int kx = 0; kx <= max_mode; ++kx)
    for (int ky = 0; ky <= max_mode; ++ky) {
      if (kx == 0 && ky == 0) continue;
      modes.push_back({kx, ky, unif(rng), unif(rng), unif(rng), unif(rng)});
    }
  ScalarField f(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double x = w * g.coord(i), y = w * g.coord(j);
      double s = 0.0;
      for (const Mode& m : modes)
        s += m.cc * std::cos(m.kx * x) * std::cos(m.ky * y) +
             m.cs * std::cos(m.kx * x) * std::sin(m.ky * y) +
             m.sc * std::sin(m.kx * x) * std::cos(m.ky * y) +
             m.ss * std::sin(m.kx * x) * std::sin(m.ky * y);
      f(i, j) = amp * s;
    }
  return f;
}

inline ScalarField mean_zero_rough(const TorusGrid& g, std::uint64_t seed, double amp = 1.0) {
  return project_zero_mean(rough_field(g, seed, amp));
}

inline WeightField unit_weight(const TorusGrid& g) {
  return make_weight_preset(g, "const:1");
}

}  // namespace mfe::test

#endif  // MFE_TEST_UTIL_HPP
