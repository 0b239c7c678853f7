#include "mfe/operators.hpp"

#include <cmath>
#include <vector>

namespace mfe {

double compensated_sum(std::span<const double> terms) {
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::fabs(sum) >= std::fabs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

double integrate(const ScalarField& f) {
  const double h = f.grid().spacing();
  return h * h * compensated_sum(f.values());
}

double quad_dot(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u, w);
  const std::size_t n = u.size();
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) terms[k] = u[k] * w[k];
  const double h = u.grid().spacing();
  return h * h * compensated_sum(terms);
}

double quad_norm(const ScalarField& f) { return std::sqrt(quad_dot(f, f)); }

ScalarField weighted_laplacian_apply(const WeightField& rho, const ScalarField& v) {
  if (rho.grid() != v.grid()) throw GridMismatchError("weight and field grids differ");
  const TorusGrid& g = v.grid();
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  ScalarField out(g);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    const int im = (i == 0) ? n - 1 : i - 1;
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1 == n) ? 0 : j + 1;
      const int jm = (j == 0) ? n - 1 : j - 1;
      const double c = v(i, j);
      const double flux =
          0.5 * (rho(i, j) + rho(ip, j)) * (v(ip, j) - c) -
          0.5 * (rho(im, j) + rho(i, j)) * (c - v(im, j)) +
          0.5 * (rho(i, j) + rho(i, jp)) * (v(i, jp) - c) -
          0.5 * (rho(i, jm) + rho(i, j)) * (c - v(i, jm));
      out(i, j) = -inv_h2 * flux;
    }
  }
  return out;
}

double dirichlet_energy(const WeightField& rho, const ScalarField& v) {
  if (rho.grid() != v.grid()) throw GridMismatchError("weight and field grids differ");
  const TorusGrid& g = v.grid();
  const int n = g.n();
  // (dv/h)^2 * h^2 = (dv)^2, so no h factors appear
  std::vector<double> terms;
  terms.reserve(2 * g.size());
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1 == n) ? 0 : j + 1;
      const double dx = v(ip, j) - v(i, j);
      const double dy = v(i, jp) - v(i, j);
      terms.push_back(0.5 * (rho(i, j) + rho(ip, j)) * dx * dx);
      terms.push_back(0.5 * (rho(i, j) + rho(i, jp)) * dy * dy);
    }
  }
  return compensated_sum(terms);
}

double dirichlet_energy(const ScalarField& v) {
  const TorusGrid& g = v.grid();
  const int n = g.n();
  std::vector<double> terms;
  terms.reserve(2 * g.size());
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1 == n) ? 0 : j + 1;
      const double dx = v(ip, j) - v(i, j);
      const double dy = v(i, jp) - v(i, j);
      terms.push_back(dx * dx + dy * dy);
    }
  }
  return compensated_sum(terms);
}

ScalarField poisson_solve(const WeightField& rho, const ScalarField& b, double rel_tol,
                          int max_iters) {
  if (rho.grid() != b.grid()) throw GridMismatchError("weight and field grids differ");
  const TorusGrid& g = b.grid();
  if (max_iters <= 0) max_iters = 8 * static_cast<int>(g.size());

  // right-hand side restricted to the zero-mean subspace, where A_rho is SPD
  ScalarField r = b;
  r += -integrate(b) / g.volume();

  ScalarField x(g);
  const double b_norm = quad_norm(r);
  if (b_norm == 0.0) return x;
  const double tol = rel_tol * b_norm;

  ScalarField p = r;
  double rs = quad_dot(r, r);
  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rs) <= tol) break;
    ScalarField ap = weighted_laplacian_apply(rho, p);
    const double p_ap = quad_dot(p, ap);
    if (!(p_ap > 0.0)) break;  // numerical breakdown; return best iterate
    const double alpha = rs / p_ap;
    x.axpy(alpha, p);
    r.axpy(-alpha, ap);
    const double rs_next = quad_dot(r, r);
    const double beta = rs_next / rs;
    rs = rs_next;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
  }
  x += -integrate(x) / g.volume();  // keep the iterate exactly mean-free
  return x;
}

}  // namespace mfe
