#include "mfe/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "mfe/diagnostics.hpp"
#include "mfe/operators.hpp"
#include "mfe/spectrum.hpp"

namespace mfe {

namespace {

/// 17 significant digits: doubles round-trip exactly and reruns are
/// byte-identical.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_num(double x) { return std::isfinite(x) ? num(x) : "null"; }

const TorusGrid& require_grid(const RunConfig& cfg, TorusGrid& storage) {
  if (!cfg.grid) throw InvalidArgumentError("config: 'grid' is required for this command");
  storage = TorusGrid(cfg.grid->length, cfg.grid->n);
  return storage;
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir.string() + "'");
}

std::string gate_json(const GateReport& gate) {
  std::ostringstream os;
  os << "{\"in_lambda_rho\": " << (gate.in_lambda_rho ? "true" : "false")
     << ", \"mu1\": " << num(gate.mu1) << ", \"volume\": " << num(gate.volume)
     << ", \"sum_margin\": " << num(gate.sum_margin)
     << ", \"max_margin\": " << num(gate.max_margin) << "}";
  return os.str();
}

std::string concentration_json(const ScalarField& v, const std::vector<double>& radii) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const ConcentrationReport rep = concentration(v, radii[i]);
    const TorusGrid& g = v.grid();
    if (i) os << ", ";
    os << "{\"r\": " << num(rep.radius) << ", \"fraction\": " << num(rep.max_mass_fraction)
       << ", \"center\": [" << num(g.coord(rep.center_i)) << ", " << num(g.coord(rep.center_j))
       << "], \"sup_v\": " << num(rep.sup_v) << "}";
  }
  os << "]";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string trajectory_csv(const std::vector<PsSample>& traj) {
  std::ostringstream os;
  os << "iteration,energy,residual,ln_z1,ln_z2\n";
  for (const PsSample& s : traj)
    os << s.sweep << "," << num(s.energy) << "," << num(s.residual) << "," << num(s.ln_z1)
       << "," << num(s.ln_z2) << "\n";
  return os.str();
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return kExitOk;
    case SolveStatus::no_negative_endpoint: return kExitNoEndpoint;
    case SolveStatus::budget_exhausted: return kExitBudget;
  }
  return kExitConfigError;
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  TorusGrid grid(1.0, 4);
  const TorusGrid& g = require_grid(cfg, grid);
  if (!cfg.params) throw InvalidArgumentError("config: solve needs 'params'");
  const WeightField rho = resolve_weight(g, cfg.weight);
  cfg.solver.validate();

  const GateReport gate = lambda_rho_gate(*cfg.params, g);
  std::cerr << "gate: in_lambda_rho=" << (gate.in_lambda_rho ? "yes" : "no")
            << " sum_margin=" << gate.sum_margin << " max_margin=" << gate.max_margin
            << (gate.coercive_regime ? " (coercive box)" : "") << "\n";

  const ProgressFn progress = [](const PsSample& s) {
    if (s.sweep % 100 == 0)
      std::cerr << "sweep " << s.sweep << " level=" << s.energy << " residual=" << s.residual
                << "\n";
  };
  const MountainPassResult res = solve(rho, *cfg.params, cfg.solver, progress);

  std::ostringstream json;
  json << "{\n";
  json << "  \"status\": \"" << to_string(res.status) << "\",\n";
  const bool have_solution = res.solution.has_value();
  json << "  \"c\": " << (have_solution ? json_num(res.level) : "null") << ",\n";
  json << "  \"residual\": " << (have_solution ? json_num(res.residual) : "null") << ",\n";
  json << "  \"iterations\": " << res.iterations << ",\n";
  json << "  \"gate\": " << gate_json(gate) << ",\n";
  if (!res.ps_trajectory.empty()) {
    double max_plus = -std::numeric_limits<double>::infinity();
    double max_minus = max_plus;
    for (const PsSample& s : res.ps_trajectory) {
      max_plus = std::max(max_plus, s.ln_z1);
      max_minus = std::max(max_minus, s.ln_z2);
    }
    json << "  \"exp_mass\": {\"max_plus\": " << json_num(std::exp(max_plus))
         << ", \"max_minus\": " << json_num(std::exp(max_minus)) << "},\n";
  } else {
    json << "  \"exp_mass\": {\"max_plus\": null, \"max_minus\": null},\n";
  }
  if (have_solution) {
    const double L = g.length();
    json << "  \"concentration\": "
         << concentration_json(*res.solution, {L / 16.0, L / 8.0, L / 4.0}) << "\n";
  } else {
    json << "  \"concentration\": null\n";
  }
  json << "}\n";

  ensure_out_dir(cfg);
  if (cfg.wants("json")) write_text(cfg.out_dir / "result.json", json.str());
  if (cfg.wants("csv") && !res.ps_trajectory.empty())
    write_text(cfg.out_dir / "trajectory.csv", trajectory_csv(res.ps_trajectory));
  if (cfg.wants("field") && have_solution)
    write_field(cfg.out_dir / "solution.field", *res.solution);

  std::cerr << "status: " << to_string(res.status) << " iterations=" << res.iterations;
  if (have_solution) std::cerr << " c=" << res.level << " residual=" << res.residual;
  std::cerr << "\n";
  return status_exit_code(res.status);
}

int cmd_sweep(const RunConfig& cfg) {
  TorusGrid grid(1.0, 4);
  const TorusGrid& g = require_grid(cfg, grid);
  if (!cfg.sweep) throw InvalidArgumentError("config: sweep needs 'sweep' ranges");
  const WeightField rho = resolve_weight(g, cfg.weight);
  cfg.solver.validate();
  const std::vector<double> a1 = cfg.sweep->alpha1.values();
  const std::vector<double> a2 = cfg.sweep->alpha2.values();

  // mu1 is a property of the grid alone; compute once
  const double mu1 = first_eigenvalue(g);
  const double gate_sum = mu1 * g.volume();

  struct Row {
    double alpha1, alpha2;
    bool in_gate;
    SolveStatus status;
    double c = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    double sup_v = std::numeric_limits<double>::quiet_NaN();
    double mass_fraction = std::numeric_limits<double>::quiet_NaN();
  };
  const std::size_t n_points = a1.size() * a2.size();
  std::vector<Row> rows(n_points);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n_points) return;
      const std::size_t i = k / a2.size(), j = k % a2.size();
      InteractionParams p{a1[i], a2[j]};
      SolverConfig sv = cfg.solver;
      sv.rng_seed = cfg.solver.rng_seed + k;  // row-major point index
      Row& row = rows[k];
      row.alpha1 = p.alpha1;
      row.alpha2 = p.alpha2;
      row.in_gate = (p.alpha1 + p.alpha2 < gate_sum) &&
                    (std::max(p.alpha1, p.alpha2) > kEightPi);
      const MountainPassResult res = solve(rho, p, sv);
      row.status = res.status;
      if (res.solution) {
        row.c = res.level;
        row.residual = res.residual;
        row.sup_v = res.solution->max();
        row.mass_fraction =
            concentration(*res.solution, g.length() / 8.0).max_mass_fraction;
      }
    }
  };

  unsigned n_threads = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_points));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ostringstream csv;
  csv << "alpha1,alpha2,in_lambda_rho,status,c,residual,sup_v,max_mass_fraction\n";
  for (const Row& r : rows) {
    csv << num(r.alpha1) << "," << num(r.alpha2) << "," << (r.in_gate ? "true" : "false")
        << "," << to_string(r.status) << "," << num(r.c) << "," << num(r.residual) << ","
        << num(r.sup_v) << "," << num(r.mass_fraction) << "\n";
  }
  ensure_out_dir(cfg);
  write_text(cfg.out_dir / "sweep.csv", csv.str());
  std::cerr << "sweep: " << n_points << " points -> " << (cfg.out_dir / "sweep.csv") << "\n";
  return kExitOk;
}

int cmd_diagnose(const std::filesystem::path& field_file, const RunConfig& cfg) {
  if (!cfg.params) throw InvalidArgumentError("config: diagnose needs 'params'");
  const ScalarField v = read_field(field_file);
  const TorusGrid& g = v.grid();
  if (cfg.grid) {
    TorusGrid expect(cfg.grid->length, cfg.grid->n);
    if (expect != g)
      throw InvalidArgumentError("config grid does not match field file grid");
  }
  const WeightField rho = resolve_weight(g, cfg.weight);

  const FunctionalReport rep = evaluate(v, rho, *cfg.params);
  const ExpMass mass = exp_mass(v);
  const MtDeficit deficit = moser_trudinger_deficit(v, rho);
  const double L = g.length();

  std::ostringstream json;
  json << "{\n";
  json << "  \"functional\": {\"value\": " << json_num(rep.value)
       << ", \"kinetic\": " << json_num(rep.kinetic) << ", \"z1\": " << json_num(rep.z1)
       << ", \"z2\": " << json_num(rep.z2) << ", \"log_term1\": " << json_num(rep.log_term1)
       << ", \"log_term2\": " << json_num(rep.log_term2) << "},\n";
  json << "  \"residual\": " << json_num(rep.grad_norm) << ",\n";
  json << "  \"exp_mass\": {\"plus\": " << json_num(mass.plus)
       << ", \"minus\": " << json_num(mass.minus) << ", \"ln_plus\": " << json_num(mass.ln_plus)
       << ", \"ln_minus\": " << json_num(mass.ln_minus) << "},\n";
  json << "  \"mt_deficit\": {\"classical\": " << json_num(deficit.classical)
       << ", \"weighted\": " << json_num(deficit.weighted) << "},\n";
  json << "  \"concentration\": " << concentration_json(v, {L / 16.0, L / 8.0, L / 4.0})
       << "\n";
  json << "}\n";

  ensure_out_dir(cfg);
  write_text(cfg.out_dir / "diagnose.json", json.str());
  std::cout << json.str();
  return kExitOk;
}

int cmd_eigen(const RunConfig& cfg) {
  TorusGrid grid(1.0, 4);
  const TorusGrid& g = require_grid(cfg, grid);
  const WeightField rho = resolve_weight(g, cfg.weight);
  double mu1 = 0.0;
  try {
    mu1 = first_eigenvalue(g);
  } catch (const ConvergenceError& e) {
    std::cerr << "eigensolver failed: " << e.what() << " (last " << e.last_estimate << ")\n";
    return kExitBudget;
  }
  std::ostringstream json;
  json << "{\"mu1\": " << num(mu1) << ", \"mu1_volume\": " << num(mu1 * g.volume());
  std::cout << "mu1 = " << num(mu1) << "\n";
  std::cout << "mu1 * V = " << num(mu1 * g.volume()) << "\n";
  if (!rho.is_unit()) {
    // informational: the weighted operator's first eigenvalue
    const double mu1w = first_eigenvalue(rho);
    std::cout << "mu1 (weighted) = " << num(mu1w) << "\n";
    json << ", \"mu1_weighted\": " << num(mu1w);
  } else {
    json << ", \"mu1_weighted\": null";
  }
  json << "}\n";
  ensure_out_dir(cfg);
  write_text(cfg.out_dir / "eigen.json", json.str());
  return kExitOk;
}

}  // namespace mfe
