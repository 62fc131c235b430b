#include "packbound/solver.hpp"

#include "packbound/b3.hpp"
#include "packbound/errors.hpp"
#include "packbound/model.hpp"

#include <algorithm>

namespace packbound {

namespace {

IpmOptions ipm_options(const SolverOptions& o) {
  IpmOptions io;
  io.tol = o.tol;
  io.max_iter = o.max_iter;
  io.lambda0 = o.lambda0;
  io.verbose = o.verbose;
  return io;
}

Real functional(const std::vector<NumericEntry>& es, const std::vector<RealMatrix>& blocks,
                const NumericModel& model) {
  Real s = 0;
  for (const auto& e : es) {
    const auto& b = blocks[e.block];
    if (model.blocks[e.block].diagonal)
      s += e.value * b(e.i, 0);
    else
      s += (e.i == e.j ? e.value : Real(2 * e.value)) * b(e.i, e.j);
  }
  return s;
}

}  // namespace

SolutionBundle solve_builtin(const NumericModel& model, const SolverOptions& opts) {
  PrecisionScope scope(opts.precision);
  PrimalForm pf = eliminate(model);
  IpmResult r = run_ipm(pf, ipm_options(opts));
  if (r.status == "infeasible") throw Infeasible("interior point iterates diverged");
  if (r.status != "optimal") throw NoProgress("interior point method stalled after " + std::to_string(r.iterations) + " iterations");
  SolutionBundle sol;
  sol.precision = opts.precision;
  sol.blocks = recover_blocks(pf, model, r.z);
  sol.primal_objective = r.primal_objective;
  sol.dual_objective = r.dual_objective;
  sol.primal_infeasibility = r.primal_infeasibility;
  sol.dual_infeasibility = r.dual_infeasibility;
  sol.iterations = r.iterations;
  sol.status = r.status;
  sol.backend = "builtin";
  return sol;
}

SolutionBundle analytic_center_pass(const NumericModel& model, const SolutionBundle& first, double eta,
                                    const SolverOptions& opts) {
  PrecisionScope scope(opts.precision);
  NumericModel ac = model;
  int lp = ac.lp_block();
  int base = 0;
  if (lp < 0) {
    ac.blocks.push_back({BlockRole::R, -1, 0, true, "LP slacks"});
    lp = static_cast<int>(ac.blocks.size()) - 1;
  } else {
    base = ac.blocks[lp].size;
  }
  ac.blocks[lp].size += 2;

  std::vector<NumericEntry> obj_row = model.objective;
  obj_row.push_back({lp, base, base, Real(1)});
  ac.rows.push_back(obj_row);
  ac.rhs.push_back(objective_value(first, model) + Real(eta));
  ac.row_labels.push_back("objective cap");

  // Trace cap: keeps the feasible set bounded so that the analytic center exists.
  Real trace = 0;
  std::vector<NumericEntry> trace_row;
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    if (model.blocks[b].diagonal) continue;
    trace += first.blocks[b].trace();
    for (int i = 0; i < model.blocks[b].size; ++i) trace_row.push_back({static_cast<int>(b), i, i, Real(1)});
  }
  trace_row.push_back({lp, base + 1, base + 1, Real(1)});
  ac.rows.push_back(trace_row);
  ac.rhs.push_back(std::max<Real>(Real(1), 10 * trace));
  ac.row_labels.push_back("trace cap");
  ac.objective.clear();

  SolutionBundle sol = solve_builtin(ac, opts);
  // Drop the two auxiliary slacks again.
  if (model.lp_block() < 0) {
    sol.blocks.pop_back();
  } else {
    RealMatrix v = sol.blocks[lp].topRows(base);
    sol.blocks[lp] = v;
  }
  sol.primal_objective = objective_value(sol, model);
  sol.dual_objective = first.dual_objective;
  sol.status = "analytic-center";
  return sol;
}

Real min_eigenvalue(const SolutionBundle& sol, const NumericModel& model) {
  PrecisionScope scope(sol.precision);
  Real best = std::numeric_limits<double>::max();
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto& m = sol.blocks[b];
    if (model.blocks[b].diagonal) {
      if (m.size() > 0) best = std::min<Real>(best, m.minCoeff());
    } else {
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
      best = std::min<Real>(best, es.eigenvalues().minCoeff());
    }
  }
  return best;
}

Real max_violation(const SolutionBundle& sol, const NumericModel& model) {
  PrecisionScope scope(sol.precision);
  Real worst = 0;
  for (std::size_t k = 0; k < model.rows.size(); ++k)
    worst = std::max<Real>(worst, abs(functional(model.rows[k], sol.blocks, model) - model.rhs[k]));
  return worst;
}

Real objective_value(const SolutionBundle& sol, const NumericModel& model) {
  PrecisionScope scope(sol.precision);
  return functional(model.objective, sol.blocks, model);
}

SosResult sos_feasibility(const ThetaPolynomial& p, int d, const SolverOptions& opts, double threshold) {
  PrecisionScope scope(opts.precision);
  const auto& data = isotypic_data();
  NumericModel model;
  model.precision = opts.precision;
  std::map<Exponent, std::vector<NumericEntry>, WeightedLess> rows;
  for (std::size_t pi = 0; pi < data.size(); ++pi) {
    std::vector<IndexPair> pairs;
    for (const auto& pr : index_set(data[pi], d))
      if (WeightedLess::weight(pr.a) + data[pi].rows[pr.row].degree == d) pairs.push_back(pr);
    if (pairs.empty()) continue;
    const int b = static_cast<int>(model.blocks.size());
    model.blocks.push_back({BlockRole::R, static_cast<int>(pi), static_cast<int>(pairs.size()), false,
                            "R " + data[pi].irrep.name});
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i; j < pairs.size(); ++j) {
        Exponent ab{pairs[i].a[0] + pairs[j].a[0], pairs[i].a[1] + pairs[j].a[1], pairs[i].a[2] + pairs[j].a[2]};
        ThetaPolynomial e =
            ThetaPolynomial(ThetaPolynomial::Base::monomial(ab)) * data[pi].qpi[pairs[i].row][pairs[j].row];
        for (const auto& [m, c] : e.terms())
          rows[m].push_back({b, static_cast<int>(i), static_cast<int>(j), to_real(c)});
      }
  }
  const int lp = static_cast<int>(model.blocks.size());
  model.blocks.push_back({BlockRole::R, -1, 1, true, "t"});
  const Exponent top{d, 0, 0};
  rows[top];
  for (const auto& [m, c] : p.terms()) rows[m];
  for (auto& [m, es] : rows) {
    if (m == top) es.push_back({lp, 0, 0, Real(-1)});
    model.rows.push_back(es);
    model.rhs.push_back(to_real(p.coefficient(m)));
    model.row_labels.push_back("identity");
  }
  model.objective.push_back({lp, 0, 0, Real(1)});
  SosResult r;
  r.solution = solve_builtin(model, opts);
  r.t_star = r.solution.blocks[lp](0, 0);
  r.feasible = r.t_star <= Real(threshold);
  return r;
}

ExactPolynomial robinson_polynomial() {
  ExactPolynomial p;
  for (int i = 0; i < 3; ++i) {
    Exponent e{0, 0, 0};
    e[i] = 6;
    p.add_term(e, Coefficient(1));
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      Exponent f{0, 0, 0};
      f[i] = 4;
      f[j] = 2;
      p.add_term(f, Coefficient(-1));
    }
  }
  p.add_term({2, 2, 2}, Coefficient(3));
  return p;
}

}  // namespace packbound
