#pragma once

#include "packbound/ipm.hpp"
#include "packbound/numeric.hpp"
#include "packbound/polynomial.hpp"

namespace packbound {

struct SolverOptions {
  unsigned precision = 256;
  double tol = 1e-20;
  int max_iter = 250;
  double lambda0 = 100;
  bool verbose = false;
};

// Dense primal-dual path following (HKM direction, Mehrotra predictor-corrector).
// Throws NoProgress or Infeasible.
SolutionBundle solve_builtin(const NumericModel& model, const SolverOptions& opts);

// Re-solve without objective, bounded by <C,Y> <= z* + eta and by a trace cap, which
// drives the solution to the analytic center of the near-optimal face.
SolutionBundle analytic_center_pass(const NumericModel& model, const SolutionBundle& first, double eta,
                                    const SolverOptions& opts);

// Smallest eigenvalue over all blocks (LP entries count as 1x1 blocks).
Real min_eigenvalue(const SolutionBundle& sol, const NumericModel& model);
// max_k |<A_k, Y> - b_k|
Real max_violation(const SolutionBundle& sol, const NumericModel& model);
Real objective_value(const SolutionBundle& sol, const NumericModel& model);

// Is the B3-invariant form p of degree 2d a sum of squares? Decided through
// min t s.t. p + t theta1^d = sum_pi <V^{pi}, R^pi> over the top-degree index pairs.
struct SosResult {
  bool feasible = false;
  Real t_star = 0;
  SolutionBundle solution;
};
SosResult sos_feasibility(const ThetaPolynomial& p, int d, const SolverOptions& opts, double threshold = 1e-8);

// x1^6 + x2^6 + x3^6 - sum x_i^4 x_j^2 + 3 x1^2 x2^2 x3^2
ExactPolynomial robinson_polynomial();

}  // namespace packbound
