#pragma once

#include "packbound/numeric.hpp"

#include <vector>

namespace packbound {

// The equality constraints of a NumericModel eliminated into the form
//   min c^T z + c0  s.t.  X(z) = sum_i F_i z_i - F0 >= 0,
// with dense blocks F[b][i] and a diagonal part x(z) = G z - g0.
struct PrimalForm {
  int m = 0;
  std::vector<int> dense_blocks;  // model block index of each dense block
  std::vector<RealMatrix> f0;
  std::vector<std::vector<RealMatrix>> f;  // f[b][i]
  int lp_block = -1;
  RealMatrix g;
  RealVector g0;
  RealVector c;
  Real c0 = 0;
  int eliminated_rows = 0;
  int dependent_rows = 0;
};

PrimalForm eliminate(const NumericModel& model);

struct IpmOptions {
  double tol = 1e-20;
  int max_iter = 250;
  double gamma = 0.9;
  double lambda0 = 100;
  bool verbose = false;
};

struct IpmResult {
  std::string status;  // "optimal", "infeasible", "no-progress"
  RealVector z;
  std::vector<RealMatrix> x, y;  // dense blocks
  RealVector xlp, ylp;
  Real primal_objective = 0, dual_objective = 0;
  Real primal_infeasibility = 0, dual_infeasibility = 0;
  int iterations = 0;
};

IpmResult run_ipm(const PrimalForm& pf, const IpmOptions& opts);

// Model blocks reconstructed from z, so that the equality constraints hold up to rounding.
std::vector<RealMatrix> recover_blocks(const PrimalForm& pf, const NumericModel& model, const RealVector& z);

}  // namespace packbound
