#pragma once

#include "packbound/geometry.hpp"
#include "packbound/interval.hpp"
#include "packbound/model.hpp"
#include "packbound/numeric.hpp"
#include "packbound/rational_matrix.hpp"

#include <string>
#include <vector>

namespace packbound {

// Square matrix of intervals, row major.
struct IntervalMatrix {
  int n = 0;
  std::vector<Interval> a;

  IntervalMatrix() = default;
  explicit IntervalMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}
  Interval& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Interval& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

Interval to_interval(const Coefficient& c, mpfr_prec_t prec = Interval::default_precision());
Interval to_interval(const Real& x, mpfr_prec_t prec = Interval::default_precision());

struct RepairedMatrix {
  IntervalMatrix tilde;  // encloses L L^T + lambda I exactly
  Real lambda = 0;       // lower bound on the smallest eigenvalue of the enclosed matrix
  RealMatrix cholesky;   // L with A - lambda I ~ L L^T
};

// Halves lambda, starting from the power of two above the smallest diagonal entry, until
// A - lambda I has a Cholesky factorization. Throws NotRepairable below lambda_floor.
RepairedMatrix repair_psd(const RealMatrix& a, double lambda_floor = 1e-40);

// A maximal linearly independent set of entries of the S2 blocks, expressed in the
// theta-monomials of the identity rows, with an invertible square submatrix A-hat.
struct ResidualBasis {
  struct Entry {
    int block = 0;
    int i = 0;
    int j = 0;
  };
  std::vector<Entry> entries;
  std::vector<int> rows;  // pivot rows, as indices into the identity rows
  std::vector<int> identity_rows;  // constraint indices of the identity rows
  RationalMatrix ahat;
  RationalMatrix ahat_inverse;
  mpq_class ahat_inverse_norm;  // max row sum of |A-hat^{-1}|
};

// Throws BasisDeficient when the entries do not span every identity row.
ResidualBasis residual_basis(const SdpModel& model);

struct ResidualBound {
  std::vector<Interval> coefficients;  // theta-coefficients of r, one per identity row
  Interval r_inf;                      // max |coefficient|
  Interval expansion_bound;            // |A-hat^{-1}|_inf * |r|_inf
  std::vector<int> s2_blocks;
  std::vector<Interval> t_norm;        // Frobenius bound on T per S2 block
};

ResidualBound residual_bound(const std::vector<IntervalMatrix>& blocks, const SdpModel& model,
                             const ResidualBasis& basis);

struct CertifyOptions {
  double lambda_floor = 1e-40;
  mpfr_prec_t precision = 256;
};

struct CertifiedSolution {
  std::string solid;
  int d = 0;
  std::vector<IntervalMatrix> blocks;
  std::vector<Real> lambdas;
  ResidualBound residual;
  mpq_class ahat_inverse_norm;
  Interval normalization;  // g(0) before rescaling
  Interval scale;          // 1 / g(0)
  Interval objective;      // f(0) after rescaling
  mpq_class alpha = 1;
  Interval volume;
  Interval bound;          // alpha^3 f(0) vol K
};

// Checks (a) and the coefficient-norm inequality for every S2 block on already repaired
// blocks. Throws CertificationFailed naming the failing inequality.
CertifiedSolution certify_repaired(std::vector<IntervalMatrix> blocks, std::vector<Real> lambdas,
                                   const SdpModel& model, const ResidualBasis& basis, const Solid& solid,
                                   const mpq_class& alpha, const CertifyOptions& opts = {});

// Repairs every non-diagonal block of sol and certifies the result. Nonpositivity on the
// sample region is a separate obligation (domaincheck).
CertifiedSolution certify(const SolutionBundle& sol, const SdpModel& model, const Solid& solid,
                          const mpq_class& alpha, const CertifyOptions& opts = {});

// Moves the numerical residual of the identity rows into the S2 blocks, so that the
// identity holds to working precision.
SolutionBundle absorb_residual(const SolutionBundle& sol, const SdpModel& model, const ResidualBasis& basis);

std::string certificate_to_json(const CertifiedSolution& c);
// Body, upper bound, factor alpha.
std::string certificate_report(const CertifiedSolution& c);

}  // namespace packbound
