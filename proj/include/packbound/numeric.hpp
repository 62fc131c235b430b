#pragma once

#include "packbound/coefficient.hpp"
#include "packbound/model.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>

#include <string>
#include <vector>

namespace packbound {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

}  // namespace packbound

// Boost's adapter predates the infinity()/quiet_NaN() members that Eigen 3.4 requires.
template <>
struct Eigen::NumTraits<packbound::Real> : Eigen::GenericNumTraits<packbound::Real> {
  using Real = packbound::Real;
  using NonInteger = packbound::Real;
  using Literal = double;
  using Nested = packbound::Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return -(std::numeric_limits<Real>::max)(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};

namespace packbound {
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Sets the default Real precision (in bits) for its lifetime.
class PrecisionScope {
public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  unsigned saved_digits_;
};

unsigned bits_to_digits10(unsigned bits);
Real to_real(const mpq_class& q);
Real to_real(const Coefficient& c);
Real real_pi();
// Decimal string that reads back to the same value at the current precision.
std::string real_str(const Real& x);
Real parse_real(const std::string& s);

struct NumericBlock {
  BlockRole role = BlockRole::R;
  int irrep = -1;  // -1 for the LP block and blocks without an irreducible
  int size = 0;
  bool diagonal = false;
  std::string label;
};

struct NumericEntry {
  int block = 0;
  int i = 0;
  int j = 0;
  Real value;
};

// min <C, Y> subject to <A_k, Y> = b_k, Y >= 0 (blockwise), with symmetric block data
// listed on the upper triangle. A diagonal block holds nonnegative scalars.
struct NumericModel {
  unsigned precision = 256;
  std::vector<NumericBlock> blocks;
  std::vector<NumericEntry> objective;
  std::vector<std::vector<NumericEntry>> rows;
  std::vector<Real> rhs;
  std::vector<std::string> row_labels;

  int lp_block() const;  // index of the diagonal block, or -1
};

// Per-block matrices of a solution; a diagonal block is stored as a column vector.
struct SolutionBundle {
  unsigned precision = 256;
  std::vector<RealMatrix> blocks;
  Real primal_objective = 0;
  Real dual_objective = 0;
  Real primal_infeasibility = 0;
  Real dual_infeasibility = 0;
  int iterations = 0;
  std::string status;
  std::string backend;
};

// Inequalities become equalities with one LP slack each: normalization minus a slack
// equals 1, sample functionals plus a slack equal 0.
NumericModel to_numeric(const SdpModel& model, unsigned precision);

bool operator==(const NumericEntry& a, const NumericEntry& b);
bool operator==(const NumericBlock& a, const NumericBlock& b);
bool operator==(const NumericModel& a, const NumericModel& b);

}  // namespace packbound
