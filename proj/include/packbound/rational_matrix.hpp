#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace packbound {

class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix transpose() const;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  std::vector<mpq_class> operator*(const std::vector<mpq_class>& x) const;
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  // Row-sum norm max_i sum_j |a_ij|.
  mpq_class inf_norm() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpq_class> a_;
};

// Solves A x = b exactly. A may be overdetermined if consistent; throws Singular when
// the solution is not unique and Inconsistent when none exists.
std::vector<mpq_class> solve_exact(const RationalMatrix& a, const std::vector<mpq_class>& b);
// Multiple right-hand sides (columns of B).
RationalMatrix solve_exact(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix inverse(const RationalMatrix& a);
int rank(const RationalMatrix& a);
// Basis of the right null space, one vector per column of the result.
RationalMatrix null_space(const RationalMatrix& a);

}  // namespace packbound
