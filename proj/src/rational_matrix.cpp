#include "packbound/rational_matrix.hpp"

#include "packbound/errors.hpp"

#include <utility>

namespace packbound {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::vector<mpq_class> RationalMatrix::operator*(const std::vector<mpq_class>& x) const {
  std::vector<mpq_class> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
  return y;
}

mpq_class RationalMatrix::inf_norm() const {
  mpq_class best = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    mpq_class s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += abs((*this)(i, j));
    if (s > best) best = s;
  }
  return best;
}

namespace {

// Gauss-Jordan on [A | B]; returns pivot columns of A. Rows of A beyond the rank are
// left zero in the A part.
std::vector<std::size_t> reduce(RationalMatrix& a, RationalMatrix& b) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(p, j), b(r, j));
    }
    mpq_class inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      mpq_class f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(r, j) != 0) b(i, j) -= f * b(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RationalMatrix solve_exact(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows()) throw Inconsistent("dimension mismatch");
  RationalMatrix ra = a, rb = b;
  auto piv = reduce(ra, rb);
  for (std::size_t i = piv.size(); i < ra.rows(); ++i)
    for (std::size_t j = 0; j < rb.cols(); ++j)
      if (rb(i, j) != 0) throw Inconsistent("system has no solution");
  if (piv.size() != a.cols()) throw Singular("system is rank deficient");
  RationalMatrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[i], j) = rb(i, j);
  return x;
}

std::vector<mpq_class> solve_exact(const RationalMatrix& a, const std::vector<mpq_class>& b) {
  RationalMatrix bm(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
  RationalMatrix x = solve_exact(a, bm);
  std::vector<mpq_class> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = x(i, 0);
  return out;
}

RationalMatrix inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw Singular("inverse of a non-square matrix");
  return solve_exact(a, RationalMatrix::identity(a.rows()));
}

int rank(const RationalMatrix& a) {
  RationalMatrix ra = a, rb(a.rows(), 0);
  return static_cast<int>(reduce(ra, rb).size());
}

RationalMatrix null_space(const RationalMatrix& a) {
  RationalMatrix ra = a, rb(a.rows(), 0);
  auto piv = reduce(ra, rb);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  RationalMatrix n(a.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    n(free[k], k) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) n(piv[i], k) = -ra(i, free[k]);
  }
  return n;
}

}  // namespace packbound
