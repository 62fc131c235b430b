#pragma once

#include "packbound/coefficient.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace packbound {

using Exponent = std::array<int, 3>;

// Graded lexicographic order, x1 > x2 > x3.
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
    if (da != db) return da < db;
    return a < b;
  }
};

// Same order with weights 2, 4, 6 (theta1 > theta2 > theta3 within a weight).
struct WeightedLess {
  static int weight(const Exponent& e) { return 2 * e[0] + 4 * e[1] + 6 * e[2]; }
  bool operator()(const Exponent& a, const Exponent& b) const {
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  }
};

template <class Less>
class SparsePoly {
public:
  using Terms = std::map<Exponent, Coefficient, Less>;

  SparsePoly() = default;
  explicit SparsePoly(const Coefficient& c) { add_term({0, 0, 0}, c); }

  static SparsePoly monomial(const Exponent& e, const Coefficient& c = Coefficient(1)) {
    SparsePoly p;
    p.add_term(e, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coefficient coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coefficient() : it->second;
  }

  void add_term(const Exponent& e, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  // Largest exponent in the term order; undefined on zero.
  const Exponent& leading_exponent() const { return terms_.rbegin()->first; }
  const Coefficient& leading_coefficient() const { return terms_.rbegin()->second; }

  SparsePoly& operator+=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  SparsePoly& operator*=(const Coefficient& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    Terms out;
    for (const auto& [e, v] : terms_) {
      Coefficient p = v * c;
      if (!p.is_zero()) out.emplace(e, std::move(p));
    }
    terms_ = std::move(out);
    return *this;
  }
  SparsePoly& operator*=(const mpq_class& q) { return *this *= Coefficient(q); }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator-(SparsePoly a) { return a *= Coefficient(-1); }
  friend SparsePoly operator*(SparsePoly a, const Coefficient& c) { return a *= c; }
  friend SparsePoly operator*(const Coefficient& c, SparsePoly a) { return a *= c; }
  friend SparsePoly operator*(SparsePoly a, const mpq_class& q) { return a *= q; }
  friend SparsePoly operator*(const mpq_class& q, SparsePoly a) { return a *= q; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
  }
  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  SparsePoly pow(int n) const {
    SparsePoly r(Coefficient(1)), b = *this;
    while (n > 0) {
      if (n & 1) r *= b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

  // Partial derivative with respect to variable i (0-based).
  SparsePoly derivative(int i) const {
    SparsePoly r;
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponent f = e;
      --f[i];
      r.add_term(f, c * mpq_class(e[i]));
    }
    return r;
  }

  // Apply a coefficient map term by term (e.g. dropping pi powers).
  SparsePoly map_coefficients(const std::function<Coefficient(const Coefficient&)>& f) const {
    SparsePoly r;
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  // One term per line, "a b c : coefficient", leading term first.
  std::string serialize() const {
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& e = it->first;
      s += std::to_string(e[0]) + " " + std::to_string(e[1]) + " " + std::to_string(e[2]) +
           " : " + it->second.str() + "\n";
    }
    return s;
  }
  static SparsePoly deserialize(const std::string& text);

protected:
  Terms terms_;
};

class ExactPolynomial : public SparsePoly<GrlexLess> {
public:
  using Base = SparsePoly<GrlexLess>;
  using Base::Base;
  ExactPolynomial(const Base& b) : Base(b) {}
  ExactPolynomial(Base&& b) : Base(std::move(b)) {}

  static ExactPolynomial variable(int i);

  int degree() const;
  bool is_homogeneous() const;
  ExactPolynomial homogeneous_part(int k) const;

  // p(y) with y_i = signs[i] * x_{perm[i]}.
  ExactPolynomial substitute_signed_permutation(const std::array<int, 3>& perm,
                                                const std::array<int, 3>& signs) const;

  // Invariant under all coordinate permutations and sign changes.
  bool is_b3_invariant() const;

  template <class T, class Conv>
  T evaluate(const std::array<T, 3>& x, Conv conv) const {
    T s = conv(Coefficient());
    for (const auto& [e, c] : terms_) {
      T m = conv(c);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < e[i]; ++k) m = m * x[i];
      s = s + m;
    }
    return s;
  }
  double evaluate_double(const std::array<double, 3>& x) const;
};

class ThetaPolynomial : public SparsePoly<WeightedLess> {
public:
  using Base = SparsePoly<WeightedLess>;
  using Base::Base;
  ThetaPolynomial(const Base& b) : Base(b) {}
  ThetaPolynomial(Base&& b) : Base(std::move(b)) {}

  static ThetaPolynomial theta(int i);

  // Weighted degree 2i + 4j + 6k of the top term; -1 for zero.
  int weighted_degree() const;
  ThetaPolynomial weighted_part(int w) const;
  // Value at x = 0, i.e. the constant term.
  Coefficient constant_term() const { return coefficient({0, 0, 0}); }

  double evaluate_double(const std::array<double, 3>& theta) const;
};

// All theta-monomials of weighted degree <= w in increasing weighted order.
std::vector<Exponent> theta_monomials(int max_weight);
// All theta-monomials of weighted degree exactly w.
std::vector<Exponent> theta_monomials_of_weight(int w);
// All x-monomials of degree k, leading (largest) first.
std::vector<Exponent> monomials_of_degree(int k);

ExactPolynomial power_sum(int k);  // x1^k + x2^k + x3^k
ExactPolynomial expand_theta(const ThetaPolynomial& t);
// Exact inverse of expand_theta on B3-invariant polynomials.
ThetaPolynomial contract_theta(const ExactPolynomial& p);

}  // namespace packbound
