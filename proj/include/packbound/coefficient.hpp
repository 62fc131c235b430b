#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

namespace packbound {

// Element of Q[pi, 1/pi]: a finite sum of rational multiples of pi^e.
class Coefficient {
public:
  using Terms = std::map<int, mpq_class>;

  Coefficient() = default;
  Coefficient(const mpq_class& q, int pi_exp = 0);
  Coefficient(long n) : Coefficient(mpq_class(n)) {}

  static Coefficient pi_power(int e) { return Coefficient(mpq_class(1), e); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  // Rational part (pi^0 term); zero if absent.
  mpq_class rational_part() const;
  int min_pi_exp() const;
  int max_pi_exp() const;

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Coefficient& o);
  Coefficient& operator*=(const mpq_class& q);
  Coefficient operator-() const;

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(Coefficient a, const mpq_class& q) { return a *= q; }
  friend Coefficient operator*(const mpq_class& q, Coefficient a) { return a *= q; }
  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

  double to_double() const;
  // "q1 * pi^e1 + q2 * pi^e2" in increasing exponent order; "0" for zero.
  std::string str() const;
  static Coefficient parse(const std::string& s);

private:
  void add_term(int e, const mpq_class& q);
  Terms terms_;
};

}  // namespace packbound
