#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace packbound {

// Closed interval [lower, upper] with MPFR endpoints; every operation rounds the lower
// endpoint down and the upper endpoint up, so results enclose the exact values.
class Interval {
public:
  static mpfr_prec_t default_precision();
  static void set_default_precision(mpfr_prec_t bits);

  Interval() : Interval(0L) {}
  explicit Interval(long v, mpfr_prec_t prec = default_precision());
  explicit Interval(double v, mpfr_prec_t prec = default_precision());
  explicit Interval(const mpq_class& q, mpfr_prec_t prec = default_precision());
  Interval(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec = default_precision());
  // Decimal strings; the interval encloses both values.
  static Interval from_strings(const std::string& lo, const std::string& hi,
                               mpfr_prec_t prec = default_precision());
  static Interval hull(const Interval& a, const Interval& b);
  static Interval pi(mpfr_prec_t prec = default_precision());

  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  double lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const;
  // Decimal endpoints rounded outward.
  std::string lower_str(int digits = 40) const;
  std::string upper_str(int digits = 40) const;

  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_le(const Interval& o) const { return mpfr_lessequal_p(hi_, o.lo_); }
  bool certainly_lt(const Interval& o) const { return mpfr_less_p(hi_, o.lo_); }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);
  Interval operator-() const;

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }

  Interval sqr() const;
  Interval pow(unsigned n) const;
  Interval sqrt() const;
  Interval log() const;
  Interval exp() const;
  Interval abs() const;
  // Upper bound on |x| over the interval.
  Interval mag() const;
  Interval width() const;

private:
  void init(mpfr_prec_t prec);
  mpfr_t lo_, hi_;
};

}  // namespace packbound
